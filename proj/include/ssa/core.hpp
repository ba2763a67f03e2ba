#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ssa/spectral.hpp"

namespace ssa {

enum class Branch { automatic, smooth, unsmooth };

// Constraint and problem shape for one SSA solve. Exactly one of rho1 / ht1
// is given; ht1 is converted through rho = cos(pi/ht).
struct SsaConfig {
  std::optional<double> rho1;
  std::optional<double> ht1;
  int delta = 0;
  int L = 0;
  double l = 1.0;
  Branch branch = Branch::automatic;
  double tol_nz = kDefaultNzTol;
  // When false, band-limited targets are solved on the support-restricted
  // regular branch only (no spectral completion).
  bool allow_completion = true;

  double resolve_rho1() const;
};

enum class SolutionKind { regular, degenerate_mse, boundary, completed };

struct SsaDiagnostics {
  double criterion_value = 0.0;     // b'gamma_delta
  double target_correlation = 0.0;  // rho(y, z, delta)
  double acf1 = 0.0;                // lag-one ACF of the predictor output
  double holding_time = 0.0;
  double sign_accuracy = 0.0;
  double mse_vs_target = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |acf1 - rho1| at convergence
  std::string branch;
};

struct SsaSolution {
  Vec b;
  double nu = 0.0;  // tuning parameter; meaningless for kind != regular/completed
  int d_sign = 1;
  SolutionKind kind = SolutionKind::regular;
  int completed_index = -1;    // i_0 (0-based) when kind == completed
  double n_tilde = 0.0;        // completion weight when kind == completed
  SsaDiagnostics diagnostics;
};

// One-parameter solution family b(nu) = sum_i w_i/(2 lambda_i - nu) v_i with
// unit D; throws near a singular nu carrying nonzero weight.
Vec b_of_nu(const Vec& gamma_delta, double nu, const SpectralBasis& basis,
            double tol_nz = kDefaultNzTol);

// Lag-one ACF of b(nu), evaluated in the spectral domain over the support.
double rho_of_nu(const SpectralWeights& w, const SpectralBasis& basis, double nu);

// Full SSA solve: dispatches to the boundary case at |rho1| = rho_max, to
// spectral completion for band-limited targets and to monotone root-finding
// on the branch |nu| >= 2 otherwise.
//
// target_l2sq, when given, is the variance of the full (two-sided) target on
// white noise and feeds the target-correlation and MSE diagnostics; it
// defaults to |gamma_delta|^2 (correlation against the MSE predictor).
SsaSolution solve_ssa(const Vec& gamma_delta, const SsaConfig& config,
                      std::optional<double> target_l2sq = std::nullopt);

// Boundary solution at rho1 = +/- rho_max(L).
SsaSolution boundary_solution(const Vec& gamma_delta, int sign, double l,
                              double tol_nz = kDefaultNzTol);

// Band-limited solve: spectrally completed candidates at nu = 2 lambda_{i0}
// for i0 outside the support, compared against the support-restricted regular
// branch solution when that one is feasible.
SsaSolution solve_completed(const Vec& gamma_delta, const SsaConfig& config,
                            std::optional<double> target_l2sq = std::nullopt);

// Length-unconstrained variant: the solve_ssa direction rescaled to minimize
// the MSE against gamma_delta.
SsaSolution solve_ssa_mse(const Vec& gamma_delta, double rho1);

// Holding time of a zero-mean stationary Gaussian series from its lag-one
// autocorrelation, and its inverse.
double ht_from_rho(double rho);
double rho_from_ht(double ht);

// P(sign agreement) of two jointly Gaussian zero-mean variables with
// correlation rho.
double sign_accuracy(double rho);

// Transfer ordinates 1/(2 cos(omega) - nu); singular ordinates come back as
// +/- infinity.
Vec ssa_ar2_transfer(double nu, const Vec& omegas);

struct DualReport {
  int trials = 0;
  int violations = 0;
  int skipped = 0;
  double worst_excess = 0.0;  // max constraint-side ACF gain seen (signed)
};

// Property check of the dual characterization: random perturbations projected
// back onto {b'b = l, b'gamma = criterion} never beat the solution's ACF in
// the branch direction.
DualReport verify_dual(const SsaSolution& solution, const Vec& gamma_delta,
                       int trials, std::uint64_t seed);

}  // namespace ssa
