#pragma once

#include "ssa/stationary.hpp"

namespace ssa {

struct IntegratedConfig {
  int d = 1;  // integration order, 1 or 2
  double rho1 = 0.0;
  int L = 0;
  int L_tilde = 0;  // rectangular MA-inversion depth; defaults to 2L
  double tol_nz = kDefaultNzTol;
};

struct IntegratedDiagnostics {
  double acf1_of_diff = 0.0;  // epsilon-space ACF(1) of the d-th differences
  double ht_of_diff = 0.0;
  double mse_vs_benchmark = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool condition_warning = false;
  double rcond = 0.0;
};

struct IntegratedSolution {
  Vec b_x;
  double lambda_tilde = 0.0;
  double gamma0 = 0.0;
  double gamma0_dot = 0.0;  // d = 2 only
  Vec b_eps;
  IntegratedDiagnostics diagnostics;
};

// Lower-triangular summation matrix (ones) and its bidiagonal inverse.
std::pair<Mat, Mat> sigma_delta_matrices(int L);

// Cointegration-constraint parametrization matrix B (L x (L-d)).
Mat b_matrix(int L, int d);

// Length-L MSE benchmark in levels for I(d) data whose d-th differences
// follow `model`; built by rewriting the target as level/slope terms plus a
// stationary remainder and substituting optimal forecasts for the acausal
// part. The result carries the target's transfer-function value (and slope,
// for d = 2) at frequency zero.
Vec integrated_mse_benchmark(const TargetSpec& target, const ProcessModel& model, int L,
                             int d);

// Stationary filter-error variance of a candidate level filter against the
// benchmark, measured through the cumulated MA inversion Xi_tilde.
double mse_vs_benchmark(const Vec& b_x, const Vec& gamma_mse, const Mat& xi_tilde);

IntegratedSolution solve_i1_ssa(const TargetSpec& target, const ProcessModel& model,
                                const IntegratedConfig& config);

IntegratedSolution solve_i2_ssa(const TargetSpec& target, const ProcessModel& model,
                                const IntegratedConfig& config);

}  // namespace ssa
