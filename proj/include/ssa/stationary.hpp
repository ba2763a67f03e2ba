#pragma once

#include <vector>

#include "ssa/core.hpp"
#include "ssa/targets.hpp"

namespace ssa {

enum class ProcessKind { white_noise, arma };

// Driving-noise description. ARMA convention:
//   x_t = a_1 x_{t-1} + ... + a_p x_{t-p} + e_t + m_1 e_{t-1} + ... + m_q e_{t-q}
// Stationarity of the AR part and invertibility of the MA part are checked at
// construction.
struct ProcessModel {
  ProcessKind kind = ProcessKind::white_noise;
  std::vector<double> ar;
  std::vector<double> ma;
  double sigma = 1.0;

  static ProcessModel white_noise(double sigma = 1.0);
  static ProcessModel arma(std::vector<double> ar, std::vector<double> ma,
                           double sigma = 1.0);
  bool is_white() const;
};

// Wold / MA-inversion weights xi_0..xi_{n-1} of the model, xi_0 = 1.
Vec wold_weights(const ProcessModel& model, int n);

// rows x cols lower-banded Toeplitz matrix with entry (i, j) = xi_{i-j}.
Mat wold_matrix(const Vec& xi, int rows, int cols);

// Forward-substitution inverse of the Wold convolution: recovers the first L
// x-space coefficients from the epsilon-space ones.
Vec deconvolve(const Vec& conv, const Vec& xi, int L);

// Causal coefficients (gamma * xi)_{k+delta}, k = 0..n-1, of the target
// convolved with the model's Wold weights.
Vec target_xi_causal(const TargetSpec& target, const ProcessModel& model, int n,
                     int delta);

// Variance of the target output on the model (unit innovation variance).
double target_variance(const TargetSpec& target, const ProcessModel& model);

// First L coefficients of the causal MSE filter for dependent data, i.e. the
// optimal-forecast substitution of the target's acausal lags.
Vec mse_predictor_dependent(const TargetSpec& target, const ProcessModel& model, int L,
                            int delta);

struct DependentSolution {
  Vec b_x;    // filter applied to the observed series
  Vec b_eps;  // epsilon-space representation carrying the constraints
  SsaSolution solution;
};

// SSA for dependent stationary data: solves the white-noise criterion in
// epsilon space against Xi * gamma_hat and deconvolves back.
DependentSolution solve_ssa_dependent(const TargetSpec& target, const ProcessModel& model,
                                      const SsaConfig& config);

// Extended criterion for slowly decaying weights: epsilon-space solve at
// length L_tilde > L against (gamma * xi)_{k+delta}, with the x-space filter
// of length L recovered from the first L epsilon coefficients.
DependentSolution solve_ssa_extended(const TargetSpec& target, const ProcessModel& model,
                                     const SsaConfig& config, int L_tilde);

}  // namespace ssa
