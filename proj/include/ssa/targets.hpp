#pragma once

#include <string>

#include "ssa/spectral.hpp"

namespace ssa {

// A two-sided target filter z_t = sum_k gamma_k x_{t-k} over the finite lag
// range [min_lag, min_lag + gamma.size() - 1], plus the horizon and causal
// length of the approximation problem built on it.
struct TargetSpec {
  Vec gamma;
  int min_lag = 0;
  int delta = 0;
  int L = 0;
  // True when coefficients outside the stored span are exactly zero (finite
  // filters); false for truncated approximations of bi-infinite filters.
  bool exact_outside = false;
  std::string label;

  int max_lag() const { return min_lag + static_cast<int>(gamma.size()) - 1; }
  double at(int lag) const {
    if (lag < min_lag || lag > max_lag()) return 0.0;
    return gamma(lag - min_lag);
  }
  double sum() const { return gamma.sum(); }
  // Variance of the target output on standardized white noise.
  double l2sq() const { return gamma.squaredNorm(); }
  // Lag-one autocorrelation of the target output on white noise.
  double acf1() const { return ssa::acf1(gamma); }
};

// Symmetric weights of the bi-infinite HP trend filter, truncated at
// half_span and renormalized to unit sum. Computed as the center row of the
// penalized least-squares smoother on a window of width 2*half_span + 1.
TargetSpec hp_two_sided(double lambda, int half_span);

// Center row of the HP smoother on a short window of width 2*half_span + 1,
// edge effects included and no tail check. This is the trend filter an
// analyst actually applies mid-sample with limited data on both sides.
TargetSpec hp_finite_window(double lambda, int half_span);

// One-sided (concurrent) HP trend filter: last row of the smoother on an
// L-window, returned with b(0) applied to x_t, b(1) to x_{t-1}, ...
Vec hp_concurrent(double lambda, int L);

// Baxter-King bandpass: truncated ideal-bandpass sinc weights for cycles with
// period in [period_low, period_high], level-corrected so the weights sum to
// zero.
TargetSpec bk_two_sided(double period_low, double period_high, int half_span);

// White-noise MSE nowcast: the window (gamma_delta, ..., gamma_{delta+L-1}).
Vec wn_mse_nowcast(const TargetSpec& target);

}  // namespace ssa
