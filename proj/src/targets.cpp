#include "ssa/targets.hpp"

#include <cmath>

namespace ssa {

namespace {

// Solves (I + lambda * D2'D2) x = e_pivot on an n-window, where D2 is the
// (n-2) x n second-difference operator. The system matrix is pentadiagonal
// SPD; a bandwidth-2 Cholesky keeps this O(n).
Vec hp_smoother_row(double lambda, int n, int pivot) {
  // Row k of I + lambda*D2'D2 (symmetric, bandwidth 2):
  //   diag:   1 + lambda * (# of D2 rows touching k) pattern 1,5,6,...,6,5,1
  //   off1:   -2*lambda at the edges, -4*lambda inside
  //   off2:   lambda
  Vec d0(n), d1(std::max(n - 1, 0)), d2(std::max(n - 2, 0));
  for (int k = 0; k < n; ++k) {
    double c = 6.0;
    if (k == 0 || k == n - 1) c = 1.0;
    else if (k == 1 || k == n - 2) c = 5.0;
    if (n == 2) c = 0.0;
    if (n == 3 && k == 1) c = 4.0;
    d0(k) = 1.0 + lambda * c;
  }
  for (int k = 0; k + 1 < n; ++k) {
    double c = -4.0;
    if (k == 0 || k + 1 == n - 1) c = -2.0;
    if (n == 2) c = 0.0;
    d1(k) = lambda * c;
  }
  for (int k = 0; k + 2 < n; ++k) d2(k) = lambda;

  // LDL^T factorization of the banded matrix.
  Vec diag(n), l1(std::max(n - 1, 0)), l2(std::max(n - 2, 0));
  for (int k = 0; k < n; ++k) {
    double dk = d0(k);
    if (k >= 1) dk -= l1(k - 1) * l1(k - 1) * diag(k - 1);
    if (k >= 2) dk -= l2(k - 2) * l2(k - 2) * diag(k - 2);
    diag(k) = dk;
    if (k + 1 < n) {
      double v = d1(k);
      if (k >= 1) v -= l1(k - 1) * l2(k - 1) * diag(k - 1);
      l1(k) = v / diag(k);
    }
    if (k + 2 < n) l2(k) = d2(k) / diag(k);
  }

  Vec x = Vec::Zero(n);
  x(pivot) = 1.0;
  for (int k = 0; k < n; ++k) {
    if (k >= 1) x(k) -= l1(k - 1) * x(k - 1);
    if (k >= 2) x(k) -= l2(k - 2) * x(k - 2);
  }
  for (int k = 0; k < n; ++k) x(k) /= diag(k);
  for (int k = n - 1; k >= 0; --k) {
    if (k + 1 < n) x(k) -= l1(k) * x(k + 1);
    if (k + 2 < n) x(k) -= l2(k) * x(k + 2);
  }
  return x;
}

}  // namespace

TargetSpec hp_two_sided(double lambda, int half_span) {
  if (lambda <= 0.0) throw Error(ErrorCode::domain, "HP lambda must be positive");
  if (half_span < 1) throw Error(ErrorCode::invalid_dimension, "half_span must be >= 1");
  const int n = 2 * half_span + 1;
  Vec row = hp_smoother_row(lambda, n, half_span);
  for (int k = 1; k <= half_span; ++k) {
    const double avg = 0.5 * (row(half_span - k) + row(half_span + k));
    row(half_span - k) = row(half_span + k) = avg;
  }
  const double tail = std::abs(row(0));
  if (tail >= 1e-12)
    throw Error(ErrorCode::span_too_small,
                "HP weight at half_span is " + std::to_string(tail) +
                    "; increase half_span");
  TargetSpec t;
  t.gamma = row / row.sum();
  t.min_lag = -half_span;
  t.label = "hp(" + std::to_string(lambda) + ")";
  return t;
}

TargetSpec hp_finite_window(double lambda, int half_span) {
  if (lambda <= 0.0) throw Error(ErrorCode::domain, "HP lambda must be positive");
  if (half_span < 1) throw Error(ErrorCode::invalid_dimension, "half_span must be >= 1");
  const int n = 2 * half_span + 1;
  TargetSpec t;
  t.gamma = hp_smoother_row(lambda, n, half_span);
  for (int k = 1; k <= half_span; ++k) {
    const double avg = 0.5 * (t.gamma(half_span - k) + t.gamma(half_span + k));
    t.gamma(half_span - k) = t.gamma(half_span + k) = avg;
  }
  t.min_lag = -half_span;
  t.exact_outside = true;
  t.label = "hp_window(" + std::to_string(lambda) + "," + std::to_string(half_span) + ")";
  return t;
}

Vec hp_concurrent(double lambda, int L) {
  if (lambda <= 0.0) throw Error(ErrorCode::domain, "HP lambda must be positive");
  if (L < 3) throw Error(ErrorCode::invalid_dimension, "concurrent HP needs L >= 3");
  // Window is x_{t-L+1}..x_t; the trend estimate at the endpoint is the last
  // smoother row, reversed so that entry k multiplies x_{t-k}.
  Vec row = hp_smoother_row(lambda, L, L - 1);
  return row.reverse();
}

TargetSpec bk_two_sided(double period_low, double period_high, int half_span) {
  if (period_low < 2.0 || period_low >= period_high)
    throw Error(ErrorCode::domain, "need 2 <= period_low < period_high");
  if (half_span < 1) throw Error(ErrorCode::invalid_dimension, "half_span must be >= 1");
  const double w_hi = 2.0 * M_PI / period_low;
  const double w_lo = 2.0 * M_PI / period_high;
  const int n = 2 * half_span + 1;
  Vec g(n);
  for (int k = -half_span; k <= half_span; ++k) {
    double v = (k == 0) ? (w_hi - w_lo) / M_PI
                        : (std::sin(w_hi * k) - std::sin(w_lo * k)) / (M_PI * k);
    g(k + half_span) = v;
  }
  g.array() -= g.sum() / n;  // level correction: weights sum to zero
  TargetSpec t;
  t.gamma = g;
  t.min_lag = -half_span;
  t.label = "bk(" + std::to_string(period_low) + "," + std::to_string(period_high) + ")";
  return t;
}

Vec wn_mse_nowcast(const TargetSpec& target) {
  if (target.L < 1) throw Error(ErrorCode::invalid_dimension, "target.L must be >= 1");
  const bool covered =
      target.delta >= target.min_lag && target.delta + target.L - 1 <= target.max_lag();
  if (!covered && !target.exact_outside)
    throw Error(ErrorCode::span_too_small,
                "target span does not cover lags delta..delta+L-1");
  Vec g(target.L);
  for (int k = 0; k < target.L; ++k) g(k) = target.at(target.delta + k);
  return g;
}

}  // namespace ssa
