#include "ssa/stationary.hpp"

#include <cmath>

namespace ssa {

namespace {

// Schur-Cohn test: all roots of 1 - c_1 z - ... - c_p z^p outside the unit
// circle iff every reflection coefficient of the reversed monic polynomial
// stays inside (-1, 1).
bool roots_outside_unit_circle(const std::vector<double>& coeffs) {
  std::vector<double> c(coeffs);
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  while (!c.empty()) {
    const double k = c.back();
    if (std::abs(k) >= 1.0) return false;
    c.pop_back();
    const double denom = 1.0 - k * k;
    std::vector<double> next(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      next[i] = (c[i] + k * c[c.size() - 1 - i]) / denom;
    c = std::move(next);
  }
  return true;
}

// Negated MA convention for the stability test: the MA polynomial is
// 1 + m_1 z + ..., the AR test polynomial is 1 - a_1 z - ....
std::vector<double> negate(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

constexpr double kTailTol = 1e-10;
constexpr int kMaxInternalOrder = 1 << 16;

}  // namespace

ProcessModel ProcessModel::white_noise(double sigma) {
  ProcessModel m;
  m.kind = ProcessKind::white_noise;
  m.sigma = sigma;
  return m;
}

ProcessModel ProcessModel::arma(std::vector<double> ar, std::vector<double> ma,
                                double sigma) {
  ProcessModel m;
  m.kind = ProcessKind::arma;
  m.ar = std::move(ar);
  m.ma = std::move(ma);
  m.sigma = sigma;
  if (sigma <= 0.0) throw Error(ErrorCode::invalid_model, "sigma must be positive");
  if (!roots_outside_unit_circle(m.ar))
    throw Error(ErrorCode::invalid_model, "AR polynomial is not stationary");
  if (!roots_outside_unit_circle(negate(m.ma)))
    throw Error(ErrorCode::invalid_model, "MA polynomial is not invertible");
  return m;
}

bool ProcessModel::is_white() const {
  if (kind == ProcessKind::white_noise) return true;
  auto all_zero = [](const std::vector<double>& v) {
    for (double x : v)
      if (x != 0.0) return false;
    return true;
  };
  return all_zero(ar) && all_zero(ma);
}

Vec wold_weights(const ProcessModel& model, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_dimension, "need n >= 1 Wold weights");
  Vec xi = Vec::Zero(n);
  xi(0) = 1.0;
  if (model.is_white()) return xi;
  const int p = static_cast<int>(model.ar.size());
  const int q = static_cast<int>(model.ma.size());
  for (int k = 1; k < n; ++k) {
    double v = k <= q ? model.ma[k - 1] : 0.0;
    for (int i = 1; i <= std::min(k, p); ++i) v += model.ar[i - 1] * xi(k - i);
    xi(k) = v;
  }
  return xi;
}

Mat wold_matrix(const Vec& xi, int rows, int cols) {
  Mat m = Mat::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = std::max(0, i - static_cast<int>(xi.size()) + 1); j <= std::min(i, cols - 1); ++j)
      m(i, j) = xi(i - j);
  return m;
}

Vec deconvolve(const Vec& conv, const Vec& xi, int L) {
  if (xi.size() < 1 || xi(0) != 1.0)
    throw Error(ErrorCode::invalid_model, "deconvolution requires xi_0 = 1");
  if (conv.size() < L)
    throw Error(ErrorCode::invalid_dimension, "convolution too short to recover L terms");
  Vec b = Vec::Zero(L);
  for (int k = 0; k < L; ++k) {
    double v = conv(k);
    for (int j = std::max(0, k - static_cast<int>(xi.size()) + 1); j < k; ++j)
      v -= xi(k - j) * b(j);
    b(k) = v;
  }
  return b;
}

Vec target_xi_causal(const TargetSpec& target, const ProcessModel& model, int n,
                     int delta) {
  const Vec xi = wold_weights(model, n + std::max(0, delta - target.min_lag) + 1);
  Vec c = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    const int m_hi = std::min(target.max_lag(), j + delta);
    for (int m = target.min_lag; m <= m_hi; ++m) v += target.at(m) * xi(j + delta - m);
    c(j) = v;
  }
  return c;
}

double target_variance(const TargetSpec& target, const ProcessModel& model) {
  // Two-sided convolution (gamma * xi)_k spans k >= min_lag; extend the order
  // until the xi tail is negligible. The xi index k - m reaches
  // order - 1 - min_lag, so the weights are computed out to that length.
  const int lead = std::max(0, -target.min_lag);
  int order = std::max(256, 4 * static_cast<int>(target.gamma.size()));
  for (;;) {
    const int len = order + lead;
    Vec xi = wold_weights(model, len);
    if (std::abs(xi(len - 1)) < kTailTol || order >= kMaxInternalOrder) {
      double var = 0.0;
      for (int k = target.min_lag; k < order; ++k) {
        double v = 0.0;
        const int m_hi = std::min(target.max_lag(), k);
        for (int m = target.min_lag; m <= m_hi; ++m) v += target.at(m) * xi(k - m);
        var += v * v;
      }
      return var;
    }
    order *= 2;
  }
}

Vec mse_predictor_dependent(const TargetSpec& target, const ProcessModel& model, int L,
                            int delta) {
  if (L < 1) throw Error(ErrorCode::invalid_dimension, "L must be >= 1");
  const int span = static_cast<int>(target.gamma.size());
  int order = std::max(4 * L, span + L);
  // Widen until the Wold tail at the internal order has died out; the model
  // is rejected if the cap is hit first.
  for (;;) {
    Vec xi = wold_weights(model, order);
    if (std::abs(xi(order - 1)) < kTailTol) break;
    if (order >= kMaxInternalOrder)
      throw Error(ErrorCode::truncation_insufficient,
                  "Wold weights decay too slowly for the internal order cap");
    order *= 2;
  }
  Vec c = target_xi_causal(target, model, L, delta);
  Vec xi = wold_weights(model, L);
  return deconvolve(c, xi, L);
}

namespace {

DependentSolution solve_eps_space(const TargetSpec& target, const ProcessModel& model,
                                  const SsaConfig& config, const Vec& gamma_eps,
                                  int L) {
  SsaConfig eps_config = config;
  eps_config.L = static_cast<int>(gamma_eps.size());
  eps_config.l = 1.0;
  const double tvar = target_variance(target, model);
  SsaSolution sol = solve_ssa(gamma_eps, eps_config, tvar);
  DependentSolution out;
  out.b_eps = sol.b;
  const Vec xi = wold_weights(model, std::max(L, 1));
  out.b_x = deconvolve(sol.b, xi, L);
  out.solution = std::move(sol);
  return out;
}

}  // namespace

DependentSolution solve_ssa_dependent(const TargetSpec& target, const ProcessModel& model,
                                      const SsaConfig& config) {
  const int L = config.L;
  if (L < 3) throw Error(ErrorCode::invalid_dimension, "SSA criterion needs L >= 3");
  const Vec gamma_hat = mse_predictor_dependent(target, model, L, config.delta);
  const Vec xi = wold_weights(model, L);
  // gamma_Xi = Xi * gamma_hat, the epsilon-space image of the MSE predictor.
  Vec gamma_eps = Vec::Zero(L);
  for (int i = 0; i < L; ++i) {
    double v = 0.0;
    for (int j = 0; j <= i; ++j) v += xi(i - j) * gamma_hat(j);
    gamma_eps(i) = v;
  }
  return solve_eps_space(target, model, config, gamma_eps, L);
}

DependentSolution solve_ssa_extended(const TargetSpec& target, const ProcessModel& model,
                                     const SsaConfig& config, int L_tilde) {
  const int L = config.L;
  if (L < 3) throw Error(ErrorCode::invalid_dimension, "SSA criterion needs L >= 3");
  if (L_tilde < L)
    throw Error(ErrorCode::invalid_dimension, "L_tilde must be >= L");
  // No MA inversion to extend under white noise.
  if (model.is_white()) return solve_ssa_dependent(target, model, config);
  const Vec xi_check = wold_weights(model, L_tilde + 1);
  if (std::abs(xi_check(L_tilde)) >= 1e-8)
    throw Error(ErrorCode::truncation_insufficient,
                "|xi_{L_tilde}| too large; increase L_tilde");
  Vec gamma_eps = target_xi_causal(target, model, L_tilde, config.delta);
  return solve_eps_space(target, model, config, gamma_eps, L);
}

}  // namespace ssa
