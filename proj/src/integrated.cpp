#include "ssa/integrated.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

namespace ssa {

namespace {

constexpr double kRootTol = 1e-10;
constexpr double kRootAccept = 1e-8;

Vec cumsum(const Vec& v) {
  Vec out(v.size());
  double acc = 0.0;
  for (int i = 0; i < v.size(); ++i) out(i) = acc += v(i);
  return out;
}

// (M x)_i = 0.5 x_{i-1} + 0.5 x_{i+1} with zero boundaries.
Mat apply_m(const Mat& x) {
  Mat out = Mat::Zero(x.rows(), x.cols());
  const int n = static_cast<int>(x.rows());
  for (int i = 0; i < n; ++i) {
    if (i > 0) out.row(i) += 0.5 * x.row(i - 1);
    if (i + 1 < n) out.row(i) += 0.5 * x.row(i + 1);
  }
  return out;
}

// Reduces gamma(B) = S + (1 - B) c(B): partial-sum coefficients of the
// stationary remainder after stripping the level term.
TargetSpec strip_level(const TargetSpec& target, double& level) {
  level = target.gamma.sum();
  const int n = static_cast<int>(target.gamma.size());
  TargetSpec c;
  c.min_lag = target.min_lag;
  c.gamma = Vec::Zero(std::max(n - 1, 1));
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    acc += target.gamma(i);
    const int lag = target.min_lag + i;
    c.gamma(i) = lag >= 0 ? acc - level : acc;
  }
  c.label = target.label + "/d";
  return c;
}

struct IntegratedSystem {
  int L = 0, Lt = 0, d = 1;
  double rho1 = 0.0;
  Mat B;
  Vec q;              // particular solution carrying the constraints
  Vec btilde_bench;   // benchmark in the free coordinates
  Mat xi_r;           // L_tilde x L MA inversion
  Mat xi_tilde_r;     // L_tilde x L cumulated MA inversion (Sigma^d Xi)
  Vec gamma_mse;
  Vec gamma_xi_tilde;  // Xi_tilde * gamma_mse
  Mat A0, A1;
  Vec s0, s1;  // deviation-form right-hand side: rhs(lt) = s0 - lt * s1
  double sigma2 = 1.0;
};

struct Candidate {
  double lambda_tilde = 0.0;
  Vec b_x;
  Vec b_eps;
  double residual = 0.0;
  double mse = 0.0;
  double rcond = 0.0;
  int iterations = 0;
  bool valid = false;
};

IntegratedSystem build_system(const TargetSpec& target, const ProcessModel& model,
                              const IntegratedConfig& config, int d) {
  IntegratedSystem sys;
  sys.d = d;
  sys.L = config.L;
  sys.rho1 = config.rho1;
  sys.sigma2 = model.sigma * model.sigma;
  if (sys.L < d + 2)
    throw Error(ErrorCode::invalid_dimension, "integrated solve needs L >= d + 2");
  sys.Lt = config.L_tilde > 0 ? config.L_tilde : 2 * sys.L;
  if (sys.Lt < sys.L)
    throw Error(ErrorCode::invalid_dimension, "L_tilde must be >= L");
  if (!(std::abs(config.rho1) < 1.0))
    throw Error(ErrorCode::domain, "rho1 must lie in (-1, 1)");

  sys.gamma_mse = integrated_mse_benchmark(target, model, sys.L, d);
  const double g0 = sys.gamma_mse.sum();
  double g0_dot = 0.0;
  for (int k = 1; k < sys.L; ++k) g0_dot += k * sys.gamma_mse(k);

  sys.B = b_matrix(sys.L, d);
  sys.q = Vec::Zero(sys.L);
  if (d == 1) {
    sys.q(0) = g0;
  } else {
    sys.q(0) = g0 - g0_dot;
    sys.q(1) = g0_dot;
  }
  sys.btilde_bench = sys.gamma_mse.tail(sys.L - d);

  Vec xi = wold_weights(model, sys.Lt);
  Vec xi_tilde = xi;
  for (int j = 0; j < d; ++j) xi_tilde = cumsum(xi_tilde);
  sys.xi_r = wold_matrix(xi, sys.Lt, sys.L);
  sys.xi_tilde_r = wold_matrix(xi_tilde, sys.Lt, sys.L);
  sys.gamma_xi_tilde = sys.xi_tilde_r * sys.gamma_mse;

  const Mat xi_b = sys.xi_r * sys.B;
  const Mat xit_b = sys.xi_tilde_r * sys.B;
  const Vec xi_q = sys.xi_r * sys.q;
  const Vec xit_q = sys.xi_tilde_r * sys.q;

  sys.A0 = xit_b.transpose() * xit_b;
  sys.A1 = xi_b.transpose() * (apply_m(xi_b) - sys.rho1 * xi_b);
  const Vec r0 = xit_b.transpose() * (sys.gamma_xi_tilde - xit_q);
  Vec m_xi_q = apply_m(xi_q);
  m_xi_q -= sys.rho1 * xi_q;
  const Vec r1 = xi_b.transpose() * m_xi_q;

  sys.s0 = r0 - sys.A0 * sys.btilde_bench;
  sys.s1 = r1 + sys.A1 * sys.btilde_bench;
  return sys;
}

// Solves the Lagrangian system at a trial multiplier and evaluates the
// holding-time residual rho(b_eps) - rho1. Near-singular trial points are
// retried once after a tiny perturbation.
Candidate evaluate(const IntegratedSystem& sys, double lt, int depth = 0) {
  Candidate cand;
  cand.lambda_tilde = lt;
  const Mat a = sys.A0 + lt * sys.A1;
  Eigen::PartialPivLU<Mat> lu(a);
  cand.rcond = lu.rcond();
  const Vec rhs = sys.s0 - lt * sys.s1;
  Vec u = lu.solve(rhs);
  u += lu.solve(rhs - a * u);  // one refinement step
  const double backward =
      (a * u - rhs).norm() / (a.norm() * u.norm() + rhs.norm() + 1e-300);
  if (!u.allFinite() || backward > 1e-8) {
    if (depth < 2 && lt != 0.0)
      return evaluate(sys, lt * (1.0 + 1e-10) + 1e-300, depth + 1);
    cand.valid = false;
    return cand;
  }
  Vec btilde = sys.btilde_bench + u;
  cand.b_x = sys.q + sys.B * btilde;
  cand.b_eps = sys.xi_r * cand.b_x;
  cand.residual = acf1(cand.b_eps) - sys.rho1;
  cand.mse = mse_vs_benchmark(cand.b_x, sys.gamma_mse, sys.xi_tilde_r) * sys.sigma2;
  cand.valid = std::isfinite(cand.residual);
  return cand;
}

IntegratedSolution finish(const IntegratedSystem& sys, const Candidate& cand) {
  IntegratedSolution sol;
  sol.b_x = cand.b_x;
  sol.b_eps = cand.b_eps;
  sol.lambda_tilde = cand.lambda_tilde;
  sol.gamma0 = sys.gamma_mse.sum();
  if (sys.d == 2)
    for (int k = 1; k < sys.L; ++k) sol.gamma0_dot += k * sys.gamma_mse(k);
  sol.diagnostics.acf1_of_diff = acf1(cand.b_eps);
  sol.diagnostics.ht_of_diff = ht_from_rho(sol.diagnostics.acf1_of_diff);
  sol.diagnostics.mse_vs_benchmark = cand.mse;
  sol.diagnostics.residual = std::abs(cand.residual);
  sol.diagnostics.iterations = cand.iterations;
  sol.diagnostics.rcond = cand.rcond;
  sol.diagnostics.condition_warning = cand.rcond < 1e-12;
  return sol;
}

IntegratedSolution solve_integrated(const TargetSpec& target, const ProcessModel& model,
                                    const IntegratedConfig& config, int d) {
  IntegratedSystem sys = build_system(target, model, config, d);

  std::vector<Candidate> roots;
  int evals = 0;

  auto bisect = [&](Candidate lo, Candidate hi) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo.lambda_tilde + hi.lambda_tilde);
      Candidate cm = evaluate(sys, mid);
      ++evals;
      if (!cm.valid) return;  // pole or breakdown inside the bracket
      if (std::abs(cm.residual) <= kRootTol) {
        cm.iterations = evals;
        roots.push_back(std::move(cm));
        return;
      }
      if ((cm.residual > 0.0) == (lo.residual > 0.0))
        lo = std::move(cm);
      else
        hi = std::move(cm);
      if (std::abs(hi.lambda_tilde - lo.lambda_tilde) <=
          1e-15 * (1.0 + std::abs(mid))) {
        if (std::abs(cm.residual) <= kRootAccept) {
          cm.iterations = evals;
          roots.push_back(std::move(cm));
        }
        return;
      }
    }
  };

  Candidate at_zero = evaluate(sys, 0.0);
  ++evals;
  if (!at_zero.valid)
    throw Error(ErrorCode::numerical, "benchmark system is numerically singular");
  if (std::abs(at_zero.residual) <= kRootTol) {
    at_zero.iterations = evals;
    roots.push_back(at_zero);
  } else {
    for (double dir : {1.0, -1.0}) {
      Candidate prev = at_zero;
      for (int k = 0; k <= 56; ++k) {
        Candidate cur = evaluate(sys, dir * 1e-4 * std::ldexp(1.0, k));
        ++evals;
        if (cur.valid && prev.valid &&
            (cur.residual > 0.0) != (prev.residual > 0.0))
          bisect(prev, cur);
        prev = std::move(cur);
      }
    }
  }

  if (roots.empty())
    throw Error(ErrorCode::constraint_infeasible,
                "no Lagrange multiplier satisfies the holding-time constraint");
  const Candidate* best = &roots.front();
  for (const Candidate& c : roots)
    if (c.mse < best->mse) best = &c;
  return finish(sys, *best);
}

}  // namespace

std::pair<Mat, Mat> sigma_delta_matrices(int L) {
  if (L < 1) throw Error(ErrorCode::invalid_dimension, "L must be >= 1");
  Mat sigma = Mat::Zero(L, L);
  Mat delta = Mat::Zero(L, L);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j <= i; ++j) sigma(i, j) = 1.0;
    delta(i, i) = 1.0;
    if (i > 0) delta(i, i - 1) = -1.0;
  }
  return {sigma, delta};
}

Mat b_matrix(int L, int d) {
  if (d != 1 && d != 2) throw Error(ErrorCode::domain, "integration order must be 1 or 2");
  if (L <= d) throw Error(ErrorCode::invalid_dimension, "need L > d");
  Mat b = Mat::Zero(L, L - d);
  if (d == 1) {
    b.row(0).setConstant(-1.0);
    b.block(1, 0, L - 1, L - 1).setIdentity();
  } else {
    for (int j = 0; j < L - 2; ++j) {
      b(0, j) = j + 1;
      b(1, j) = -(j + 2);
      b(j + 2, j) = 1.0;
    }
  }
  return b;
}

Vec integrated_mse_benchmark(const TargetSpec& target, const ProcessModel& model, int L,
                             int d) {
  if (d != 1 && d != 2) throw Error(ErrorCode::domain, "integration order must be 1 or 2");
  if (L < d + 2)
    throw Error(ErrorCode::invalid_dimension, "benchmark needs L >= d + 2");
  Vec levels = Vec::Zero(L);
  double level = 0.0;
  TargetSpec c = strip_level(target, level);
  levels(0) = level;
  if (d == 1) {
    const Vec c_hat = mse_predictor_dependent(c, model, L - 1, 0);
    for (int j = 0; j < L - 1; ++j) {
      levels(j) += c_hat(j);
      levels(j + 1) -= c_hat(j);
    }
  } else {
    double slope_term = 0.0;
    TargetSpec g = strip_level(c, slope_term);
    levels(0) += slope_term;
    levels(1) -= slope_term;
    const Vec g_hat = mse_predictor_dependent(g, model, L - 2, 0);
    for (int j = 0; j < L - 2; ++j) {
      levels(j) += g_hat(j);
      levels(j + 1) -= 2.0 * g_hat(j);
      levels(j + 2) += g_hat(j);
    }
  }
  return levels;
}

double mse_vs_benchmark(const Vec& b_x, const Vec& gamma_mse, const Mat& xi_tilde) {
  if (b_x.size() != gamma_mse.size() || xi_tilde.cols() != b_x.size())
    throw Error(ErrorCode::invalid_dimension, "inconsistent dimensions");
  return (xi_tilde * (gamma_mse - b_x)).squaredNorm();
}

IntegratedSolution solve_i1_ssa(const TargetSpec& target, const ProcessModel& model,
                                const IntegratedConfig& config) {
  return solve_integrated(target, model, config, 1);
}

IntegratedSolution solve_i2_ssa(const TargetSpec& target, const ProcessModel& model,
                                const IntegratedConfig& config) {
  return solve_integrated(target, model, config, 2);
}

}  // namespace ssa
