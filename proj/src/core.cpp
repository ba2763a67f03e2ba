#include "ssa/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssa/rng.hpp"

namespace ssa {

namespace {

constexpr double kDegenerateTol = 1e-9;
constexpr double kRootTol = 1e-12;
constexpr double kBracketEps = 1e-6;

double rho_mse_of(const SpectralWeights& sw, const SpectralBasis& basis) {
  double num = 0.0, den = 0.0;
  for (int i : sw.nz) {
    const double w2 = sw.w(i) * sw.w(i);
    num += basis.lambda(i) * w2;
    den += w2;
  }
  return num / den;
}

struct RootResult {
  double nu = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Monotone bisection for rho(nu) = rho1 on the branch nu >= 2 (smooth) or
// nu <= -2 (unsmooth), after bracket expansion in exponentially growing steps.
RootResult find_nu(const SpectralWeights& sw, const SpectralBasis& basis, double rho1,
                   bool smooth) {
  const double sgn = smooth ? 1.0 : -1.0;
  auto g = [&](double mu) { return rho_of_nu(sw, basis, sgn * mu) - rho1; };

  RootResult r;
  double lo = 2.0;
  double g_lo = g(lo);
  // On the smooth branch rho decreases in nu, so g(2) must be >= 0; mirrored
  // on the unsmooth branch.
  if (smooth ? g_lo < 0.0 : g_lo > 0.0) {
    throw Error(ErrorCode::constraint_infeasible,
                "rho1 = " + std::to_string(rho1) + " is outside the branch range; " +
                    "attainable endpoint rho(" + (smooth ? std::string("2") : "-2") +
                    ") = " + std::to_string(rho1 + g_lo));
  }
  if (std::abs(g_lo) <= kRootTol) {
    r.nu = sgn * 2.0;
    r.residual = std::abs(g_lo);
    return r;
  }
  double hi = 0.0, g_hi = 0.0;
  bool bracketed = false;
  for (int k = 0; k <= 200; ++k) {
    hi = 2.0 + kBracketEps * std::ldexp(1.0, k);
    g_hi = g(hi);
    ++r.iterations;
    if ((g_lo > 0.0) != (g_hi > 0.0)) {
      bracketed = true;
      break;
    }
    lo = hi;
    g_lo = g_hi;
  }
  if (!bracketed)
    throw Error(ErrorCode::numerical, "holding-time root not bracketed on the branch");

  double mid = 0.5 * (lo + hi), g_mid = g(mid);
  for (int it = 0; it < 300 && std::abs(g_mid) > kRootTol; ++it) {
    if ((g_lo > 0.0) == (g_mid > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
    mid = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid) break;
    g_mid = g(mid);
    ++r.iterations;
  }
  r.nu = sgn * mid;
  r.residual = std::abs(g_mid);
  return r;
}

void fill_diagnostics(SsaSolution& sol, const Vec& gamma_delta, double l,
                      std::optional<double> target_l2sq) {
  const double tss = target_l2sq.value_or(gamma_delta.squaredNorm());
  SsaDiagnostics& d = sol.diagnostics;
  d.criterion_value = sol.b.dot(gamma_delta);
  d.target_correlation = d.criterion_value / std::sqrt(l * tss);
  d.acf1 = acf1(sol.b);
  d.holding_time = ht_from_rho(d.acf1);
  const double tc = std::clamp(d.target_correlation, -1.0, 1.0);
  d.sign_accuracy = sign_accuracy(tc);
  d.mse_vs_target = tss - 2.0 * d.criterion_value + sol.b.squaredNorm();
}

SsaSolution make_scaled(Vec b_raw, const Vec& gamma_delta, double l) {
  SsaSolution sol;
  const double crit = b_raw.dot(gamma_delta);
  sol.d_sign = crit >= 0.0 ? 1 : -1;
  const double s = std::sqrt(l / b_raw.squaredNorm());
  sol.b = (sol.d_sign * s) * b_raw;
  return sol;
}

SsaSolution degenerate_mse_solution(const Vec& gamma_delta, double l,
                                    std::optional<double> target_l2sq) {
  SsaSolution sol = make_scaled(gamma_delta, gamma_delta, l);
  sol.kind = SolutionKind::degenerate_mse;
  sol.nu = std::numeric_limits<double>::infinity();
  fill_diagnostics(sol, gamma_delta, l, target_l2sq);
  sol.diagnostics.branch = "degenerate-mse";
  return sol;
}

SsaSolution regular_branch_solution(const Vec& gamma_delta, const SpectralWeights& sw,
                                    const SpectralBasis& basis, double rho1, double l,
                                    Branch branch, std::optional<double> target_l2sq) {
  const double rho_mse = rho_mse_of(sw, basis);
  if (std::abs(rho1 - rho_mse) <= kDegenerateTol && branch == Branch::automatic)
    return degenerate_mse_solution(gamma_delta, l, target_l2sq);

  const bool smooth = branch == Branch::automatic ? rho1 > rho_mse
                                                  : branch == Branch::smooth;
  RootResult root = find_nu(sw, basis, rho1, smooth);
  SsaSolution sol = make_scaled(b_of_nu(gamma_delta, root.nu, basis), gamma_delta, l);
  sol.nu = root.nu;
  sol.kind = SolutionKind::regular;
  fill_diagnostics(sol, gamma_delta, l, target_l2sq);
  sol.diagnostics.iterations = root.iterations;
  sol.diagnostics.residual = root.residual;
  sol.diagnostics.branch = smooth ? "smooth" : "unsmooth";
  return sol;
}

}  // namespace

double SsaConfig::resolve_rho1() const {
  if (rho1.has_value() == ht1.has_value())
    throw Error(ErrorCode::config, "exactly one of rho1 / ht1 must be set");
  return rho1 ? *rho1 : rho_from_ht(*ht1);
}

Vec b_of_nu(const Vec& gamma_delta, double nu, const SpectralBasis& basis,
            double tol_nz) {
  SpectralWeights sw = spectral_weights(gamma_delta, basis, tol_nz);
  Vec b = Vec::Zero(basis.L);
  for (int i : sw.nz) {
    const double d = 2.0 * basis.lambda(i) - nu;
    if (std::abs(d) < 1e-9)
      throw Error(ErrorCode::singularity,
                  "nu coincides with 2*lambda_" + std::to_string(i + 1) +
                      " carrying nonzero weight");
    b += (sw.w(i) / d) * basis.V.col(i);
  }
  return b;
}

double rho_of_nu(const SpectralWeights& sw, const SpectralBasis& basis, double nu) {
  if (sw.nz.empty())
    throw Error(ErrorCode::identifiability, "empty spectral support");
  double num = 0.0, den = 0.0;
  for (int i : sw.nz) {
    const double d = 2.0 * basis.lambda(i) - nu;
    const double q = (sw.w(i) / d) * (sw.w(i) / d);
    num += basis.lambda(i) * q;
    den += q;
  }
  return num / den;
}

SsaSolution solve_ssa(const Vec& gamma_delta, const SsaConfig& config,
                      std::optional<double> target_l2sq) {
  const int L = static_cast<int>(gamma_delta.size());
  if (config.L > 0 && config.L != L)
    throw Error(ErrorCode::invalid_dimension, "config.L does not match target window");
  if (L < 3)
    throw Error(ErrorCode::invalid_dimension, "SSA criterion needs L >= 3");
  if (config.l <= 0.0) throw Error(ErrorCode::domain, "length constraint l must be positive");
  const double rho1 = config.resolve_rho1();

  SpectralBasis basis = eigenpairs(L);
  SpectralWeights sw = spectral_weights(gamma_delta, basis, config.tol_nz);
  const double rmax = basis.rho_max();
  if (std::abs(rho1) > rmax + 1e-12)
    throw Error(ErrorCode::constraint_infeasible,
                "|rho1| exceeds rho_max(L) = " + std::to_string(rmax));
  if (std::abs(std::abs(rho1) - rmax) <= 1e-12) {
    SsaSolution sol = boundary_solution(gamma_delta, rho1 > 0 ? 1 : -1, config.l,
                                        config.tol_nz);
    fill_diagnostics(sol, gamma_delta, config.l, target_l2sq);
    sol.diagnostics.branch = "boundary";
    return sol;
  }
  if (!sw.complete(L) && config.allow_completion)
    return solve_completed(gamma_delta, config, target_l2sq);
  return regular_branch_solution(gamma_delta, sw, basis, rho1, config.l, config.branch,
                                 target_l2sq);
}

SsaSolution boundary_solution(const Vec& gamma_delta, int sign, double l, double tol_nz) {
  const int L = static_cast<int>(gamma_delta.size());
  SpectralBasis basis = eigenpairs(L);
  SpectralWeights sw = spectral_weights(gamma_delta, basis, tol_nz);
  const int idx = sign > 0 ? 0 : L - 1;
  const bool carried = std::find(sw.nz.begin(), sw.nz.end(), idx) != sw.nz.end();
  if (!carried)
    throw Error(ErrorCode::constraint_infeasible,
                std::string("no boundary solution: spectral weight w_") +
                    (sign > 0 ? "1" : std::to_string(L)) + " vanishes");
  SsaSolution sol;
  sol.kind = SolutionKind::boundary;
  sol.nu = 2.0 * basis.lambda(idx);
  sol.d_sign = sw.w(idx) > 0 ? 1 : -1;
  sol.b = (sol.d_sign * std::sqrt(l)) * basis.V.col(idx);
  fill_diagnostics(sol, gamma_delta, l, std::nullopt);
  sol.diagnostics.branch = "boundary";
  return sol;
}

SsaSolution solve_completed(const Vec& gamma_delta, const SsaConfig& config,
                            std::optional<double> target_l2sq) {
  const int L = static_cast<int>(gamma_delta.size());
  const double rho1 = config.resolve_rho1();
  const double l = config.l;
  SpectralBasis basis = eigenpairs(L);
  SpectralWeights sw = spectral_weights(gamma_delta, basis, config.tol_nz);
  if (sw.complete(L))
    return regular_branch_solution(gamma_delta, sw, basis, rho1, l, config.branch,
                                   target_l2sq);

  std::optional<SsaSolution> best;

  // Support-restricted regular solution, when rho1 is attainable there.
  try {
    best = regular_branch_solution(gamma_delta, sw, basis, rho1, l, config.branch,
                                   target_l2sq);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::constraint_infeasible) throw;
  }

  // Spectrally completed candidates at nu = 2*lambda_{i0}, i0 outside the
  // support; the qualifying sign conditions keep N_tilde^2 positive.
  for (int i0 = 0; i0 < L; ++i0) {
    if (std::find(sw.nz.begin(), sw.nz.end(), i0) != sw.nz.end()) continue;
    const double nu0 = 2.0 * basis.lambda(i0);
    double m1 = 0.0, m2 = 0.0;
    for (int i : sw.nz) {
      const double d = 2.0 * basis.lambda(i) - nu0;
      const double q = (sw.w(i) / d) * (sw.w(i) / d);
      m1 += basis.lambda(i) * q;
      m2 += q;
    }
    const double rho_nu0 = m1 / m2;
    const double li0 = basis.lambda(i0);
    const bool qualifies = (0.0 < rho_nu0 && rho_nu0 < rho1 && rho1 < li0) ||
                           (0.0 > rho_nu0 && rho_nu0 > rho1 && rho1 > li0);
    if (!qualifies) continue;
    const double n2 = (rho1 * m2 - m1) / (li0 - rho1);
    if (!(n2 > 0.0)) continue;
    const double n_tilde = std::sqrt(n2);
    Vec b_raw = b_of_nu(gamma_delta, nu0, basis, config.tol_nz);
    b_raw += n_tilde * basis.V.col(i0);
    SsaSolution cand = make_scaled(std::move(b_raw), gamma_delta, l);
    cand.kind = SolutionKind::completed;
    cand.nu = nu0;
    cand.completed_index = i0;
    cand.n_tilde = n_tilde;
    fill_diagnostics(cand, gamma_delta, l, target_l2sq);
    cand.diagnostics.branch = "completed(i0=" + std::to_string(i0 + 1) + ")";
    cand.diagnostics.residual = std::abs(cand.diagnostics.acf1 - rho1);
    if (cand.diagnostics.residual > 1e-10)
      throw Error(ErrorCode::numerical, "completed solution misses the HT constraint");
    if (!best || cand.diagnostics.criterion_value >
                     best->diagnostics.criterion_value + 1e-12)
      best = std::move(cand);
  }

  if (!best)
    throw Error(ErrorCode::constraint_infeasible,
                "rho1 = " + std::to_string(rho1) +
                    " is not attainable for this band-limited target");
  return *best;
}

SsaSolution solve_ssa_mse(const Vec& gamma_delta, double rho1) {
  SsaConfig config;
  config.rho1 = rho1;
  config.l = 1.0;
  SsaSolution sol = solve_ssa(gamma_delta, config);
  // Lagrangian stationarity fixes the direction; the MSE-optimal scale is the
  // least-squares scalar of gamma_delta on b.
  const double s_mse = sol.b.dot(gamma_delta) / sol.b.squaredNorm();
  sol.b *= s_mse;
  sol.diagnostics.criterion_value = sol.b.dot(gamma_delta);
  sol.diagnostics.mse_vs_target = (gamma_delta - sol.b).squaredNorm();
  return sol;
}

double ht_from_rho(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw Error(ErrorCode::domain, "holding time needs |rho| < 1");
  return M_PI / std::acos(rho);
}

double rho_from_ht(double ht) {
  if (!(ht > 1.0)) throw Error(ErrorCode::domain, "holding time must exceed 1");
  return std::cos(M_PI / ht);
}

double sign_accuracy(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0))
    throw Error(ErrorCode::domain, "correlation must lie in [-1, 1]");
  return 0.5 + std::asin(rho) / M_PI;
}

Vec ssa_ar2_transfer(double nu, const Vec& omegas) {
  Vec out(omegas.size());
  for (int i = 0; i < omegas.size(); ++i) {
    const double den = 2.0 * std::cos(omegas(i)) - nu;
    out(i) = std::abs(den) < 1e-12 ? std::copysign(HUGE_VAL, den) : 1.0 / den;
  }
  return out;
}

DualReport verify_dual(const SsaSolution& solution, const Vec& gamma_delta, int trials,
                       std::uint64_t seed) {
  if (solution.kind != SolutionKind::regular)
    throw Error(ErrorCode::domain, "dual check applies to regular branch solutions");
  DualReport rep;
  rep.trials = trials;
  if (trials == 0) return rep;

  const double l = solution.b.squaredNorm();
  const double crit = solution.b.dot(gamma_delta);
  const Vec ghat = gamma_delta / gamma_delta.norm();
  const double alpha = crit / gamma_delta.norm();
  const double rad2 = l - alpha * alpha;
  if (rad2 <= 0.0) throw Error(ErrorCode::domain, "degenerate solution, nothing to perturb");
  const double rho_sol = acf1(solution.b);
  const double direction = solution.nu >= 0.0 ? 1.0 : -1.0;

  Rng rng(seed);
  const int L = static_cast<int>(gamma_delta.size());
  Vec noise(L);
  for (int t = 0; t < trials; ++t) {
    const double sigma = solution.b.norm() * (0.1 + 2.0 * rng.uniform());
    for (int i = 0; i < L; ++i) noise(i) = rng.normal();
    Vec q = solution.b + sigma * noise;
    Vec u = q - q.dot(ghat) * ghat;
    const double un = u.norm();
    if (un < 1e-12) {
      ++rep.skipped;
      continue;
    }
    Vec candidate = alpha * ghat + (std::sqrt(rad2) / un) * u;
    const double excess = direction * (acf1(candidate) - rho_sol);
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (excess > 1e-8) ++rep.violations;
  }
  return rep;
}

}  // namespace ssa
