// Test-only oracles, kept independent of the solver paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ssa/spectral.hpp"

namespace ssa::oracle {

// Direct maximization of b'gamma over {b'b = 1, b'Mb = rho1} for L = 3 via a
// dense parametrization of the constraint set in eigen-coordinates. Signs of
// the coordinates decouple from the constraints, so only magnitudes are
// scanned.
inline double brute_force_max_l3(const Vec& gamma, double rho1) {
  const SpectralBasis basis = eigenpairs(3);
  const Vec w = basis.V.transpose() * gamma;
  const double l1 = basis.lambda(0);  // lambda = (l1, 0, -l1)
  const double s = rho1 / l1;
  const double u_max = 1.0 - std::abs(s);
  auto value = [&](double u) {
    const double q = 1.0 - u;
    const double p = 0.5 * (q + s), t = 0.5 * (q - s);
    if (p < -1e-15 || t < -1e-15) return -1e300;
    return std::abs(w(0)) * std::sqrt(std::max(p, 0.0)) +
           std::abs(w(1)) * std::sqrt(std::max(u, 0.0)) +
           std::abs(w(2)) * std::sqrt(std::max(t, 0.0));
  };
  double lo = 0.0, hi = u_max, best_u = 0.0, best = -1e300;
  for (int level = 0; level < 6; ++level) {
    const int grid = 800;
    for (int i = 0; i <= grid; ++i) {
      const double u = lo + (hi - lo) * i / grid;
      const double v = value(u);
      if (v > best) {
        best = v;
        best_u = u;
      }
    }
    const double step = (hi - lo) / grid;
    lo = std::max(0.0, best_u - 2.0 * step);
    hi = std::min(u_max, best_u + 2.0 * step);
  }
  return best;
}

// Same for L = 4: two free squared-coordinates on a grid with nested zoom.
inline double brute_force_max_l4(const Vec& gamma, double rho1) {
  const SpectralBasis basis = eigenpairs(4);
  const Vec w = basis.V.transpose() * gamma;
  const double c1 = basis.lambda(0), c2 = basis.lambda(1);
  auto value = [&](double r, double t) {
    if (r < 0.0 || t < 0.0) return -1e300;
    const double m = 1.0 - r - t;
    if (m < -1e-15) return -1e300;
    const double v = rho1 + c2 * r + c1 * t;
    const double p = (v - c2 * m) / (c1 - c2);
    const double q = m - p;
    if (p < -1e-12 || q < -1e-12) return -1e300;
    return std::abs(w(0)) * std::sqrt(std::max(p, 0.0)) +
           std::abs(w(1)) * std::sqrt(std::max(q, 0.0)) +
           std::abs(w(2)) * std::sqrt(std::max(r, 0.0)) +
           std::abs(w(3)) * std::sqrt(std::max(t, 0.0));
  };
  double r_lo = 0.0, r_hi = 1.0, t_lo = 0.0, t_hi = 1.0;
  double best = -1e300, best_r = 0.0, best_t = 0.0;
  for (int level = 0; level < 6; ++level) {
    const int grid = level == 0 ? 400 : 160;
    for (int i = 0; i <= grid; ++i) {
      const double r = r_lo + (r_hi - r_lo) * i / grid;
      for (int j = 0; j <= grid; ++j) {
        const double t = t_lo + (t_hi - t_lo) * j / grid;
        const double v = value(r, t);
        if (v > best) {
          best = v;
          best_r = r;
          best_t = t;
        }
      }
    }
    const double r_step = (r_hi - r_lo) / grid, t_step = (t_hi - t_lo) / grid;
    r_lo = std::max(0.0, best_r - 2.0 * r_step);
    r_hi = std::min(1.0, best_r + 2.0 * r_step);
    t_lo = std::max(0.0, best_t - 2.0 * t_step);
    t_hi = std::min(1.0, best_t + 2.0 * t_step);
  }
  return best;
}

inline double brute_force_max(const Vec& gamma, double rho1) {
  if (gamma.size() == 3) return brute_force_max_l3(gamma, rho1);
  if (gamma.size() == 4) return brute_force_max_l4(gamma, rho1);
  throw std::logic_error("brute force oracle supports L = 3, 4 only");
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace ssa::oracle
