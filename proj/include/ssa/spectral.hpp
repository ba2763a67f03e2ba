#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssa/error.hpp"

namespace ssa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Largest filter length supported by the dense spectral machinery.
inline constexpr int kMaxLength = 2048;

// Relative threshold (w.r.t. max|w_i|) below which a spectral weight is
// treated as vanishing.
inline constexpr double kDefaultNzTol = 1e-10;

// Analytic eigenstructure of the L x L first-lag autocovariance matrix:
// eigenvalues cos(j*pi/(L+1)) with unit-norm sine eigenvectors, ordered so
// that lambda is strictly decreasing.
struct SpectralBasis {
  int L = 0;
  Vec lambda;  // lambda(j-1) = cos(j*pi/(L+1)), j = 1..L
  Mat V;       // column j-1 = normalized (sin(k*j*pi/(L+1)))_{k=1..L}

  double rho_max() const { return lambda(0); }
};

// Coordinates of a filter in the sine basis, with the support set of
// non-vanishing entries.
struct SpectralWeights {
  Vec w;
  std::vector<int> nz;  // 0-based indices with |w_i| > tol * max|w|

  bool complete(int L) const { return static_cast<int>(nz.size()) == L; }
};

// Symmetric tridiagonal matrix with 0.5 on the first off-diagonals; its
// quadratic form b'Mb equals the lag-one autocovariance sum of b.
Mat build_m(int L);

SpectralBasis eigenpairs(int L);

SpectralWeights spectral_weights(const Vec& gamma_delta,
                                 const SpectralBasis& basis,
                                 double tol_nz = kDefaultNzTol);

// b'Mb = sum_k b_{k-1} b_k, evaluated without forming M.
double lag_one_form(const Vec& b);

// First-order autocorrelation b'Mb / b'b of the filter output on white noise.
double acf1(const Vec& b);

inline double rho_max(int L) {
  if (L < 1) throw Error(ErrorCode::invalid_dimension, "L must be >= 1");
  return std::cos(M_PI / (L + 1));
}

}  // namespace ssa
