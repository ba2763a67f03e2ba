#include "ssa/spectral.hpp"

#include <cmath>

namespace ssa {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid_dimension";
    case ErrorCode::identifiability: return "identifiability";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::constraint_infeasible: return "constraint_infeasible";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::invalid_model: return "invalid_model";
    case ErrorCode::span_too_small: return "span_too_small";
    case ErrorCode::truncation_insufficient: return "truncation_insufficient";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::domain: return "domain";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

namespace {

void check_length(int L) {
  if (L < 1) throw Error(ErrorCode::invalid_dimension, "filter length must be >= 1");
  if (L > kMaxLength)
    throw Error(ErrorCode::invalid_dimension,
                "filter length exceeds supported maximum " + std::to_string(kMaxLength));
}

}  // namespace

Mat build_m(int L) {
  check_length(L);
  Mat m = Mat::Zero(L, L);
  for (int k = 0; k + 1 < L; ++k) {
    m(k, k + 1) = 0.5;
    m(k + 1, k) = 0.5;
  }
  return m;
}

SpectralBasis eigenpairs(int L) {
  check_length(L);
  SpectralBasis basis;
  basis.L = L;
  basis.lambda.resize(L);
  basis.V.resize(L, L);
  const double step = M_PI / (L + 1);
  // Exact column norm of the sine vectors: sum_k sin^2(k*j*pi/(L+1)) = (L+1)/2.
  const double scale = std::sqrt(2.0 / (L + 1));
  for (int j = 1; j <= L; ++j) {
    basis.lambda(j - 1) = std::cos(j * step);
    for (int k = 1; k <= L; ++k) basis.V(k - 1, j - 1) = scale * std::sin(k * j * step);
  }
  return basis;
}

SpectralWeights spectral_weights(const Vec& gamma_delta, const SpectralBasis& basis,
                                 double tol_nz) {
  if (gamma_delta.size() != basis.L)
    throw Error(ErrorCode::invalid_dimension, "target length does not match basis");
  if (gamma_delta.lpNorm<Eigen::Infinity>() == 0.0)
    throw Error(ErrorCode::identifiability, "target filter is identically zero");
  SpectralWeights sw;
  sw.w = basis.V.transpose() * gamma_delta;
  const double wmax = sw.w.lpNorm<Eigen::Infinity>();
  for (int i = 0; i < basis.L; ++i)
    if (std::abs(sw.w(i)) > tol_nz * wmax) sw.nz.push_back(i);
  if (sw.nz.empty())
    throw Error(ErrorCode::identifiability, "target has no non-vanishing spectral weight");
  return sw;
}

double lag_one_form(const Vec& b) {
  double s = 0.0;
  for (int k = 1; k < b.size(); ++k) s += b(k - 1) * b(k);
  return s;
}

double acf1(const Vec& b) {
  const double denom = b.squaredNorm();
  if (denom == 0.0) throw Error(ErrorCode::identifiability, "zero filter has no ACF");
  return lag_one_form(b) / denom;
}

}  // namespace ssa
