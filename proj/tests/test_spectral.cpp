#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ssa/rng.hpp"
#include "ssa/spectral.hpp"

using namespace ssa;

TEST_CASE("build_m quadratic form") {
  {
    Mat m = build_m(2);
    Vec b(2);
    b << 1, 1;
    CHECK(b.dot(m * b) == doctest::Approx(1.0));
  }
  {
    Mat m = build_m(3);
    Vec b(3);
    b << 1, 1, 0;
    CHECK(b.dot(m * b) == doctest::Approx(1.0));
    CHECK(b.squaredNorm() == doctest::Approx(2.0));
    CHECK(acf1(b) == doctest::Approx(0.5));
    b << 1, 0, -1;
    CHECK(b.dot(m * b) == doctest::Approx(0.0));
    CHECK(lag_one_form(b) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(build_m(0), Error);
  CHECK_THROWS_AS(build_m(kMaxLength + 1), Error);
}

TEST_CASE("analytic eigenpairs at L = 3 and L = 101") {
  SpectralBasis b3 = eigenpairs(3);
  CHECK(b3.lambda(0) == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(b3.lambda(1) == doctest::Approx(0.0).scale(1.0));
  CHECK(b3.lambda(2) == doctest::Approx(-0.70711).epsilon(1e-4));
  CHECK(b3.V(0, 0) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(b3.V(1, 0) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(b3.V(2, 0) == doctest::Approx(0.5).epsilon(1e-5));

  SpectralBasis b101 = eigenpairs(101);
  CHECK(b101.rho_max() == doctest::Approx(std::cos(M_PI / 102.0)).epsilon(1e-12));
  CHECK(b101.rho_max() == doctest::Approx(0.99953).epsilon(1e-5));
  CHECK(rho_max(101) == doctest::Approx(b101.rho_max()));
}

TEST_CASE("basis invariants: orthonormality, ordering, eigen-relation") {
  for (int L : {1, 2, 5, 17, 101}) {
    SpectralBasis basis = eigenpairs(L);
    Mat gram = basis.V.transpose() * basis.V;
    CHECK((gram - Mat::Identity(L, L)).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 1; j < L; ++j) CHECK(basis.lambda(j) < basis.lambda(j - 1));
    CHECK(basis.lambda(0) == doctest::Approx(-basis.lambda(L - 1)).epsilon(1e-14));
    Mat m = build_m(L);
    Mat resid = m * basis.V - basis.V * basis.lambda.asDiagonal();
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);
    // sign convention: first entry positive
    for (int j = 0; j < L; ++j) CHECK(basis.V(0, j) > 0.0);
  }
}

TEST_CASE("analytic eigenpairs match a dense symmetric eigensolver for L = 1..200") {
  for (int L = 1; L <= 200; ++L) {
    SpectralBasis basis = eigenpairs(L);
    Eigen::SelfAdjointEigenSolver<Mat> es(build_m(L));
    REQUIRE(es.info() == Eigen::Success);
    for (int j = 0; j < L; ++j) {
      const int k = L - 1 - j;  // solver sorts ascending
      CHECK(std::abs(es.eigenvalues()(k) - basis.lambda(j)) < 1e-9);
      Vec v = es.eigenvectors().col(k);
      if (v.dot(basis.V.col(j)) < 0.0) v = -v;
      CHECK((v - basis.V.col(j)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("rho_max bounds the lag-one ACF over random unit filters") {
  const int L = 7;
  const double bound = rho_max(L);
  SpectralBasis basis = eigenpairs(L);
  Rng rng(42);
  for (int trial = 0; trial < 10000; ++trial) {
    Vec b(L);
    for (int i = 0; i < L; ++i) b(i) = rng.normal();
    b.normalize();
    CHECK(acf1(b) <= bound + 1e-12);
    CHECK(acf1(b) >= -bound - 1e-12);
  }
  CHECK(acf1(basis.V.col(0)) == doctest::Approx(bound).epsilon(1e-13));
  CHECK(acf1(basis.V.col(L - 1)) == doctest::Approx(-bound).epsilon(1e-13));
}

TEST_CASE("Parseval identity") {
  SpectralBasis basis = eigenpairs(16);
  Rng rng(7);
  Vec b(16);
  for (int i = 0; i < 16; ++i) b(i) = rng.normal();
  const Vec w = basis.V.transpose() * b;
  CHECK(std::abs(b.squaredNorm() - w.squaredNorm()) < 1e-12);
}

TEST_CASE("spectral weights: eigen-directions, support set, reconstruction") {
  SpectralBasis basis = eigenpairs(6);
  {
    SpectralWeights sw = spectral_weights(basis.V.col(1), basis);
    CHECK(sw.w(1) == doctest::Approx(1.0));
    CHECK(sw.nz == std::vector<int>{1});
  }
  {
    // band-limited target: w_1 = w_2 = w_3 = 0, w_4..10 = 1/sqrt(7)
    SpectralBasis b10 = eigenpairs(10);
    Vec gamma = Vec::Zero(10);
    for (int i = 3; i < 10; ++i) gamma += (1.0 / std::sqrt(7.0)) * b10.V.col(i);
    SpectralWeights sw = spectral_weights(gamma, b10);
    CHECK(sw.nz == std::vector<int>{3, 4, 5, 6, 7, 8, 9});
    for (int i : sw.nz) CHECK(sw.w(i) == doctest::Approx(0.377964).epsilon(1e-5));
    CHECK(gamma.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    Rng rng(3);
    SpectralBasis b8 = eigenpairs(8);
    Vec gamma(8);
    for (int i = 0; i < 8; ++i) gamma(i) = rng.normal();
    SpectralWeights sw = spectral_weights(gamma, b8);
    CHECK((b8.V * sw.w - gamma).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(spectral_weights(Vec::Zero(5), eigenpairs(5)), Error);
}
