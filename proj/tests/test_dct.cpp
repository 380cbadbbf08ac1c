#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "regimes/dct.hpp"

using namespace regimes;

namespace {
Eigen::MatrixXd random_matrix(int T, int p, std::uint64_t seed) {
  testutil::Rng rng(seed);
  Eigen::MatrixXd X(T, p);
  for (int i = 0; i < T; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.normal();
  return X;
}
}  // namespace

TEST_CASE("euclidean matrix matches direct pairwise norms") {
  const Eigen::MatrixXd X = random_matrix(12, 3, 7);
  const DissimMatrix D = euclidean_matrix(X);
  for (int i = 0; i < 12; ++i) {
    CHECK(D.d(i, i) == 0.0);
    for (int j = 0; j < 12; ++j) {
      CHECK(D.d(i, j) == Catch::Approx(D.d(j, i)).margin(0.0));
      double s = 0.0;
      for (int c = 0; c < 3; ++c) s += (X(i, c) - X(j, c)) * (X(i, c) - X(j, c));
      CHECK(D.d(i, j) == Catch::Approx(std::sqrt(s)).margin(1e-12));
    }
  }
}

TEST_CASE("lambda zero reduces the DCT to the Euclidean distance") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Eigen::MatrixXd X = random_matrix(15, 2, seed);
    const DissimMatrix E = euclidean_matrix(X);
    const DissimMatrix D = dct_matrix(X, 0.0);
    CHECK((D.d - E.d).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("DCT is bounded by (1 + lambda) times the Euclidean distance") {
  const Eigen::MatrixXd X = random_matrix(20, 2, 42);
  const DissimMatrix E = euclidean_matrix(X);
  for (double lambda : {0.1, 1.0, 5.0}) {
    const DissimMatrix D = dct_matrix(X, lambda);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        CHECK(D.d(i, j) >= E.d(i, j) - 1e-12);
        CHECK(D.d(i, j) <= (1.0 + lambda) * E.d(i, j) + 1e-12);
      }
  }
}

TEST_CASE("temporal weighting matches the closed form") {
  const Eigen::MatrixXd X = random_matrix(9, 2, 3);
  const double lambda = 0.7;
  const DissimMatrix E = euclidean_matrix(X);
  const DissimMatrix D = dct_matrix(X, lambda);
  for (int t = 0; t < 9; ++t)
    for (int s = 0; s < 9; ++s) {
      const double factor = 1.0 + lambda * std::abs(t - s) / 8.0;
      CHECK(D.d(t, s) == Catch::Approx(factor * E.d(t, s)).margin(1e-12));
    }
}

TEST_CASE("the DCT violates the triangle inequality") {
  // Collinear points with equal spacing: the direct long hop is inflated
  // more than the two short hops combined.
  Eigen::MatrixXd X(3, 1);
  X << 0.0, 1.0, 2.0;
  const DissimMatrix D = dct_matrix(X, 1.0);
  CHECK(D.d(0, 2) > D.d(0, 1) + D.d(1, 2));
}

TEST_CASE("negative lambda is rejected, tiny inputs are rejected") {
  const Eigen::MatrixXd X = random_matrix(5, 1, 1);
  CHECK_THROWS_AS(dct_matrix(X, -0.5), config_error);
  Eigen::MatrixXd one(1, 1);
  one << 0.0;
  CHECK_THROWS_AS(euclidean_matrix(one), data_error);
}
