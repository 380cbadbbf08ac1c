#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "regimes/rng.hpp"

// Test-side utilities: data generators and independent oracles. Oracles are
// written naively on purpose so they share no code path with the library.
namespace testutil {

using regimes::Rng;

// Gaussian blobs around the given centers, concatenated in order.
inline Eigen::MatrixXd make_blobs(const std::vector<std::vector<double>>& centers,
                                  const std::vector<int>& sizes, double spread,
                                  std::uint64_t seed, std::vector<int>* labels = nullptr) {
  const int p = static_cast<int>(centers.front().size());
  int total = 0;
  for (int s : sizes) total += s;
  Eigen::MatrixXd X(total, p);
  if (labels) labels->clear();
  Rng rng(seed);
  int row = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < sizes[c]; ++i, ++row) {
      for (int j = 0; j < p; ++j)
        X(row, j) = centers[c][static_cast<std::size_t>(j)] + spread * rng.normal();
      if (labels) labels->push_back(static_cast<int>(c));
    }
  }
  return X;
}

inline double comb2(double n) { return n * (n - 1.0) / 2.0; }

// Adjusted Rand index between two labelings of the same observations.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  int ka = 0, kb = 0;
  for (int v : a) ka = std::max(ka, v + 1);
  for (int v : b) kb = std::max(kb, v + 1);
  std::vector<std::vector<int>> m(static_cast<std::size_t>(ka),
                                  std::vector<int>(static_cast<std::size_t>(kb), 0));
  for (int i = 0; i < n; ++i)
    ++m[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])]
       [static_cast<std::size_t>(b[static_cast<std::size_t>(i)])];
  double index = 0.0, ra = 0.0, rb = 0.0;
  for (int i = 0; i < ka; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < kb; ++j) {
      index += comb2(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      rowsum += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    ra += comb2(rowsum);
  }
  for (int j = 0; j < kb; ++j) {
    double colsum = 0.0;
    for (int i = 0; i < ka; ++i) colsum += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    rb += comb2(colsum);
  }
  const double expected = ra * rb / comb2(n);
  const double maxi = 0.5 * (ra + rb);
  if (maxi == expected) return index == expected ? 1.0 : 0.0;
  return (index - expected) / (maxi - expected);
}

// Stationary-start GARCH(1,1) sample path with Gaussian innovations.
inline std::vector<double> simulate_garch11(double mu, double omega, double alpha, double beta,
                                            int T, std::uint64_t seed, int burn = 200) {
  Rng rng(seed);
  double h = omega / (1.0 - alpha - beta);
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(T));
  double e = std::sqrt(h) * rng.normal();
  for (int t = 1; t < burn + T; ++t) {
    h = omega + alpha * e * e + beta * h;
    e = std::sqrt(h) * rng.normal();
    if (t >= burn) x.push_back(mu + e);
  }
  return x;
}

// Least squares by explicit normal equations and Gaussian elimination with
// partial pivoting; independent of any Eigen decomposition.
inline std::vector<double> normal_equations_solve(const std::vector<std::vector<double>>& X,
                                                  const std::vector<double>& y) {
  const std::size_t n = X.size(), p = X.front().size();
  std::vector<std::vector<double>> A(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t r = 0; r < n; ++r) A[i][j] += X[r][i] * X[r][j];
    for (std::size_t r = 0; r < n; ++r) A[i][p] += X[r][i] * y[r];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col || A[col][col] == 0.0) continue;
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c <= p; ++c) A[r][c] -= f * A[col][c];
    }
  }
  std::vector<double> beta(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) beta[i] = A[i][p] / A[i][i];
  return beta;
}

inline std::vector<std::string> monthly_dates(int n, int year0 = 1990, int month0 = 1) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  int y = year0, m = month0;
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", y, m);
    out.emplace_back(buf);
    if (++m > 12) {
      m = 1;
      ++y;
    }
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
