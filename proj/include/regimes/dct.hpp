#pragma once

#include <Eigen/Dense>

#include <fstream>
#include <ostream>

#include "regimes/core.hpp"

namespace regimes {

/// Symmetric nonnegative T x T dissimilarity matrix with zero diagonal.
/// lambda = 0 means plain Euclidean distances.
struct DissimMatrix {
  Eigen::MatrixXd d;
  double lambda = 0.0;

  Eigen::Index size() const { return d.rows(); }
  double operator()(Eigen::Index t, Eigen::Index s) const { return d(t, s); }
};

/// Pairwise Euclidean distances over the p variables.
inline DissimMatrix euclidean_matrix(const Eigen::MatrixXd& X) {
  const Eigen::Index T = X.rows();
  if (T < 2) throw data_error("dissimilarity matrix needs at least 2 observations");
  DissimMatrix D;
  D.lambda = 0.0;
  D.d.setZero(T, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index s = t + 1; s < T; ++s) {
      const double dist = (X.row(t) - X.row(s)).norm();
      D.d(t, s) = dist;
      D.d(s, t) = dist;
    }
  }
  return D;
}

inline DissimMatrix euclidean_matrix(const SeriesMatrix& X) {
  return euclidean_matrix(X.values);
}

/// Temporal-contiguity dissimilarity: the Euclidean distance scaled by
/// 1 + lambda * |t-s| / (T-1). Time positions are index positions, so
/// irregular sampling is treated as equally spaced.
inline DissimMatrix dct_matrix(const Eigen::MatrixXd& X, double lambda) {
  if (lambda < 0) throw config_error("lambda must be nonnegative");
  DissimMatrix D = euclidean_matrix(X);
  D.lambda = lambda;
  if (lambda == 0.0) return D;
  const Eigen::Index T = X.rows();
  const double denom = static_cast<double>(T - 1);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index s = t + 1; s < T; ++s) {
      const double factor = 1.0 + lambda * static_cast<double>(s - t) / denom;
      D.d(t, s) *= factor;
      D.d(s, t) = D.d(t, s);
    }
  }
  return D;
}

inline DissimMatrix dct_matrix(const SeriesMatrix& X, double lambda) {
  return dct_matrix(X.values, lambda);
}

// Full square CSV, 12 significant digits.
inline void write_dissim_csv(std::ostream& os, const DissimMatrix& D) {
  const Eigen::Index T = D.size();
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index s = 0; s < T; ++s) {
      if (s) os << ',';
      os << detail::fmt_double(D.d(t, s));
    }
    os << '\n';
  }
}

inline void write_dissim_csv(const std::string& path, const DissimMatrix& D) {
  std::ofstream os(path);
  if (!os) throw data_error("cannot write '" + path + "'");
  write_dissim_csv(os, D);
}

}  // namespace regimes
