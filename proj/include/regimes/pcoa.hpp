#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "regimes/dct.hpp"

namespace regimes {

/// Principal-coordinates embedding of a dissimilarity matrix.
struct Embedding {
  Eigen::MatrixXd coords;       // T x p, columns zero-mean
  Eigen::VectorXd eigenvalues;  // all T eigenvalues, descending
  int retained = 0;             // positive eigenvalues actually used
  double negative_mass = 0.0;   // sum of |negative eigenvalues|
  bool truncated = false;       // fewer than p positive eigenvalues
};

/// Classical (metric) principal coordinates analysis.
///
/// Gower double-centering B = -1/2 * J * D^2 * J followed by an
/// eigendecomposition; coordinate j is the j-th eigenvector scaled by
/// sqrt(eigenvalue). Nonpositive eigenvalues contribute zero columns and
/// their total magnitude is reported as `negative_mass` so callers can judge
/// how non-Euclidean the input was.
inline Embedding pcoa_embed(const DissimMatrix& D, int p) {
  const Eigen::Index T = D.size();
  if (p < 1 || p > static_cast<int>(T) - 1)
    throw config_error("embedding dimension must be in [1, T-1]");

  const Eigen::MatrixXd d2 = D.d.array().square();
  const Eigen::MatrixXd J =
      Eigen::MatrixXd::Identity(T, T) - Eigen::MatrixXd::Constant(T, T, 1.0 / static_cast<double>(T));
  Eigen::MatrixXd B = -0.5 * J * d2 * J;
  B = 0.5 * (B + B.transpose().eval());  // kill rounding asymmetry

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eigendecomposition failed in principal coordinates analysis");

  // Eigen returns ascending order; flip to descending.
  Eigen::VectorXd evals = solver.eigenvalues().reverse();
  Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

  const double scale = evals.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * scale;

  Embedding E;
  E.eigenvalues = evals;
  E.coords.setZero(T, p);
  for (Eigen::Index i = 0; i < T; ++i) {
    const double ev = evals(i);
    if (ev < -tol) E.negative_mass += -ev;
  }
  int filled = 0;
  for (Eigen::Index i = 0; i < T && filled < p; ++i) {
    if (evals(i) > tol) {
      E.coords.col(filled) = evecs.col(i) * std::sqrt(evals(i));
      ++filled;
    }
  }
  E.retained = filled;
  E.truncated = filled < p;
  return E;
}

/// Normalized residual between D and the embedding's pairwise distances:
/// sqrt( sum_{t<s} (D_ts - dist_ts)^2 / sum_{t<s} D_ts^2 ).
inline double embedding_stress(const DissimMatrix& D, const Embedding& E) {
  const Eigen::Index T = D.size();
  if (E.coords.rows() != T) throw config_error("embedding size does not match dissimilarity matrix");
  double num = 0.0, den = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index s = t + 1; s < T; ++s) {
      const double dist = (E.coords.row(t) - E.coords.row(s)).norm();
      const double r = D.d(t, s) - dist;
      num += r * r;
      den += D.d(t, s) * D.d(t, s);
    }
  }
  if (den == 0.0) throw data_error("stress undefined for an all-zero dissimilarity matrix");
  return std::sqrt(num / den);
}

}  // namespace regimes
