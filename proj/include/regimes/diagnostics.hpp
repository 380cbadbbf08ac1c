#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "regimes/kmeans.hpp"
#include "regimes/validation.hpp"

namespace regimes {

/// One cluster-count selection curve. `metric` is aligned to `k`:
/// WSS for the elbow rule, mean silhouette width, or the gap value.
/// `se` is populated for the gap statistic only (s_k).
struct KSelectionCurve {
  std::string criterion;
  std::vector<int> k;
  std::vector<double> metric;
  std::vector<double> se;
  int selected_k = 1;
  int B = 0;
};

/// Best-of-restarts WSS for k = 1..kmax. The preferred k is the one with
/// the largest marginal WSS drop (the sharpest elbow step).
inline KSelectionCurve elbow_curve(const Eigen::MatrixXd& X, int kmax, std::uint64_t seed,
                                   int restarts = 25) {
  if (kmax < 1 || kmax > X.rows()) throw config_error("kmax must be in 1..T");
  KSelectionCurve c;
  c.criterion = "elbow";
  for (int k = 1; k <= kmax; ++k) {
    c.k.push_back(k);
    c.metric.push_back(kmeans(X, k, restarts, derive_seed(seed, static_cast<std::uint64_t>(k))).wss);
  }
  c.selected_k = 1;
  double best_drop = -1.0;
  for (std::size_t i = 1; i < c.metric.size(); ++i) {
    const double drop = c.metric[i - 1] - c.metric[i];
    if (drop > best_drop) {
      best_drop = drop;
      c.selected_k = c.k[i];
    }
  }
  return c;
}

/// Mean silhouette width of the best k-means run for k = 2..kmax.
inline KSelectionCurve silhouette_curve(const Eigen::MatrixXd& X, int kmax, std::uint64_t seed,
                                        int restarts = 25) {
  if (kmax < 2 || kmax > X.rows()) throw config_error("kmax must be in 2..T");
  const DissimMatrix D = euclidean_matrix(X);
  KSelectionCurve c;
  c.criterion = "silhouette";
  for (int k = 2; k <= kmax; ++k) {
    const KMeansResult r = kmeans(X, k, restarts, derive_seed(seed, static_cast<std::uint64_t>(k)));
    c.k.push_back(k);
    c.metric.push_back(silhouette(D, r.labels, k).mean);
  }
  c.selected_k = c.k.front();
  for (std::size_t i = 1; i < c.metric.size(); ++i)
    if (c.metric[i] > c.metric[static_cast<std::size_t>(c.selected_k - 2)]) c.selected_k = c.k[i];
  return c;
}

/// Gap statistic with a uniform-over-range reference distribution:
/// gap(k) = mean_b log WSS_b(k) - log WSS(k), s_k = sd_b * sqrt(1 + 1/B).
/// Selected k is the smallest with gap(k) >= gap(k+1) - s_{k+1}.
inline KSelectionCurve gap_statistic(const Eigen::MatrixXd& X, int kmax, int B,
                                     std::uint64_t seed, int restarts = 25) {
  if (kmax < 1 || kmax > X.rows()) throw config_error("kmax must be in 1..T");
  if (B < 10) throw config_error("gap statistic needs B >= 10 reference draws");
  const Eigen::Index T = X.rows(), p = X.cols();
  Eigen::VectorXd lo = X.colwise().minCoeff();
  Eigen::VectorXd hi = X.colwise().maxCoeff();
  for (Eigen::Index j = 0; j < p; ++j)
    if (!(hi[j] > lo[j]))
      throw data_error("variable " + std::to_string(j) + " has a degenerate range");

  KSelectionCurve c;
  c.criterion = "gap";
  c.B = B;
  std::vector<double> log_w(static_cast<std::size_t>(kmax));
  for (int k = 1; k <= kmax; ++k) {
    c.k.push_back(k);
    log_w[static_cast<std::size_t>(k - 1)] =
        std::log(kmeans(X, k, restarts, derive_seed(seed, static_cast<std::uint64_t>(k))).wss);
  }

  // One reference dataset per draw, shared across all k.
  std::vector<std::vector<double>> ref_log(static_cast<std::size_t>(kmax));
  for (int b = 0; b < B; ++b) {
    const std::uint64_t sb = derive_seed(seed, 1000003u + static_cast<std::uint64_t>(b));
    Rng rng(sb);
    Eigen::MatrixXd R(T, p);
    for (Eigen::Index i = 0; i < T; ++i)
      for (Eigen::Index j = 0; j < p; ++j) R(i, j) = rng.uniform(lo[j], hi[j]);
    for (int k = 1; k <= kmax; ++k)
      ref_log[static_cast<std::size_t>(k - 1)].push_back(
          std::log(kmeans(R, k, restarts, derive_seed(sb, static_cast<std::uint64_t>(k))).wss));
  }

  for (int k = 1; k <= kmax; ++k) {
    const auto& l = ref_log[static_cast<std::size_t>(k - 1)];
    const double lbar = std::accumulate(l.begin(), l.end(), 0.0) / B;
    double var = 0.0;
    for (double v : l) var += (v - lbar) * (v - lbar);
    const double sd = std::sqrt(var / B);
    c.metric.push_back(lbar - log_w[static_cast<std::size_t>(k - 1)]);
    c.se.push_back(sd * std::sqrt(1.0 + 1.0 / B));
  }

  c.selected_k = kmax;
  for (int k = 1; k < kmax; ++k) {
    if (c.metric[static_cast<std::size_t>(k - 1)] >=
        c.metric[static_cast<std::size_t>(k)] - c.se[static_cast<std::size_t>(k)]) {
      c.selected_k = k;
      break;
    }
  }
  return c;
}

inline KSelectionCurve elbow_curve(const SeriesMatrix& m, int kmax, std::uint64_t seed,
                                   int restarts = 25) {
  return elbow_curve(m.values, kmax, seed, restarts);
}
inline KSelectionCurve silhouette_curve(const SeriesMatrix& m, int kmax, std::uint64_t seed,
                                        int restarts = 25) {
  return silhouette_curve(m.values, kmax, seed, restarts);
}
inline KSelectionCurve gap_statistic(const SeriesMatrix& m, int kmax, int B, std::uint64_t seed,
                                     int restarts = 25) {
  return gap_statistic(m.values, kmax, B, seed, restarts);
}

}  // namespace regimes
