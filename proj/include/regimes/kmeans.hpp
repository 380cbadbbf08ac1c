#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "regimes/core.hpp"
#include "regimes/rng.hpp"

namespace regimes {

struct KMeansResult {
  std::vector<int> labels;   // cluster id per observation, 0..k-1
  Eigen::MatrixXd centers;   // k x p
  double wss = 0.0;          // total within-cluster sum of squared distances
  int iterations = 0;        // Lloyd iterations of the winning restart
  std::uint64_t seed = 0;
  int k = 0;
  std::vector<double> wss_trace;  // per-iteration objective of the winning restart
};

namespace detail {

inline Eigen::Index count_distinct_rows(const Eigen::MatrixXd& X) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    rows.emplace_back(X.row(i).data(), X.row(i).data() + X.cols());
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return static_cast<Eigen::Index>(rows.size());
}

inline double sq_dist(const Eigen::MatrixXd& X, Eigen::Index i, const Eigen::MatrixXd& C,
                      Eigen::Index c) {
  return (X.row(i) - C.row(c)).squaredNorm();
}

// k-means++ seeding: first center uniform, the rest sampled proportionally
// to the squared distance to the nearest chosen center.
inline Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& X, int k, Rng& rng) {
  const Eigen::Index T = X.rows();
  Eigen::MatrixXd centers(k, X.cols());
  std::vector<double> mind2(static_cast<std::size_t>(T),
                            std::numeric_limits<double>::infinity());

  Eigen::Index first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(T)));
  centers.row(0) = X.row(first);
  for (Eigen::Index i = 0; i < T; ++i)
    mind2[static_cast<std::size_t>(i)] = sq_dist(X, i, centers, 0);

  for (int c = 1; c < k; ++c) {
    double total = std::accumulate(mind2.begin(), mind2.end(), 0.0);
    Eigen::Index pick;
    if (total > 0) {
      double u = rng.uniform01() * total;
      std::size_t idx = 0;
      double acc = 0.0;
      for (; idx + 1 < mind2.size(); ++idx) {
        acc += mind2[idx];
        if (u < acc) break;
      }
      pick = static_cast<Eigen::Index>(idx);
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(T)));
    }
    centers.row(c) = X.row(pick);
    for (Eigen::Index i = 0; i < T; ++i) {
      const double d2 = sq_dist(X, i, centers, c);
      auto& m = mind2[static_cast<std::size_t>(i)];
      if (d2 < m) m = d2;
    }
  }
  return centers;
}

struct LloydOutcome {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double wss;
  int iterations;
  std::vector<double> trace;
};

inline LloydOutcome lloyd(const Eigen::MatrixXd& X, Eigen::MatrixXd centers, int k,
                          int max_iter) {
  const Eigen::Index T = X.rows();
  std::vector<int> labels(static_cast<std::size_t>(T), -1);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  LloydOutcome out;
  out.iterations = 0;

  for (int it = 0; it < max_iter; ++it) {
    // Assignment step (ties go to the lowest cluster id).
    bool changed = false;
    for (Eigen::Index i = 0; i < T; ++i) {
      int best = 0;
      double bestd = sq_dist(X, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d2 = sq_dist(X, i, centers, c);
        if (d2 < bestd) {
          bestd = d2;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }

    // Empty-cluster repair: seed each empty cluster with the point farthest
    // from its current center (taken from clusters that keep >= 2 members).
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    bool repaired = false;
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index worst = -1;
      double worstd = -1.0;
      for (Eigen::Index i = 0; i < T; ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(l)] < 2) continue;
        const double d2 = sq_dist(X, i, centers, l);
        if (d2 > worstd) {
          worstd = d2;
          worst = i;
        }
      }
      if (worst < 0) throw data_error("cannot form " + std::to_string(k) + " nonempty clusters");
      --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(worst)])];
      labels[static_cast<std::size_t>(worst)] = c;
      sizes[static_cast<std::size_t>(c)] = 1;
      centers.row(c) = X.row(worst);
      repaired = true;
    }

    // Update step: centers become member means.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
    for (Eigen::Index i = 0; i < T; ++i)
      sums.row(labels[static_cast<std::size_t>(i)]) += X.row(i);
    for (int c = 0; c < k; ++c)
      centers.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);

    double wss = 0.0;
    for (Eigen::Index i = 0; i < T; ++i)
      wss += sq_dist(X, i, centers, labels[static_cast<std::size_t>(i)]);
    out.trace.push_back(wss);
    ++out.iterations;

    if (!changed && !repaired) break;
  }

  out.labels = std::move(labels);
  out.centers = std::move(centers);
  out.wss = out.trace.back();
  return out;
}

}  // namespace detail

/// Best-of-restarts Lloyd k-means with k-means++ seeding. Deterministic for a
/// given seed: each restart draws from its own derived sub-seed, so the result
/// does not depend on evaluation order.
inline KMeansResult kmeans(const Eigen::MatrixXd& X, int k, int restarts = 25,
                           std::uint64_t seed = 1, int max_iter = 300) {
  const Eigen::Index T = X.rows();
  if (k < 1 || k > static_cast<int>(T))
    throw config_error("k must be in [1, T]");
  if (restarts < 1) throw config_error("restarts must be >= 1");
  if (detail::count_distinct_rows(X) < k)
    throw data_error("k exceeds the number of distinct observations");

  KMeansResult best;
  best.wss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(r));
    Eigen::MatrixXd init = detail::kmeanspp_init(X, k, rng);
    detail::LloydOutcome run = detail::lloyd(X, std::move(init), k, max_iter);
    if (run.wss < best.wss) {
      best.labels = std::move(run.labels);
      best.centers = std::move(run.centers);
      best.wss = run.wss;
      best.iterations = run.iterations;
      best.wss_trace = std::move(run.trace);
    }
  }
  best.seed = seed;
  best.k = k;
  return best;
}

inline KMeansResult kmeans(const SeriesMatrix& X, int k, int restarts = 25,
                           std::uint64_t seed = 1, int max_iter = 300) {
  return kmeans(X.values, k, restarts, seed, max_iter);
}

/// Relabel clusters as ordered regimes, ascending by the cluster mean of the
/// first variable of `X` (ties break on the smaller original cluster id).
/// For k <= 4 regimes get the canonical low/moderate/high/hyper names.
inline RegimeAssignment order_regimes(const KMeansResult& result, const Eigen::MatrixXd& X) {
  const int k = result.k;
  const Eigen::Index T = X.rows();
  if (static_cast<std::size_t>(T) != result.labels.size())
    throw config_error("assignment length does not match data");

  std::vector<double> mean0(static_cast<std::size_t>(k), 0.0);
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < T; ++i) {
    const auto c = static_cast<std::size_t>(result.labels[static_cast<std::size_t>(i)]);
    mean0[c] += X(i, 0);
    ++count[c];
  }
  for (int c = 0; c < k; ++c) {
    if (count[static_cast<std::size_t>(c)] == 0)
      throw data_error("cluster " + std::to_string(c) + " is empty");
    mean0[static_cast<std::size_t>(c)] /= count[static_cast<std::size_t>(c)];
  }

  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = mean0[static_cast<std::size_t>(a)];
    const double mb = mean0[static_cast<std::size_t>(b)];
    if (ma != mb) return ma < mb;
    return a < b;
  });
  std::vector<int> rank(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;

  RegimeAssignment A;
  A.k = k;
  A.cluster_of = result.labels;
  A.regime_of.resize(result.labels.size());
  for (std::size_t i = 0; i < result.labels.size(); ++i)
    A.regime_of[i] = rank[static_cast<std::size_t>(result.labels[i])];
  A.centers.resize(k, result.centers.cols());
  for (int r = 0; r < k; ++r)
    A.centers.row(r) = result.centers.row(order[static_cast<std::size_t>(r)]);
  A.regime_names = default_regime_names(k);
  return A;
}

inline RegimeAssignment order_regimes(const KMeansResult& result, const SeriesMatrix& X) {
  return order_regimes(result, X.values);
}

}  // namespace regimes
