#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <vector>

#include "regimes/core.hpp"

namespace regimes {

/// Node of a single-variable classification tree. Cuts use the interval
/// convention of the thresholds they produce: left child holds x < cut,
/// right child holds x >= cut.
struct SplitNode {
  bool is_leaf = true;
  int label = -1;  // majority label at this node
  double cut = 0.0;
  double impurity_decrease = 0.0;
  std::unique_ptr<SplitNode> left, right;
};

struct ThresholdFit {
  ThresholdSet thresholds;
  double purity = 1.0;  // fraction of observations consistent with the cuts
  std::unique_ptr<SplitNode> root;
};

namespace detail {

struct SortedSample {
  std::vector<double> x;   // ascending
  std::vector<int> label;  // aligned with x
};

inline double gini(const std::vector<int>& counts, int n) {
  if (n == 0) return 0.0;
  double s = 0.0;
  for (int c : counts) {
    const double p = static_cast<double>(c) / n;
    s += p * p;
  }
  return 1.0 - s;
}

struct BestSplit {
  bool found = false;
  std::size_t pos = 0;  // split before index pos (left = [lo,pos), right = [pos,hi))
  double cut = 0.0;
  double decrease = 0.0;
};

// Exhaustive scan over midpoints of consecutive distinct values, minimizing
// the size-weighted Gini of the two children. Ties pick the smallest cut.
inline BestSplit best_gini_split(const SortedSample& s, std::size_t lo, std::size_t hi, int k,
                                 int min_leaf) {
  const int n = static_cast<int>(hi - lo);
  std::vector<int> total(static_cast<std::size_t>(k), 0);
  for (std::size_t i = lo; i < hi; ++i) ++total[static_cast<std::size_t>(s.label[i])];
  const double parent = gini(total, n);

  BestSplit best;
  std::vector<int> leftc(static_cast<std::size_t>(k), 0);
  int nl = 0;
  double best_weighted = std::numeric_limits<double>::infinity();
  for (std::size_t i = lo; i + 1 < hi; ++i) {
    ++leftc[static_cast<std::size_t>(s.label[i])];
    ++nl;
    if (s.x[i] == s.x[i + 1]) continue;  // not a boundary between distinct values
    const int nr = n - nl;
    if (nl < min_leaf || nr < min_leaf) continue;
    std::vector<int> rightc(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
      rightc[static_cast<std::size_t>(c)] = total[static_cast<std::size_t>(c)] - leftc[static_cast<std::size_t>(c)];
    const double weighted =
        (nl * gini(leftc, nl) + nr * gini(rightc, nr)) / static_cast<double>(n);
    if (weighted < best_weighted) {
      best_weighted = weighted;
      best.found = true;
      best.pos = i + 1;
      best.cut = 0.5 * (s.x[i] + s.x[i + 1]);
      best.decrease = parent - weighted;
    }
  }
  if (best.found && best.decrease <= 0.0) best.found = false;
  return best;
}

inline int majority_label(const SortedSample& s, std::size_t lo, std::size_t hi, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = lo; i < hi; ++i) ++counts[static_cast<std::size_t>(s.label[i])];
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

inline bool is_pure(const SortedSample& s, std::size_t lo, std::size_t hi) {
  for (std::size_t i = lo + 1; i < hi; ++i)
    if (s.label[i] != s.label[lo]) return false;
  return true;
}

inline std::unique_ptr<SplitNode> grow(const SortedSample& s, std::size_t lo, std::size_t hi,
                                       int k, int min_leaf) {
  auto node = std::make_unique<SplitNode>();
  node->label = majority_label(s, lo, hi, k);
  if (is_pure(s, lo, hi)) return node;
  const BestSplit split = best_gini_split(s, lo, hi, k, min_leaf);
  if (!split.found) return node;
  node->is_leaf = false;
  node->cut = split.cut;
  node->impurity_decrease = split.decrease;
  node->left = grow(s, lo, split.pos, k, min_leaf);
  node->right = grow(s, split.pos, hi, k, min_leaf);
  return node;
}

// In-order walk: leaf labels and the cuts separating them.
inline void collect_leaves(const SplitNode* node, std::vector<int>& leaf_labels,
                           std::vector<double>& cuts) {
  if (node->is_leaf) {
    leaf_labels.push_back(node->label);
    return;
  }
  collect_leaves(node->left.get(), leaf_labels, cuts);
  cuts.push_back(node->cut);
  collect_leaves(node->right.get(), leaf_labels, cuts);
}

}  // namespace detail

/// Recover k-1 ascending regime thresholds from a labeled variable with a
/// depth-unbounded Gini tree (min_leaf defaults to 1, no pruning).
///
/// For interval-separable labels the tree boundaries are the thresholds and
/// purity is 1. Overlapping regimes do not error: thresholds fall back to the
/// best binary split between the pooled label groups {< r} and {>= r}, and
/// the returned purity drops below 1.
inline ThresholdFit fit_thresholds(const std::vector<double>& x, const std::vector<int>& labels,
                                   int k, int min_leaf = 1) {
  if (x.size() != labels.size()) throw config_error("value/label length mismatch");
  const std::size_t T = x.size();
  if (k < 1) throw config_error("k must be positive");
  if (static_cast<std::size_t>(k) > T) throw config_error("k exceeds the number of observations");
  for (int l : labels)
    if (l < 0 || l >= k) throw config_error("label outside 0..k-1");

  ThresholdFit fit;
  if (k == 1) {
    fit.root = std::make_unique<SplitNode>();
    fit.root->label = 0;
    return fit;
  }

  std::size_t distinct = 0;
  {
    std::vector<double> xs = x;
    std::sort(xs.begin(), xs.end());
    distinct = static_cast<std::size_t>(std::unique(xs.begin(), xs.end()) - xs.begin());
  }
  if (distinct < static_cast<std::size_t>(k))
    throw data_error("fewer distinct values than regimes");

  detail::SortedSample s;
  {
    std::vector<std::size_t> order(T);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    s.x.reserve(T);
    s.label.reserve(T);
    for (std::size_t i : order) {
      s.x.push_back(x[i]);
      s.label.push_back(labels[i]);
    }
  }

  fit.root = detail::grow(s, 0, T, k, min_leaf);
  if (fit.root->is_leaf) {
    // All labels identical (or unsplittable): nothing to cut.
    fit.purity = 1.0;
    bool uniform = std::all_of(labels.begin(), labels.end(),
                               [&](int l) { return l == labels.front(); });
    if (uniform) return fit;
  }

  std::vector<int> leaf_labels;
  std::vector<double> cuts;
  detail::collect_leaves(fit.root.get(), leaf_labels, cuts);

  // Merge adjacent leaves with equal predictions; the surviving boundaries
  // separate consecutive regimes when the labeling is interval-consistent.
  std::vector<int> run_labels;
  std::vector<double> boundaries;
  for (std::size_t i = 0; i < leaf_labels.size(); ++i) {
    if (!run_labels.empty() && run_labels.back() == leaf_labels[i]) continue;
    if (!run_labels.empty()) boundaries.push_back(cuts[i - 1]);
    run_labels.push_back(leaf_labels[i]);
  }

  bool ascending_runs = run_labels.size() == static_cast<std::size_t>(k);
  for (std::size_t i = 0; ascending_runs && i < run_labels.size(); ++i)
    ascending_runs = run_labels[i] == static_cast<int>(i);

  if (ascending_runs) {
    fit.thresholds.cuts = boundaries;
  } else {
    // Overlapping regimes: per consecutive pair, take the best binary Gini
    // split of the pooled groups {< r} vs {>= r}.
    detail::SortedSample pooled = s;
    fit.thresholds.cuts.clear();
    for (int r = 1; r < k; ++r) {
      for (std::size_t i = 0; i < T; ++i)
        pooled.label[i] = s.label[i] < r ? 0 : 1;
      const detail::BestSplit split = detail::best_gini_split(pooled, 0, T, 2, 1);
      if (!split.found)
        throw data_error("cannot place a threshold between regimes " + std::to_string(r - 1) +
                         " and " + std::to_string(r));
      fit.thresholds.cuts.push_back(split.cut);
    }
    if (!std::is_sorted(fit.thresholds.cuts.begin(), fit.thresholds.cuts.end()) ||
        std::adjacent_find(fit.thresholds.cuts.begin(), fit.thresholds.cuts.end()) !=
            fit.thresholds.cuts.end())
      throw data_error("regime thresholds are not strictly ascending");
  }

  std::size_t consistent = 0;
  for (std::size_t i = 0; i < T; ++i)
    if (fit.thresholds.classify(x[i]) == labels[i]) ++consistent;
  fit.purity = static_cast<double>(consistent) / static_cast<double>(T);
  return fit;
}

inline ThresholdFit fit_thresholds(const std::vector<double>& x, const RegimeAssignment& A,
                                   int min_leaf = 1) {
  return fit_thresholds(x, A.regime_of, A.k, min_leaf);
}

}  // namespace regimes
