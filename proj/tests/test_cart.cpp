#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>

#include "helpers.hpp"
#include "regimes/cart.hpp"

using namespace regimes;

namespace {

// Exhaustive oracle: recursively pick the best Gini split by scanning every
// midpoint between consecutive distinct sorted values, then read the cuts
// between leaf runs. Written independently of the library implementation.
double oracle_gini(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  double g = 1.0;
  for (const auto& [l, c] : counts) {
    const double f = static_cast<double>(c) / labels.size();
    g -= f * f;
  }
  return g;
}

void oracle_cuts(std::vector<std::pair<double, int>> pts, std::vector<double>& cuts) {
  std::sort(pts.begin(), pts.end());
  std::vector<int> labels;
  for (const auto& [x, l] : pts) labels.push_back(l);
  if (std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; })) return;

  const double parent = oracle_gini(labels);
  double best_dec = 0.0;
  std::size_t best_i = 0;
  double best_cut = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first == pts[i - 1].first) continue;
    std::vector<int> left(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(i));
    std::vector<int> right(labels.begin() + static_cast<std::ptrdiff_t>(i), labels.end());
    const double dec = parent - (left.size() * oracle_gini(left) +
                                 right.size() * oracle_gini(right)) /
                                    labels.size();
    if (dec > best_dec + 1e-12) {
      best_dec = dec;
      best_i = i;
      best_cut = 0.5 * (pts[i - 1].first + pts[i].first);
    }
  }
  if (best_dec <= 0.0) return;
  std::vector<std::pair<double, int>> left(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(best_i));
  std::vector<std::pair<double, int>> right(pts.begin() + static_cast<std::ptrdiff_t>(best_i), pts.end());
  oracle_cuts(left, cuts);
  cuts.push_back(best_cut);
  oracle_cuts(right, cuts);
}

// Interval-separable instance: k contiguous bands of x values.
void make_separable(std::uint64_t seed, int k, std::vector<double>& x, std::vector<int>& labels) {
  testutil::Rng rng(seed);
  x.clear();
  labels.clear();
  double base = 0.0;
  for (int r = 0; r < k; ++r) {
    const int n = 3 + static_cast<int>(rng.uniform_index(8));
    for (int i = 0; i < n; ++i) {
      x.push_back(base + rng.uniform(0.0, 8.0));
      labels.push_back(r);
    }
    base += 10.0;
  }
}

}  // namespace

TEST_CASE("thresholds match the exhaustive Gini oracle on separable data") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int k = 2 + static_cast<int>(seed % 3);
    std::vector<double> x;
    std::vector<int> labels;
    make_separable(seed * 13, k, x, labels);

    const ThresholdFit fit = fit_thresholds(x, labels, k);
    REQUIRE(static_cast<int>(fit.thresholds.size()) == k - 1);
    CHECK(fit.purity == 1.0);

    std::vector<std::pair<double, int>> pts;
    for (std::size_t i = 0; i < x.size(); ++i) pts.emplace_back(x[i], labels[i]);
    std::vector<double> expect;
    oracle_cuts(pts, expect);
    REQUIRE(expect.size() == fit.thresholds.size());
    for (std::size_t i = 0; i < expect.size(); ++i)
      CHECK(fit.thresholds.cuts[i] == expect[i]);

    // Every observation falls inside its regime's half-open interval.
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(fit.thresholds.classify(x[i]) == labels[i]);
  }
}

TEST_CASE("cuts are strictly ascending midpoints") {
  std::vector<double> x{1.0, 2.0, 10.0, 11.0, 50.0, 60.0};
  std::vector<int> labels{0, 0, 1, 1, 2, 2};
  const ThresholdFit fit = fit_thresholds(x, labels, 3);
  REQUIRE(fit.thresholds.size() == 2);
  CHECK(fit.thresholds.cuts[0] == Catch::Approx(6.0));
  CHECK(fit.thresholds.cuts[1] == Catch::Approx(30.5));
  CHECK(fit.thresholds.cuts[0] < fit.thresholds.cuts[1]);
}

TEST_CASE("equal impurity decreases prefer the smallest cut") {
  // Palindromic labels: cutting at 0.5 or at 2.5 gives the same decrease,
  // so the root must take the smaller candidate.
  std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  std::vector<int> labels{0, 1, 1, 0};
  const ThresholdFit fit = fit_thresholds(x, labels, 2);
  REQUIRE(fit.root != nullptr);
  REQUIRE_FALSE(fit.root->is_leaf);
  CHECK(fit.root->cut == Catch::Approx(0.5));

  // A clean boundary still lands on the midpoint between the classes.
  const ThresholdFit clean = fit_thresholds(x, {0, 0, 1, 1}, 2);
  REQUIRE(clean.thresholds.size() == 1);
  CHECK(clean.thresholds.cuts[0] == Catch::Approx(1.5));
}

TEST_CASE("single regime yields no thresholds") {
  std::vector<double> x{1.0, 2.0, 3.0};
  std::vector<int> labels{0, 0, 0};
  const ThresholdFit fit = fit_thresholds(x, labels, 1);
  CHECK(fit.thresholds.empty());
  CHECK(fit.purity == 1.0);
}

TEST_CASE("overlapping labels fall back to pooled binary splits") {
  // Class 1 interleaves class 0 at one point: no pure partition exists, but
  // pooled {<r} vs {>=r} boundaries still order correctly.
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  std::vector<int> labels{0, 0, 1, 0, 1, 1, 2, 2};
  const ThresholdFit fit = fit_thresholds(x, labels, 3);
  REQUIRE(fit.thresholds.size() == 2);
  CHECK(fit.thresholds.cuts[0] < fit.thresholds.cuts[1]);
  CHECK(fit.purity < 1.0);
  CHECK(fit.purity >= 0.7);
}

TEST_CASE("input validation") {
  std::vector<double> x{1.0, 2.0};
  std::vector<int> labels{0, 1};
  CHECK_THROWS_AS(fit_thresholds(x, {0}, 2), config_error);
  CHECK_THROWS_AS(fit_thresholds({1.0, 1.0}, labels, 2), data_error);
  CHECK_THROWS_AS(fit_thresholds(x, {0, 3}, 2), config_error);
}
