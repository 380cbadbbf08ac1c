#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "regimes/kmeans.hpp"
#include "regimes/validation.hpp"

using namespace regimes;
using testutil::Rng;

namespace {

double point_dist(const Eigen::MatrixXd& X, int i, int j) {
  double ss = 0.0;
  for (int c = 0; c < X.cols(); ++c) {
    const double d = X(i, c) - X(j, c);
    ss += d * d;
  }
  return std::sqrt(ss);
}

// Double-loop silhouette oracle computing its own distances.
std::vector<double> oracle_silhouette(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                      int k) {
  const int T = static_cast<int>(X.rows());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  std::vector<double> s(static_cast<std::size_t>(T), 0.0);
  for (int i = 0; i < T; ++i) {
    const int own = labels[static_cast<std::size_t>(i)];
    if (sizes[static_cast<std::size_t>(own)] == 1) continue;
    double a = 0.0;
    for (int j = 0; j < T; ++j)
      if (j != i && labels[static_cast<std::size_t>(j)] == own) a += point_dist(X, i, j);
    a /= sizes[static_cast<std::size_t>(own)] - 1;
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      double m = 0.0;
      for (int j = 0; j < T; ++j)
        if (labels[static_cast<std::size_t>(j)] == c) m += point_dist(X, i, j);
      b = std::min(b, m / sizes[static_cast<std::size_t>(c)]);
    }
    s[static_cast<std::size_t>(i)] = (b - a) / std::max(a, b);
  }
  return s;
}

// Pooled two-sample t statistic.
double pooled_t(const std::vector<double>& g1, const std::vector<double>& g2) {
  const double n1 = static_cast<double>(g1.size()), n2 = static_cast<double>(g2.size());
  const double m1 = mean_of(g1), m2 = mean_of(g2);
  double ss = 0.0;
  for (double v : g1) ss += (v - m1) * (v - m1);
  for (double v : g2) ss += (v - m2) * (v - m2);
  const double pooled = ss / (n1 + n2 - 2.0);
  return (m1 - m2) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
}

// Groups of `n` observations at `mean` with a +/-1 alternating pattern times
// `noise`, so group means are exact when n is even.
void append_group(std::vector<double>& x, std::vector<int>& labels, int g, int n, double mean,
                  double noise) {
  for (int i = 0; i < n; ++i) {
    x.push_back(mean + (i % 2 == 0 ? noise : -noise));
    labels.push_back(g);
  }
}

bool share_letter(const std::string& a, const std::string& b) {
  return a.find_first_of(b) != std::string::npos;
}

}  // namespace

TEST_CASE("silhouette matches a brute-force oracle") {
  Rng rng(4451);
  for (int rep = 0; rep < 50; ++rep) {
    const int T = 8 + static_cast<int>(rng.uniform01() * 33);
    const int k = 2 + static_cast<int>(rng.uniform01() * 3) % 3;
    Eigen::MatrixXd X(T, 2);
    for (int i = 0; i < T; ++i)
      for (int j = 0; j < 2; ++j) X(i, j) = rng.normal() * 3.0;
    std::vector<int> labels(static_cast<std::size_t>(T));
    for (int i = 0; i < T; ++i)
      labels[static_cast<std::size_t>(i)] = i < k ? i : static_cast<int>(rng.uniform01() * k) % k;

    const DissimMatrix D = euclidean_matrix(X);
    const SilhouetteResult res = silhouette(D, labels, k);
    const std::vector<double> expect = oracle_silhouette(X, labels, k);
    REQUIRE(res.values.size() == expect.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(res.values[i] == Catch::Approx(expect[i]).margin(1e-10));
      CHECK(res.values[i] >= -1.0);
      CHECK(res.values[i] <= 1.0);
      sum += res.values[i];
    }
    CHECK(res.mean == Catch::Approx(sum / static_cast<double>(T)).margin(1e-12));
  }
}

TEST_CASE("silhouette geometry") {
  SECTION("two far-apart tight pairs score near 1") {
    Eigen::MatrixXd X(4, 2);
    X << 0.0, 0.0, 0.0, 0.1, 10.0, 0.0, 10.0, 0.1;
    const SilhouetteResult res = silhouette(euclidean_matrix(X), {0, 0, 1, 1}, 2);
    for (double v : res.values) CHECK(v > 0.9);
  }
  SECTION("a point equidistant between clusters scores 0") {
    Eigen::MatrixXd X(5, 2);
    X << 0.0, 0.0, 0.0, 2.0, 4.0, 0.0, 4.0, 2.0, 2.0, 1.0;
    const SilhouetteResult res = silhouette(euclidean_matrix(X), {0, 0, 1, 1, 0}, 2);
    CHECK(res.values[4] == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("singleton clusters score exactly 0") {
    Eigen::MatrixXd X(4, 1);
    X << 0.0, 0.5, 1.0, 50.0;
    const SilhouetteResult res = silhouette(euclidean_matrix(X), {0, 0, 0, 1}, 2);
    CHECK(res.values[3] == 0.0);
  }
}

TEST_CASE("silhouette argument validation") {
  Eigen::MatrixXd X(4, 1);
  X << 0.0, 1.0, 2.0, 3.0;
  const DissimMatrix D = euclidean_matrix(X);
  CHECK_THROWS_AS(silhouette(D, {0, 0, 0, 0}, 1), config_error);
  CHECK_THROWS_AS(silhouette(D, {0, 0, 1, 1}, 3), data_error);
  CHECK_THROWS_AS(silhouette(D, {0, 0, 1}, 2), config_error);
  CHECK_THROWS_AS(silhouette(D, {0, 0, 1, 2}, 2), config_error);
}

TEST_CASE("anova decomposition identities") {
  Rng rng(7081);
  for (int rep = 0; rep < 20; ++rep) {
    const int k = 2 + rep % 3;
    std::vector<double> x;
    std::vector<int> labels;
    for (int g = 0; g < k; ++g) {
      const int n = 3 + static_cast<int>(rng.uniform01() * 10);
      for (int i = 0; i < n; ++i) {
        x.push_back(g * 1.5 + rng.normal());
        labels.push_back(g);
      }
    }
    const AnovaTable a = anova_oneway(x, labels, k);
    const double grand = mean_of(x);
    double total = 0.0;
    for (double v : x) total += (v - grand) * (v - grand);
    CHECK(a.ss_between + a.ss_within == Catch::Approx(total).epsilon(1e-9));
    CHECK(a.df_between == k - 1);
    CHECK(a.df_within == static_cast<int>(x.size()) - k);
    CHECK(a.ms_between == Catch::Approx(a.ss_between / a.df_between));
    CHECK(a.ms_within == Catch::Approx(a.ss_within / a.df_within));
    CHECK(a.F == Catch::Approx(a.ms_between / a.ms_within));
    CHECK(a.p_value >= 0.0);
    CHECK(a.p_value <= 1.0);
  }
}

TEST_CASE("anova flat data edge") {
  const std::vector<double> x(9, 3.25);
  const std::vector<int> labels{0, 0, 0, 1, 1, 1, 2, 2, 2};
  const AnovaTable a = anova_oneway(x, labels, 3);
  CHECK(a.F == 0.0);
  CHECK(a.p_value == 1.0);
}

TEST_CASE("anova reproduces the published decomposition") {
  // Four regimes, 959 observations: between SS 8.50 on 3 df against within
  // SS 1.62 on 955 df gives F near 1670, i.e. the published 1667.40 up to
  // rounding of the printed sums of squares.
  const std::vector<int> sizes{239, 240, 240, 240};
  const int T = 959;

  // Group offsets 0,1,2,3 scaled so the between SS is exactly 8.50.
  std::vector<double> offsets{0.0, 1.0, 2.0, 3.0};
  double weighted = 0.0;
  for (int g = 0; g < 4; ++g) weighted += sizes[static_cast<std::size_t>(g)] * offsets[static_cast<std::size_t>(g)];
  const double grand_offset = weighted / T;
  double raw_between = 0.0;
  for (int g = 0; g < 4; ++g) {
    const double d = offsets[static_cast<std::size_t>(g)] - grand_offset;
    raw_between += sizes[static_cast<std::size_t>(g)] * d * d;
  }
  const double scale = std::sqrt(8.50 / raw_between);

  std::vector<double> x;
  std::vector<int> labels;
  for (int g = 0; g < 4; ++g) {
    const int n = sizes[static_cast<std::size_t>(g)];
    const int pairs = n / 2;
    // Each +/-delta pair adds 2*delta^2 of within SS; odd sizes park one
    // observation at the group mean.
    const double delta = std::sqrt((1.62 / 4.0) / (2.0 * pairs));
    const double mean = scale * offsets[static_cast<std::size_t>(g)];
    for (int i = 0; i < pairs; ++i) {
      x.push_back(mean + delta);
      x.push_back(mean - delta);
      labels.insert(labels.end(), {g, g});
    }
    if (n % 2 == 1) {
      x.push_back(mean);
      labels.push_back(g);
    }
  }

  const AnovaTable a = anova_oneway(x, labels, 4);
  CHECK(a.df_between == 3);
  CHECK(a.df_within == 955);
  CHECK(a.ss_between == Catch::Approx(8.50).epsilon(1e-9));
  CHECK(a.ss_within == Catch::Approx(1.62).epsilon(1e-9));
  const double expected_f = (8.50 / 3.0) / (1.62 / 955.0);
  CHECK(a.F == Catch::Approx(expected_f).epsilon(1e-9));
  CHECK(std::fabs(a.F - 1667.40) / 1667.40 < 0.005);
  CHECK(a.p_value < 1e-100);
}

TEST_CASE("two-group F equals the squared pooled t statistic") {
  Rng rng(90210);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> g1, g2;
    const int n1 = 3 + static_cast<int>(rng.uniform01() * 28);
    const int n2 = 3 + static_cast<int>(rng.uniform01() * 28);
    for (int i = 0; i < n1; ++i) g1.push_back(rng.normal());
    for (int i = 0; i < n2; ++i) g2.push_back(0.4 + rng.normal());

    std::vector<double> x = g1;
    x.insert(x.end(), g2.begin(), g2.end());
    std::vector<int> labels(static_cast<std::size_t>(n1), 0);
    labels.insert(labels.end(), static_cast<std::size_t>(n2), 1);

    const AnovaTable a = anova_oneway(x, labels, 2);
    const double t = pooled_t(g1, g2);
    CHECK(a.F == Catch::Approx(t * t).epsilon(1e-9));
    CHECK(a.p_value == Catch::Approx(t_two_sided_p(t, n1 + n2 - 2)).epsilon(1e-9));
  }
}

TEST_CASE("anova argument validation") {
  CHECK_THROWS_AS(anova_oneway({1.0, 2.0, 3.0}, {0, 1}, 2), config_error);
  CHECK_THROWS_AS(anova_oneway({1.0, 2.0, 3.0}, {0, 0, 0}, 1), config_error);
  CHECK_THROWS_AS(anova_oneway({1.0, 2.0}, {0, 1}, 2), config_error);
  CHECK_THROWS_AS(anova_oneway({1.0, 2.0, 3.0, 4.0}, {0, 0, 0, 0}, 2), data_error);
  CHECK_THROWS_AS(anova_oneway({1.0, 2.0, 3.0}, {0, 0, 5}, 2), config_error);
}

TEST_CASE("fisher letters separate well-spaced groups") {
  std::vector<double> x;
  std::vector<int> labels;
  for (int g = 0; g < 4; ++g) append_group(x, labels, g, 12, 10.0 * g, 0.5);
  const GroupLetters out = fisher_lsd(x, labels, 4, 0.01);
  CHECK(out.letters == std::vector<std::string>{"a", "b", "c", "d"});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(out.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == (i != j));
  CHECK(out.alpha == 0.01);
}

TEST_CASE("identical groups share a letter") {
  std::vector<double> x;
  std::vector<int> labels;
  append_group(x, labels, 0, 8, 5.0, 1.0);
  append_group(x, labels, 1, 8, 5.0, 1.0);
  CHECK(fisher_lsd(x, labels, 2, 0.05).letters == std::vector<std::string>{"a", "a"});
  CHECK(tukey_hsd(x, labels, 2, 0.05).letters == std::vector<std::string>{"a", "a"});
}

TEST_CASE("three groups where only the extremes differ") {
  // ms_within ~ 30/27; adjacent |t| = 1.5 stays below t_{.975,27} = 2.05
  // while the extreme pair reaches 3.0.
  const double ms = 30.0 / 27.0;
  const double se = std::sqrt(ms * 0.2);
  const double d = 1.5 * se;
  std::vector<double> x;
  std::vector<int> labels;
  for (int g = 0; g < 3; ++g) append_group(x, labels, g, 10, d * g, 1.0);
  const GroupLetters out = fisher_lsd(x, labels, 3, 0.05);
  CHECK(out.letters == std::vector<std::string>{"a", "ab", "b"});
}

TEST_CASE("tukey is more conservative than fisher") {
  SECTION("borderline pair separated only by fisher") {
    // Adjacent |t| = 2.2 clears t_{.975,27} = 2.05 but not q_{.95,3,27}/sqrt2
    // = 2.48; the extreme pair at 4.4 clears both.
    const double ms = 30.0 / 27.0;
    const double se = std::sqrt(ms * 0.2);
    const double d = 2.2 * se;
    std::vector<double> x;
    std::vector<int> labels;
    for (int g = 0; g < 3; ++g) append_group(x, labels, g, 10, d * g, 1.0);
    CHECK(fisher_lsd(x, labels, 3, 0.05).letters ==
          std::vector<std::string>{"a", "b", "c"});
    CHECK(tukey_hsd(x, labels, 3, 0.05).letters ==
          std::vector<std::string>{"a", "ab", "b"});
  }
  SECTION("pairwise conservativeness on random groupings") {
    Rng rng(3131);
    for (int rep = 0; rep < 15; ++rep) {
      const int k = 3 + rep % 3;
      std::vector<double> x;
      std::vector<int> labels;
      for (int g = 0; g < k; ++g) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 8);
        for (int i = 0; i < n; ++i) {
          x.push_back(0.8 * g + rng.normal());
          labels.push_back(g);
        }
      }
      const GroupLetters f = fisher_lsd(x, labels, k, 0.05);
      const GroupLetters t = tukey_hsd(x, labels, k, 0.05);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (t.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
            CHECK(f.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
}

TEST_CASE("letters encode exactly the significance graph") {
  Rng rng(8888);
  for (int rep = 0; rep < 15; ++rep) {
    const int k = 3 + rep % 3;
    std::vector<double> x;
    std::vector<int> labels;
    for (int g = 0; g < k; ++g) {
      const int n = 4 + static_cast<int>(rng.uniform01() * 8);
      for (int i = 0; i < n; ++i) {
        x.push_back(1.1 * g + rng.normal());
        labels.push_back(g);
      }
    }
    for (const GroupLetters& out :
         {fisher_lsd(x, labels, k, 0.05), tukey_hsd(x, labels, k, 0.05)}) {
      for (int i = 0; i < k; ++i) {
        CHECK_FALSE(out.letters[static_cast<std::size_t>(i)].empty());
        for (int j = i + 1; j < k; ++j) {
          const bool share = share_letter(out.letters[static_cast<std::size_t>(i)],
                                          out.letters[static_cast<std::size_t>(j)]);
          CHECK(share ==
                !out.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
      }
    }
  }
}

TEST_CASE("post-hoc argument validation") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<int> labels{0, 0, 0, 1, 1, 1};
  CHECK_THROWS_AS(fisher_lsd(x, labels, 2, 0.0), config_error);
  CHECK_THROWS_AS(fisher_lsd(x, labels, 2, 1.0), config_error);
  CHECK_THROWS_AS(tukey_hsd(x, labels, 2, -0.1), config_error);
}

TEST_CASE("four tight blobs validate cleanly end to end") {
  std::vector<int> truth;
  const Eigen::MatrixXd X =
      testutil::make_blobs({{3.0}, {10.0}, {30.0}, {90.0}}, {15, 15, 15, 15}, 0.4, 5150, &truth);
  const RegimeAssignment a = order_regimes(kmeans(X, 4, 10, 99), X);
  CHECK(testutil::adjusted_rand_index(truth, a.cluster_of) == 1.0);

  const SilhouetteResult sil = silhouette(euclidean_matrix(X), a);
  for (double v : sil.values) CHECK(v >= 0.0);
  CHECK(sil.mean > 0.7);

  std::vector<double> x0(static_cast<std::size_t>(X.rows()));
  for (int i = 0; i < X.rows(); ++i) x0[static_cast<std::size_t>(i)] = X(i, 0);
  const AnovaTable table = anova_oneway(x0, a);
  CHECK(table.p_value < 1e-12);
  CHECK(fisher_lsd(x0, a, 0.01).letters == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(tukey_hsd(x0, a, 0.01).letters == std::vector<std::string>{"a", "b", "c", "d"});
}
