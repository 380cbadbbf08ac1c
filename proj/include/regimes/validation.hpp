#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "regimes/dct.hpp"
#include "regimes/stats.hpp"

namespace regimes {

struct SilhouetteResult {
  std::vector<double> values;  // per observation, in [-1, 1]
  double mean = 0.0;
};

/// Silhouette widths s(i) = (b - a) / max(a, b) over an arbitrary
/// dissimilarity matrix. Singletons score 0.
inline SilhouetteResult silhouette(const DissimMatrix& D, const std::vector<int>& labels, int k) {
  const Eigen::Index T = D.size();
  if (static_cast<std::size_t>(T) != labels.size())
    throw config_error("label length does not match dissimilarity matrix");
  if (k < 2) throw config_error("silhouette needs k >= 2");

  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l < 0 || l >= k) throw config_error("label outside 0..k-1");
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < k; ++c)
    if (sizes[static_cast<std::size_t>(c)] == 0)
      throw data_error("cluster " + std::to_string(c) + " is empty");

  SilhouetteResult res;
  res.values.resize(static_cast<std::size_t>(T));
  for (Eigen::Index i = 0; i < T; ++i) {
    const int own = labels[static_cast<std::size_t>(i)];
    if (sizes[static_cast<std::size_t>(own)] == 1) {
      res.values[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index j = 0; j < T; ++j)
      if (j != i) sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] += D.d(i, j);
    const double a = sum[static_cast<std::size_t>(own)] /
                     static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, sum[static_cast<std::size_t>(c)] /
                          static_cast<double>(sizes[static_cast<std::size_t>(c)]));
    }
    const double denom = std::max(a, b);
    res.values[static_cast<std::size_t>(i)] = denom > 0 ? (b - a) / denom : 0.0;
  }
  res.mean = std::accumulate(res.values.begin(), res.values.end(), 0.0) /
             static_cast<double>(T);
  return res;
}

struct AnovaTable {
  int df_between = 0;
  int df_within = 0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  double F = 0.0;
  double p_value = 1.0;
};

/// One-way ANOVA of x grouped by labels 0..k-1.
inline AnovaTable anova_oneway(const std::vector<double>& x, const std::vector<int>& labels,
                               int k) {
  if (x.size() != labels.size()) throw config_error("value/label length mismatch");
  const int T = static_cast<int>(x.size());
  if (k < 2) throw config_error("ANOVA needs k >= 2");
  if (T <= k) throw config_error("ANOVA needs more observations than groups");

  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  std::vector<int> n(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < T; ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l < 0 || l >= k) throw config_error("label outside 0..k-1");
    sum[static_cast<std::size_t>(l)] += x[static_cast<std::size_t>(i)];
    ++n[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < k; ++c)
    if (n[static_cast<std::size_t>(c)] == 0)
      throw data_error("group " + std::to_string(c) + " has no observations");

  const double grand = std::accumulate(x.begin(), x.end(), 0.0) / T;
  AnovaTable a;
  a.df_between = k - 1;
  a.df_within = T - k;
  for (int c = 0; c < k; ++c) {
    const double m = sum[static_cast<std::size_t>(c)] / n[static_cast<std::size_t>(c)];
    a.ss_between += n[static_cast<std::size_t>(c)] * (m - grand) * (m - grand);
  }
  for (int i = 0; i < T; ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    const double m = sum[static_cast<std::size_t>(l)] / n[static_cast<std::size_t>(l)];
    a.ss_within += (x[static_cast<std::size_t>(i)] - m) * (x[static_cast<std::size_t>(i)] - m);
  }
  a.ms_between = a.ss_between / a.df_between;
  a.ms_within = a.ss_within / a.df_within;
  if (a.ss_between == 0.0) {
    a.F = 0.0;
    a.p_value = 1.0;
  } else if (a.ms_within == 0.0) {
    a.F = std::numeric_limits<double>::infinity();
    a.p_value = 0.0;
  } else {
    a.F = a.ms_between / a.ms_within;
    a.p_value = f_upper_tail(a.F, a.df_between, a.df_within);
  }
  return a;
}

/// Compact letter display: two regimes share a letter iff their mean
/// difference is NOT significant under the chosen test.
struct GroupLetters {
  std::vector<std::string> letters;  // per group 0..k-1
  double alpha = 0.0;
  // significant[i][j]: the test separates groups i and j.
  std::vector<std::vector<bool>> significant;
};

namespace detail {

struct GroupStats {
  std::vector<double> mean;
  std::vector<int> n;
  double ms_within;
  int df_within;
};

inline GroupStats group_stats(const std::vector<double>& x, const std::vector<int>& labels,
                              int k) {
  GroupStats g;
  g.mean.assign(static_cast<std::size_t>(k), 0.0);
  g.n.assign(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    g.mean[static_cast<std::size_t>(labels[i])] += x[i];
    ++g.n[static_cast<std::size_t>(labels[i])];
  }
  for (int c = 0; c < k; ++c) g.mean[static_cast<std::size_t>(c)] /= g.n[static_cast<std::size_t>(c)];
  const AnovaTable a = anova_oneway(x, labels, k);
  g.ms_within = a.ms_within;
  g.df_within = a.df_within;
  return g;
}

// Insert-and-absorb procedure over the significance graph. Deterministic:
// pairs are processed in mean order and columns are lettered by their
// lowest-mean member.
inline std::vector<std::string> letters_from_significance(
    const std::vector<std::vector<bool>>& significant, const std::vector<double>& means) {
  const int k = static_cast<int>(means.size());
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (means[static_cast<std::size_t>(a)] != means[static_cast<std::size_t>(b)])
      return means[static_cast<std::size_t>(a)] < means[static_cast<std::size_t>(b)];
    return a < b;
  });

  std::vector<std::set<int>> columns{std::set<int>(order.begin(), order.end())};
  auto absorb = [&]() {
    std::vector<std::set<int>> kept;
    for (const auto& c : columns) {
      bool subset = false;
      for (const auto& other : columns) {
        if (&other == &c || other.size() < c.size()) continue;
        if (other == c && &other < &c) { subset = true; break; }
        if (other != c && std::includes(other.begin(), other.end(), c.begin(), c.end())) {
          subset = true;
          break;
        }
      }
      if (!subset && std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
    }
    columns = std::move(kept);
  };

  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const int i = order[static_cast<std::size_t>(a)];
      const int j = order[static_cast<std::size_t>(b)];
      if (!significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
      std::vector<std::set<int>> next;
      for (const auto& c : columns) {
        if (c.count(i) && c.count(j)) {
          std::set<int> without_i = c, without_j = c;
          without_i.erase(i);
          without_j.erase(j);
          next.push_back(std::move(without_i));
          next.push_back(std::move(without_j));
        } else {
          next.push_back(c);
        }
      }
      columns = std::move(next);
      absorb();
    }
  }

  // Letter columns sorted by the mean-rank of their lowest member.
  std::vector<int> rank(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
  std::sort(columns.begin(), columns.end(), [&](const std::set<int>& a, const std::set<int>& b) {
    int ra = k, rb = k;
    for (int g : a) ra = std::min(ra, rank[static_cast<std::size_t>(g)]);
    for (int g : b) rb = std::min(rb, rank[static_cast<std::size_t>(g)]);
    return ra < rb;
  });

  std::vector<std::string> letters(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const char letter = static_cast<char>('a' + (c % 26));
    for (int g : columns[c]) letters[static_cast<std::size_t>(g)] += letter;
  }
  return letters;
}

}  // namespace detail

/// Fisher least-significant-difference grouping: pairwise t tests with the
/// pooled ANOVA variance at per-comparison level alpha.
inline GroupLetters fisher_lsd(const std::vector<double>& x, const std::vector<int>& labels,
                               int k, double alpha) {
  if (alpha <= 0 || alpha >= 1) throw config_error("alpha must be in (0,1)");
  const detail::GroupStats g = detail::group_stats(x, labels, k);
  GroupLetters out;
  out.alpha = alpha;
  out.significant.assign(static_cast<std::size_t>(k),
                         std::vector<bool>(static_cast<std::size_t>(k), false));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double diff = g.mean[static_cast<std::size_t>(i)] - g.mean[static_cast<std::size_t>(j)];
      const double se = std::sqrt(g.ms_within * (1.0 / g.n[static_cast<std::size_t>(i)] +
                                                 1.0 / g.n[static_cast<std::size_t>(j)]));
      double p;
      if (se == 0.0)
        p = diff == 0.0 ? 1.0 : 0.0;
      else
        p = t_two_sided_p(diff / se, g.df_within);
      const bool sig = p < alpha;
      out.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sig;
      out.significant[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = sig;
    }
  }
  out.letters = detail::letters_from_significance(out.significant, g.mean);
  return out;
}

inline SilhouetteResult silhouette(const DissimMatrix& D, const RegimeAssignment& a) {
  return silhouette(D, a.regime_of, a.k);
}

inline AnovaTable anova_oneway(const std::vector<double>& x, const RegimeAssignment& a) {
  return anova_oneway(x, a.regime_of, a.k);
}

/// Tukey honestly-significant-difference grouping: pairwise comparisons
/// against the studentized-range critical value (Tukey-Kramer spacing for
/// unequal group sizes), family-wise level alpha.
inline GroupLetters tukey_hsd(const std::vector<double>& x, const std::vector<int>& labels,
                              int k, double alpha) {
  if (alpha <= 0 || alpha >= 1) throw config_error("alpha must be in (0,1)");
  const detail::GroupStats g = detail::group_stats(x, labels, k);
  GroupLetters out;
  out.alpha = alpha;
  out.significant.assign(static_cast<std::size_t>(k),
                         std::vector<bool>(static_cast<std::size_t>(k), false));
  const double q_crit = studentized_range_quantile(1.0 - alpha, k, g.df_within);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double diff = std::fabs(g.mean[static_cast<std::size_t>(i)] -
                                    g.mean[static_cast<std::size_t>(j)]);
      const double se = std::sqrt(0.5 * g.ms_within * (1.0 / g.n[static_cast<std::size_t>(i)] +
                                                       1.0 / g.n[static_cast<std::size_t>(j)]));
      bool sig;
      if (se == 0.0)
        sig = diff != 0.0;
      else
        sig = diff / se > q_crit;
      out.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sig;
      out.significant[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = sig;
    }
  }
  out.letters = detail::letters_from_significance(out.significant, g.mean);
  return out;
}

inline GroupLetters fisher_lsd(const std::vector<double>& x, const RegimeAssignment& a,
                               double alpha) {
  return fisher_lsd(x, a.regime_of, a.k, alpha);
}

inline GroupLetters tukey_hsd(const std::vector<double>& x, const RegimeAssignment& a,
                              double alpha) {
  return tukey_hsd(x, a.regime_of, a.k, alpha);
}

}  // namespace regimes
