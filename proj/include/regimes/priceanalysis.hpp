#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "regimes/core.hpp"
#include "regimes/stats.hpp"

namespace regimes {

struct VprSeries {
  std::vector<double> vpr;       // nonnegative
  std::vector<double> headline;  // pi_t, fractions
};

/// Relative-price variability: VPR_t = sum_i w_it (pi_it - pi_t)^2 / (1+pi_t)^2.
/// Inflation enters as fractions; percent inputs must be divided by 100 first.
inline VprSeries vpr(const Eigen::MatrixXd& weights, const Eigen::MatrixXd& sector_inflation,
                     const std::vector<double>& headline) {
  const Eigen::Index T = weights.rows(), S = weights.cols();
  if (sector_inflation.rows() != T || sector_inflation.cols() != S ||
      static_cast<Eigen::Index>(headline.size()) != T)
    throw config_error("weights, sector inflation and headline dimensions disagree");
  if (S < 1 || T < 1) throw config_error("empty sector matrix");

  VprSeries out;
  out.headline = headline;
  out.vpr.resize(static_cast<std::size_t>(T));
  for (Eigen::Index t = 0; t < T; ++t) {
    double wsum = 0.0;
    double num = 0.0;
    const double pi = headline[static_cast<std::size_t>(t)];
    if (pi == -1.0) throw data_error("headline inflation of -1 at row " + std::to_string(t + 1));
    for (Eigen::Index i = 0; i < S; ++i) {
      const double w = weights(t, i);
      if (w < 0.0) throw data_error("negative weight at row " + std::to_string(t + 1));
      wsum += w;
      const double dev = sector_inflation(t, i) - pi;
      num += w * dev * dev;
    }
    if (std::fabs(wsum - 1.0) > 1e-6)
      throw data_error("weights at row " + std::to_string(t + 1) + " sum to " +
                       detail::fmt_double(wsum) + ", not 1");
    out.vpr[static_cast<std::size_t>(t)] = num / ((1.0 + pi) * (1.0 + pi));
  }
  return out;
}

struct RegimeRegression {
  std::vector<std::string> names;  // coefficient names, intercept first
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd t_stat;
  Eigen::VectorXd p_value;
  std::vector<std::string> dropped;  // collinear columns removed with a note
  double ssr = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double rmse = 0.0;
  int n = 0;
  int n_params = 0;
};

/// OLS of y on intercept + x + regime dummies + dummy*x interactions,
/// with regime 0 the baseline. A regime with fewer than two distinct x
/// values cannot identify its own slope; that interaction is dropped and
/// recorded. Regimes absent from `labels` drop both columns.
inline RegimeRegression regime_regression(const std::vector<double>& y,
                                          const std::vector<double>& x,
                                          const std::vector<int>& labels, int k,
                                          const std::vector<std::string>& regime_names = {}) {
  const int n = static_cast<int>(y.size());
  if (x.size() != y.size() || labels.size() != y.size())
    throw config_error("series lengths disagree");
  if (k < 1) throw config_error("k must be >= 1");
  for (int l : labels)
    if (l < 0 || l >= k) throw config_error("label outside 0..k-1");

  std::vector<std::string> rn = regime_names;
  if (rn.empty()) rn = default_regime_names(k);

  RegimeRegression out;
  out.n = n;
  out.names = {"intercept", "x"};
  std::vector<std::vector<double>> cols;  // beyond intercept and x
  for (int r = 1; r < k; ++r) {
    std::set<double> distinct;
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == r) {
        distinct.insert(x[static_cast<std::size_t>(i)]);
        ++count;
      }
    if (count == 0) {
      out.dropped.push_back("dummy:" + rn[static_cast<std::size_t>(r)] + " (regime absent)");
      out.dropped.push_back("dummy_x:" + rn[static_cast<std::size_t>(r)] + " (regime absent)");
      continue;
    }
    std::vector<double> dummy(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == r) dummy[static_cast<std::size_t>(i)] = 1.0;
    out.names.push_back("dummy:" + rn[static_cast<std::size_t>(r)]);
    cols.push_back(dummy);
    if (distinct.size() < 2) {
      out.dropped.push_back("dummy_x:" + rn[static_cast<std::size_t>(r)] +
                            " (fewer than two distinct x values)");
      continue;
    }
    std::vector<double> inter(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == r)
        inter[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    out.names.push_back("dummy_x:" + rn[static_cast<std::size_t>(r)]);
    cols.push_back(inter);
  }

  const int p = 2 + static_cast<int>(cols.size());
  if (n <= p) throw data_error("not enough observations for " + std::to_string(p) + " coefficients");
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    Y[i] = y[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = x[static_cast<std::size_t>(i)];
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
      X(i, 2 + c) = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) throw numerical_error("design matrix rank-deficient beyond droppable columns");
  out.beta = qr.solve(Y);
  const Eigen::VectorXd resid = Y - X * out.beta;
  out.ssr = resid.squaredNorm();
  out.n_params = p;

  const double ybar = Y.mean();
  const double sst = (Y.array() - ybar).square().sum();
  if (sst <= 0.0) throw data_error("response has zero variance");
  out.r2 = 1.0 - out.ssr / sst;
  out.adj_r2 = 1.0 - (1.0 - out.r2) * (n - 1.0) / (n - p);
  out.loglik = -0.5 * n * (std::log(2.0 * M_PI) + std::log(out.ssr / n) + 1.0);
  out.aic = -2.0 * out.loglik + 2.0 * (p + 1);
  out.bic = -2.0 * out.loglik + std::log(static_cast<double>(n)) * (p + 1);
  out.rmse = std::sqrt(out.ssr / (n - p));

  const Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  const double sigma2 = out.ssr / (n - p);
  out.se.resize(p);
  out.t_stat.resize(p);
  out.p_value.resize(p);
  for (int j = 0; j < p; ++j) {
    out.se[j] = std::sqrt(sigma2 * xtx_inv(j, j));
    if (out.se[j] > 0.0) {
      out.t_stat[j] = out.beta[j] / out.se[j];
      out.p_value[j] = t_two_sided_p(out.t_stat[j], n - p);
    } else {
      out.t_stat[j] = out.beta[j] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      out.p_value[j] = out.beta[j] == 0.0 ? 1.0 : 0.0;
    }
  }
  return out;
}

struct ChowTest {
  double F = 0.0;
  double p = 1.0;
  int q = 0;    // restrictions
  int df2 = 0;  // n - k_full
};

/// Chow structural-stability F test of a restricted (pooled) model against
/// the full regime-interaction model fit on the same observations.
inline ChowTest chow_test(const RegimeRegression& restricted, const RegimeRegression& full) {
  if (restricted.n != full.n) throw data_error("models fit on different observation counts");
  for (const auto& nm : restricted.names)
    if (std::find(full.names.begin(), full.names.end(), nm) == full.names.end())
      throw data_error("restricted model not nested in full model");
  ChowTest t;
  t.q = full.n_params - restricted.n_params;
  t.df2 = full.n - full.n_params;
  if (t.q < 0) throw data_error("restricted model has more coefficients than full model");
  if (restricted.ssr < full.ssr - 1e-9 * (1.0 + full.ssr))
    throw data_error("restricted SSR below full SSR: models not nested");
  if (t.q == 0) return t;  // identical specifications: F = 0, p = 1
  t.F = std::max(0.0, (restricted.ssr - full.ssr) / t.q / (full.ssr / t.df2));
  t.p = f_upper_tail(t.F, t.q, t.df2);
  return t;
}

}  // namespace regimes
