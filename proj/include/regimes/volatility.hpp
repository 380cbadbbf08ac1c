#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "regimes/core.hpp"
#include "regimes/stats.hpp"

namespace regimes {

struct LjungBoxResult {
  double q = 0.0;
  double p = 1.0;
  int lags = 0;
};

/// Ljung-Box portmanteau Q on a raw series.
inline LjungBoxResult ljung_box(const std::vector<double>& x, int lags) {
  const int n = static_cast<int>(x.size());
  if (lags < 1) throw config_error("lags must be >= 1");
  if (n <= lags) throw config_error("series too short for requested lags");
  const double m = mean_of(x);
  double denom = 0.0;
  for (double v : x) denom += (v - m) * (v - m);
  if (denom <= 0.0) throw data_error("degenerate series: zero variance");

  LjungBoxResult r;
  r.lags = lags;
  for (int j = 1; j <= lags; ++j) {
    double num = 0.0;
    for (int t = j; t < n; ++t) num += (x[static_cast<std::size_t>(t)] - m) *
                                       (x[static_cast<std::size_t>(t - j)] - m);
    const double rho = num / denom;
    r.q += rho * rho / (n - j);
  }
  r.q *= n * (n + 2.0);
  r.p = chi_squared_upper_tail(r.q, lags);
  return r;
}

struct ArchTestReport {
  double lm_stat = 0.0;
  double lm_p = 1.0;
  double q_stat = 0.0;
  double q_p = 1.0;
  int lags = 0;
  int n_aux = 0;
};

/// Engle's ARCH-LM test: squared residuals regressed on their own lags,
/// LM = n_aux * R^2 against chi-square(lags). Also reports the Ljung-Box
/// portmanteau on the squared residuals.
inline ArchTestReport arch_lm_test(const std::vector<double>& residuals, int lags) {
  const int T = static_cast<int>(residuals.size());
  if (lags < 1) throw config_error("lags must be >= 1");
  if (T <= lags + 1) throw config_error("series too short for requested lags");

  std::vector<double> e2(residuals.size());
  for (std::size_t i = 0; i < residuals.size(); ++i) e2[i] = residuals[i] * residuals[i];

  const int n = T - lags;
  Eigen::MatrixXd X(n, lags + 1);
  Eigen::VectorXd y(n);
  for (int t = 0; t < n; ++t) {
    y[t] = e2[static_cast<std::size_t>(t + lags)];
    X(t, 0) = 1.0;
    for (int j = 1; j <= lags; ++j) X(t, j) = e2[static_cast<std::size_t>(t + lags - j)];
  }
  const double ybar = y.mean();
  const double sst = (y.array() - ybar).square().sum();
  if (sst <= 0.0) throw data_error("degenerate regression: constant squared residuals");

  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  const double ssr = (y - X * beta).squaredNorm();
  const double r2 = 1.0 - ssr / sst;

  ArchTestReport rep;
  rep.lags = lags;
  rep.n_aux = n;
  rep.lm_stat = std::max(0.0, n * r2);
  rep.lm_p = chi_squared_upper_tail(rep.lm_stat, lags);
  const LjungBoxResult lb = ljung_box(e2, lags);
  rep.q_stat = lb.q;
  rep.q_p = lb.p;
  return rep;
}

struct GarchFit {
  double mu = 0.0;
  double omega = 0.0;
  double alpha1 = 0.0;
  double beta1 = 0.0;
  std::vector<double> cond_var;    // h_t, strictly positive
  std::vector<double> residuals;   // e_t = x_t - mu
  double loglik = 0.0;
  double aic_norm = 0.0;
  std::array<double, 4> std_errors{};  // mu, omega, alpha1, beta1
  double grad_norm = 0.0;          // transformed-space gradient at the optimum
  int n = 0;
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// theta = (mu, log omega, logit persistence, logit share);
// alpha = persistence * share, beta = persistence * (1 - share).
inline void garch_untransform(const std::array<double, 4>& theta, double& mu, double& omega,
                              double& alpha, double& beta) {
  mu = theta[0];
  omega = std::exp(theta[1]);
  const double pers = sigmoid(theta[2]);
  const double share = sigmoid(theta[3]);
  alpha = pers * share;
  beta = pers * (1.0 - share);
}

// Negative Gaussian conditional log-likelihood; +inf where invalid.
inline double garch_nll(const std::vector<double>& x, double h1, double mu, double omega,
                        double alpha, double beta) {
  if (!(omega > 0.0) || alpha < 0.0 || beta < 0.0 || alpha + beta >= 1.0)
    return std::numeric_limits<double>::infinity();
  constexpr double log2pi = 1.8378770664093454836;
  double h = h1;
  double nll = 0.0;
  double prev_e2 = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (t > 0) h = omega + alpha * prev_e2 + beta * h;
    if (!(h > 0.0) || !std::isfinite(h)) return std::numeric_limits<double>::infinity();
    const double e = x[t] - mu;
    nll += 0.5 * (log2pi + std::log(h) + e * e / h);
    prev_e2 = e * e;
  }
  return std::isfinite(nll) ? nll : std::numeric_limits<double>::infinity();
}

inline double garch_nll_t(const std::vector<double>& x, double h1,
                          const std::array<double, 4>& theta) {
  double mu, omega, alpha, beta;
  garch_untransform(theta, mu, omega, alpha, beta);
  return garch_nll(x, h1, mu, omega, alpha, beta);
}

/// Nelder-Mead minimizer over n=4 dimensions. Deterministic.
inline std::array<double, 4> nelder_mead4(const std::function<double(const std::array<double, 4>&)>& f,
                                          std::array<double, 4> start,
                                          const std::array<double, 4>& scale, int max_iter,
                                          double& fbest) {
  constexpr int n = 4;
  std::array<std::array<double, 4>, n + 1> pts;
  std::array<double, n + 1> fv;
  pts[0] = start;
  fv[0] = f(start);
  for (int i = 0; i < n; ++i) {
    pts[static_cast<std::size_t>(i + 1)] = start;
    pts[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)] += scale[static_cast<std::size_t>(i)];
    fv[static_cast<std::size_t>(i + 1)] = f(pts[static_cast<std::size_t>(i + 1)]);
  }
  auto order = [&]() {
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (fv[static_cast<std::size_t>(j)] < fv[static_cast<std::size_t>(i)]) {
          std::swap(fv[static_cast<std::size_t>(i)], fv[static_cast<std::size_t>(j)]);
          std::swap(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
        }
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    if (std::isfinite(fv[0]) && std::isfinite(fv[n]) &&
        fv[n] - fv[0] < 1e-12 * (1.0 + std::fabs(fv[0]))) {
      double diam = 0.0;
      for (int i = 0; i < n; ++i)
        diam = std::max(diam, std::fabs(pts[n][static_cast<std::size_t>(i)] - pts[0][static_cast<std::size_t>(i)]));
      if (diam < 1e-9) break;
    }
    std::array<double, 4> centroid{};
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < n; ++d) centroid[static_cast<std::size_t>(d)] += pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] / n;
    auto blend = [&](double coef) {
      std::array<double, 4> p;
      for (int d = 0; d < n; ++d)
        p[static_cast<std::size_t>(d)] = centroid[static_cast<std::size_t>(d)] +
                                         coef * (pts[n][static_cast<std::size_t>(d)] - centroid[static_cast<std::size_t>(d)]);
      return p;
    };
    const std::array<double, 4> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const std::array<double, 4> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) { pts[n] = xe; fv[n] = fe; } else { pts[n] = xr; fv[n] = fr; }
    } else if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
    } else {
      const std::array<double, 4> xc = blend(fr < fv[n] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fv[n])) {
        pts[n] = xc;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int d = 0; d < n; ++d)
            pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
                pts[0][static_cast<std::size_t>(d)] +
                0.5 * (pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] - pts[0][static_cast<std::size_t>(d)]);
          fv[static_cast<std::size_t>(i)] = f(pts[static_cast<std::size_t>(i)]);
        }
      }
    }
    order();
  }
  fbest = fv[0];
  return pts[0];
}

inline std::array<double, 4> fd_gradient4(const std::function<double(const std::array<double, 4>&)>& f,
                                          const std::array<double, 4>& theta) {
  std::array<double, 4> g{};
  for (int i = 0; i < 4; ++i) {
    const double h = 1e-6 * (1.0 + std::fabs(theta[static_cast<std::size_t>(i)]));
    std::array<double, 4> up = theta, dn = theta;
    up[static_cast<std::size_t>(i)] += h;
    dn[static_cast<std::size_t>(i)] -= h;
    g[static_cast<std::size_t>(i)] = (f(up) - f(dn)) / (2.0 * h);
  }
  return g;
}

}  // namespace detail

/// Gaussian GARCH(1,1) maximum likelihood: x_t = mu + e_t,
/// h_t = omega + alpha1*e_{t-1}^2 + beta1*h_{t-1}, h_1 = sample variance.
/// Constraints are enforced by a log/logit reparameterization, so every
/// iterate is stationary; the optimum must pass a finite-difference
/// gradient test at tolerance 1e-4*(1+|loglik|).
inline GarchFit garch11_fit(const std::vector<double>& x) {
  const int T = static_cast<int>(x.size());
  if (T < 50) throw config_error("GARCH fit needs at least 50 observations");
  const double xbar = mean_of(x);
  const double v0 = sample_variance(x);
  if (!(v0 > 0.0)) throw data_error("degenerate series: zero variance");

  const auto nll = [&](const std::array<double, 4>& theta) {
    return detail::garch_nll_t(x, v0, theta);
  };

  const std::array<std::pair<double, double>, 6> starts = {{
      {0.10, 0.80}, {0.05, 0.90}, {0.20, 0.70}, {0.02, 0.95}, {0.30, 0.50}, {0.01, 0.05},
  }};
  std::array<double, 4> best{};
  double best_nll = std::numeric_limits<double>::infinity();
  double best_grad = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (const auto& [a0, b0] : starts) {
    const double pers = a0 + b0;
    std::array<double, 4> theta = {xbar, std::log(v0 * (1.0 - pers)),
                                   detail::logit(pers), detail::logit(a0 / pers)};
    std::array<double, 4> scale = {0.1 * std::sqrt(v0) + 1e-6, 0.5, 0.5, 0.5};
    double fb = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 6; ++round) {
      theta = detail::nelder_mead4(nll, theta, scale, 2000, fb);
      const std::array<double, 4> g = detail::fd_gradient4(nll, theta);
      double gmax = 0.0;
      for (double v : g) gmax = std::max(gmax, std::fabs(v));
      const double tol = 1e-4 * (1.0 + std::fabs(fb));
      if (fb < best_nll) {
        best_nll = fb;
        best = theta;
        best_grad = gmax;
        converged = gmax < tol;
      } else if (fb == best_nll && gmax < best_grad) {
        best = theta;
        best_grad = gmax;
        converged = gmax < tol;
      }
      if (gmax < tol && round > 0) break;
      for (double& s : scale) s *= 0.25;
      scale[0] = std::max(scale[0], 1e-8);
    }
  }
  if (!std::isfinite(best_nll))
    throw numerical_error("GARCH likelihood non-finite at every starting point");
  if (!converged)
    throw numerical_error("GARCH optimizer did not reach a stationary point (gradient max " +
                          std::to_string(best_grad) + ")");

  GarchFit fit;
  detail::garch_untransform(best, fit.mu, fit.omega, fit.alpha1, fit.beta1);
  fit.n = T;
  fit.loglik = -best_nll;
  fit.aic_norm = (-2.0 * fit.loglik + 8.0) / T;
  fit.grad_norm = best_grad;
  fit.cond_var.resize(x.size());
  fit.residuals.resize(x.size());
  double h = v0;
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      const double e = fit.residuals[static_cast<std::size_t>(t - 1)];
      h = fit.omega + fit.alpha1 * e * e + fit.beta1 * h;
    }
    fit.cond_var[static_cast<std::size_t>(t)] = h;
    fit.residuals[static_cast<std::size_t>(t)] = x[static_cast<std::size_t>(t)] - fit.mu;
  }

  // Observed-information standard errors from the numerical Hessian in the
  // original parameter space. Boundary optima leave them NaN.
  const std::array<double, 4> orig = {fit.mu, fit.omega, fit.alpha1, fit.beta1};
  const auto nll_orig = [&](const std::array<double, 4>& p) {
    return detail::garch_nll(x, v0, p[0], p[1], p[2], p[3]);
  };
  std::array<double, 4> step;
  step[0] = 1e-4 * (1.0 + std::fabs(orig[0]));
  for (int i = 1; i < 4; ++i) step[static_cast<std::size_t>(i)] = 1e-4 * std::fabs(orig[static_cast<std::size_t>(i)]);
  bool hess_ok = step[1] > 0.0 && step[2] > 0.0 && step[3] > 0.0 &&
                 orig[2] + orig[3] + step[2] + step[3] < 1.0;
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  if (hess_ok) {
    const double f0 = nll_orig(orig);
    for (int i = 0; i < 4 && hess_ok; ++i) {
      for (int j = i; j < 4 && hess_ok; ++j) {
        auto at = [&](double si, double sj) {
          std::array<double, 4> p = orig;
          p[static_cast<std::size_t>(i)] += si * step[static_cast<std::size_t>(i)];
          p[static_cast<std::size_t>(j)] += sj * step[static_cast<std::size_t>(j)];
          return nll_orig(p);
        };
        double hij;
        if (i == j)
          hij = (at(1, 0) - 2.0 * f0 + at(-1, 0)) /
                (step[static_cast<std::size_t>(i)] * step[static_cast<std::size_t>(i)]);
        else
          hij = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) /
                (4.0 * step[static_cast<std::size_t>(i)] * step[static_cast<std::size_t>(j)]);
        if (!std::isfinite(hij)) hess_ok = false;
        H(i, j) = H(j, i) = hij;
      }
    }
  }
  for (auto& s : fit.std_errors) s = std::numeric_limits<double>::quiet_NaN();
  if (hess_ok) {
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(H);
    if (lu.isInvertible()) {
      const Eigen::Matrix4d cov = lu.inverse();
      for (int i = 0; i < 4; ++i)
        if (cov(i, i) > 0.0) fit.std_errors[static_cast<std::size_t>(i)] = std::sqrt(cov(i, i));
    }
  }
  return fit;
}

/// Conditional-variance proxy aligned to the input index; square root on
/// request for a volatility (standard deviation) scale.
inline std::vector<double> conditional_volatility(const GarchFit& fit, bool take_sqrt = false) {
  if (fit.cond_var.empty()) throw config_error("fit carries no conditional variance");
  if (!take_sqrt) return fit.cond_var;
  std::vector<double> out(fit.cond_var.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(fit.cond_var[i]);
  return out;
}

}  // namespace regimes
