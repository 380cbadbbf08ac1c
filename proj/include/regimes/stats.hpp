#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "regimes/core.hpp"

namespace regimes {

inline double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sample_variance(const std::vector<double>& x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

inline double chi_squared_upper_tail(double x, double df) {
  if (x <= 0) return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

inline double f_upper_tail(double f, double df1, double df2) {
  if (f <= 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

inline double t_two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

inline double t_quantile(double p, double df) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, p);
}

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace detail {

// CDF of the range of k iid standard normals:
//   R_k(w) = k * Int phi(z) * (Phi(z) - Phi(z - w))^(k-1) dz.
inline double normal_range_cdf(double w, int k) {
  if (w <= 0) return 0.0;
  if (k == 1) return 1.0;
  auto integrand = [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(inner, k - 1);
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, -9.0, 9.0, 12, 1e-12);
  return std::min(1.0, k * v);
}

}  // namespace detail

/// CDF of the studentized range statistic with k groups and `df` residual
/// degrees of freedom, by numerical integration over the chi distribution of
/// the pooled scale estimate. Relative tolerance ~1e-8.
inline double studentized_range_cdf(double q, int k, double df) {
  if (q <= 0) return 0.0;
  if (k < 2) throw config_error("studentized range needs k >= 2");
  if (df <= 0) throw config_error("degrees of freedom must be positive");
  if (std::isinf(df) || df > 1e7) return detail::normal_range_cdf(q, k);

  // s = sqrt(chi2_df / df); log-density avoids overflow for large df.
  const double half_df = 0.5 * df;
  const double log_norm = std::log(2.0) + half_df * std::log(half_df) - std::lgamma(half_df);
  auto s_log_density = [&](double s) {
    return log_norm + (df - 1.0) * std::log(s) - half_df * s * s;
  };

  // Integration bounds from the chi-squared quantiles.
  boost::math::chi_squared chi2(df);
  const double s_lo = std::sqrt(boost::math::quantile(chi2, 1e-14) / df);
  const double s_hi = std::sqrt(boost::math::quantile(boost::math::complement(chi2, 1e-14)) / df);

  auto integrand = [&](double s) {
    return std::exp(s_log_density(s)) * detail::normal_range_cdf(q * s, k);
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, s_lo, s_hi, 12, 1e-9);
  return std::min(1.0, v);
}

/// Quantile of the studentized range: smallest q with P(Q <= q) = p.
inline double studentized_range_quantile(double p, int k, double df) {
  if (p <= 0 || p >= 1) throw config_error("quantile probability must be in (0,1)");
  double lo = 1e-3, hi = 4.0;
  while (studentized_range_cdf(hi, k, df) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw numerical_error("studentized range quantile bracket failed");
  }
  // Bisection to ~1e-10 relative; each CDF call is a nested quadrature.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-10 * mid) break;
    if (studentized_range_cdf(mid, k, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace regimes
