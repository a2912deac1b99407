#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mediff/errors.hpp"

namespace mediff {

namespace detail {

// Continued fraction for the incomplete beta function, evaluated with the
// modified Lentz method.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b) with y = 1 - x supplied by the caller.
inline double regularized_incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, y) / b;
}

// P(T > t) for t >= 0.
inline double t_upper_tail(double t, double nu) {
  if (t <= 0.0) return 0.5;
  const double t2 = t * t;
  const double x = nu / (nu + t2);
  const double y = t2 / (nu + t2);
  return 0.5 * regularized_incomplete_beta(0.5 * nu, 0.5, x, y);
}

inline double t_cdf(double t, double nu) {
  if (nu < 1.0 || std::isnan(t)) throw UsageError("t_cdf: degrees of freedom must be at least 1");
  return t >= 0.0 ? 1.0 - t_upper_tail(t, nu) : t_upper_tail(-t, nu);
}

inline double t_pdf(double t, double nu) {
  const double log_norm =
      std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

// t >= 0 with P(T > t) = q, q in (0, 0.5]. Newton steps on the tail,
// falling back to bisection whenever a step leaves the current bracket.
inline double t_quantile_upper(double q, double nu) {
  if (!(q > 0.0 && q <= 0.5)) throw UsageError("t_quantile_upper: tail probability must lie in (0, 0.5]");
  if (!(nu >= 1.0)) throw UsageError("t_quantile_upper: degrees of freedom must be at least 1");
  if (q == 0.5) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (t_upper_tail(hi, nu) > q) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  }

  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = t_upper_tail(t, nu) - q;  // decreasing in t
    if (f > 0.0) {
      lo = t;
    } else if (f < 0.0) {
      hi = t;
    } else {
      return t;
    }
    const double pdf = t_pdf(t, nu);
    double next = pdf > 0.0 ? t + f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) <= 1e-15 * std::max(1.0, t) || hi - lo <= 1e-15 * std::max(1.0, hi)) return next;
    t = next;
  }
  return t;
}

// Inverse CDF of Student's t with nu degrees of freedom.
inline double t_quantile(double p, double nu) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("t_quantile: p must lie in (0, 1)");
  if (!(nu >= 1.0)) throw UsageError("t_quantile: degrees of freedom must be at least 1");
  if (p == 0.5) return 0.0;
  return p > 0.5 ? t_quantile_upper(1.0 - p, nu) : -t_quantile_upper(p, nu);
}

}  // namespace mediff
