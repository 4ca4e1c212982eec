#pragma once

// Standard normal density, distribution function and quantile.
//
// Phi is evaluated through W. J. Cody's rational Chebyshev approximation to
// erfc (Math. Comp. 1969), which is accurate to roughly 1e-16 absolute in
// double precision for |t| <= 8. Beyond that the result is still returned but
// only the relative accuracy of the tail is meaningful.
//
// The quantile uses Wichura's AS241 (PPND16) as a starting point and applies a
// single Newton step against Phi.

#include <array>
#include <cmath>
#include <compare>
#include <string>

#include "nptest/error.hpp"

namespace nptest {

/// A probability in [0, 1].
class Probability {
 public:
  constexpr Probability() = default;

  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw domain_error("probability must lie in [0, 1], got " + std::to_string(value));
    }
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  auto operator<=>(const Probability&) const = default;

 private:
  double value_ = 0.0;
};

/// A finite standard-normal coordinate.
class ZScore {
 public:
  constexpr ZScore() = default;

  explicit ZScore(double value) : value_(value) {
    if (!std::isfinite(value)) {
      throw domain_error("z-score must be finite");
    }
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  auto operator<=>(const ZScore&) const = default;

 private:
  double value_ = 0.0;
};

namespace detail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210484903928;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438186848;

// Complementary error function, Cody's CALERF with JINT = 1.
inline double erfc_cody(double x) {
  static constexpr std::array<double, 5> a{3.16112374387056560e00, 1.13864154151050156e02,
                                           3.77485237685302021e02, 3.20937758913846947e03,
                                           1.85777706184603153e-1};
  static constexpr std::array<double, 4> b{2.36012909523441209e01, 2.44024637934444173e02,
                                           1.28261652607737228e03, 2.84423683343917062e03};
  static constexpr std::array<double, 9> c{5.64188496988670089e-1, 8.88314979438837594e00,
                                           6.61191906371416295e01, 2.98635138197400131e02,
                                           8.81952221241769090e02, 1.71204761263407058e03,
                                           2.05107837782607147e03, 1.23033935479799725e03,
                                           2.15311535474403846e-8};
  static constexpr std::array<double, 8> d{1.57449261107098347e01, 1.17693950891312499e02,
                                           5.37181101862009858e02, 1.62138957456669019e03,
                                           3.29079923573345963e03, 4.36261909014324716e03,
                                           3.43936767414372164e03, 1.23033935480374942e03};
  static constexpr std::array<double, 6> p{3.05326634961232344e-1, 3.60344899949804439e-1,
                                           1.25781726111229246e-1, 1.60837851487422766e-2,
                                           6.58749161529837803e-4, 1.63153871373020978e-2};
  static constexpr std::array<double, 5> q{2.56852019228982242e00, 1.87295284992346047e00,
                                           5.27905102951428412e-1, 6.05183413124413191e-2,
                                           2.33520497626869185e-3};
  constexpr double sqrpi = 5.6418958354775628695e-1;  // 1/sqrt(pi)
  constexpr double thresh = 0.46875;
  constexpr double xsmall = 1.11e-16;
  constexpr double xbig = 26.543;

  // exp(-y*y) with y*y split so the exponent keeps full precision.
  const auto scaled_exp = [](double y) {
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del);
  };

  const double y = std::fabs(x);
  double result = 0.0;

  if (y <= thresh) {
    const double ysq = y > xsmall ? y * y : 0.0;
    double xnum = a[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + a[i]) * ysq;
      xden = (xden + b[i]) * ysq;
    }
    return 1.0 - x * (xnum + a[3]) / (xden + b[3]);
  }

  if (y <= 4.0) {
    double xnum = c[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + c[i]) * y;
      xden = (xden + d[i]) * y;
    }
    result = (xnum + c[7]) / (xden + d[7]) * scaled_exp(y);
  } else if (y < xbig) {
    const double ysq = 1.0 / (y * y);
    double xnum = p[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + p[i]) * ysq;
      xden = (xden + q[i]) * ysq;
    }
    result = ysq * (xnum + p[4]) / (xden + q[4]);
    result = (sqrpi - result) / y * scaled_exp(y);
  }

  return x < 0.0 ? 2.0 - result : result;
}

inline double pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

inline double cdf(double t) {
  if (t >= 0.0) {
    return 1.0 - 0.5 * erfc_cody(t * kInvSqrt2);
  }
  return 0.5 * erfc_cody(-t * kInvSqrt2);
}

template <std::size_t N>
double horner(const std::array<double, N>& coeffs, double r) {
  double acc = coeffs[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) {
    acc = acc * r + coeffs[i];
  }
  return acc;
}

// AS241 for 0 < p <= 0.5; returns a non-positive value.
inline double wichura_lower(double p) {
  static constexpr std::array<double, 8> a{
      3.3871328727963996080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3};
  static constexpr std::array<double, 8> b{
      1.0,                     4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4, 5.2264952788528545610e3};
  static constexpr std::array<double, 8> c{
      1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr std::array<double, 8> d{
      1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr std::array<double, 8> e{
      6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr std::array<double, 8> f{
      1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double dev = p - 0.5;
  if (std::fabs(dev) <= 0.425) {
    const double r = 0.180625 - dev * dev;
    return dev * horner(a, r) / horner(b, r);
  }
  double r = std::sqrt(-std::log(p));
  if (r <= 5.0) {
    r -= 1.6;
    return -horner(c, r) / horner(d, r);
  }
  r -= 5.0;
  return -horner(e, r) / horner(f, r);
}

inline double quantile_lower(double p) {
  double x = wichura_lower(p);
  const double density = pdf(x);
  if (density > 0.0) {
    const double step = (cdf(x) - p) / density;
    if (std::isfinite(step)) {
      x -= step;
    }
  }
  return x;
}

}  // namespace detail

/// Standard normal density.
inline double std_normal_pdf(ZScore z) { return detail::pdf(z.value()); }

/// Phi(t). Absolute error below 1e-14 for |t| <= 8.
inline Probability std_normal_cdf(ZScore t) { return Probability{detail::cdf(t.value())}; }

/// Inverse of Phi on the open interval (0, 1). The endpoints map to infinities
/// and are rejected.
inline ZScore std_normal_quantile(Probability p) {
  const double pv = p.value();
  if (!(pv > 0.0 && pv < 1.0)) {
    throw domain_error("quantile requires 0 < p < 1");
  }
  if (pv == 0.5) {
    return ZScore{0.0};
  }
  // 1 - pv is exact for pv >= 0.5, so the upper half reuses the lower branch.
  const double x = pv < 0.5 ? detail::quantile_lower(pv) : -detail::quantile_lower(1.0 - pv);
  return ZScore{x};
}

/// d_alpha, the point with upper-tail mass alpha: Phi(d_alpha) = 1 - alpha.
inline ZScore critical_value(Probability alpha) {
  const double a = alpha.value();
  if (!(a > 0.0 && a < 1.0)) {
    throw domain_error("significance level must satisfy 0 < alpha < 1");
  }
  // -Phi^-1(alpha) avoids rounding 1 - alpha for small alpha; 0.0 - q keeps
  // d_0.5 at +0.0.
  return ZScore{0.0 - std_normal_quantile(alpha).value()};
}

}  // namespace nptest
