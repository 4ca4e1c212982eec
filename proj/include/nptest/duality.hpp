#pragma once

// When does rejecting H0 mean accepting H1?
//
// With t1 = theta0 + d*s (reject H0 at or above) and t2 = theta1 - d*s
// (accept H1 at or above), s = sigma / sqrt(n):
//   t2 <= t1  =>  every rejection of H0 is an acceptance of H1,
//   t1 <= t2  =>  every acceptance of H1 is a rejection of H0,
// and the two coincide exactly when theta1 - theta0 = 2 d s, in which case
// both thresholds equal the midpoint (theta0 + theta1) / 2.

#include <cmath>
#include <string_view>

#include "nptest/decision_rules.hpp"
#include "nptest/error.hpp"
#include "nptest/normal_kernel.hpp"

namespace nptest {

inline constexpr double kDefaultDualityTolerance = 1e-9;

enum class DualityClass {
  RejectImpliesAcceptOnly,  // t2 < t1: H1 accepted on a strictly larger region
  AcceptImpliesRejectOnly,  // t2 > t1: H0 rejected on a strictly larger region
  Equivalent,               // |t2 - t1| <= tolerance
};

inline std::string_view to_string(DualityClass c) {
  switch (c) {
    case DualityClass::RejectImpliesAcceptOnly:
      return "RejectImpliesAcceptOnly";
    case DualityClass::AcceptImpliesRejectOnly:
      return "AcceptImpliesRejectOnly";
    case DualityClass::Equivalent:
      return "Equivalent";
  }
  return "unknown";
}

struct DualityReport {
  DualityClass classification;
  double gap;  // t2 - t1 = (theta1 - theta0) - 2 d s
  double t1;
  double t2;
  double tolerance;
};

/// (theta1 - theta0) - 2 d_alpha sigma / sqrt(n). Zero exactly at the matched alternative.
inline double consistency_gap(const TestSetup& setup, Probability alpha) {
  const double d = critical_value(alpha).value();
  return (setup.theta1() - setup.theta0()) - 2.0 * d * setup.mean_scale();
}

struct MatchedAlternative {
  double theta1;
  // alpha >= 0.5 gives theta1 <= theta0, which no TestSetup accepts.
  bool degenerate;
};

/// theta0 + 2 d_alpha sigma / sqrt(n), the only alternative at which rejecting
/// H0 and accepting H1 are the same event. Returned even when degenerate.
inline MatchedAlternative matched_theta1(double theta0, double sigma, int n, Probability alpha) {
  if (!std::isfinite(theta0)) {
    throw domain_error("theta0 must be finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw domain_error("sigma must be positive and finite");
  }
  if (n < 1) {
    throw domain_error("sample size n must be at least 1");
  }
  const double d = critical_value(alpha).value();
  const double theta1 = theta0 + 2.0 * d * sigma / std::sqrt(static_cast<double>(n));
  return {theta1, !(theta1 > theta0)};
}

/// The alpha that makes theta1 the matched alternative. Same value as
/// bayes_effective_level.
inline Probability matched_alpha(const TestSetup& setup) { return bayes_effective_level(setup); }

inline DualityReport analyze_duality(const TestSetup& setup, Probability alpha,
                                     double tolerance = kDefaultDualityTolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw domain_error("tolerance must be positive and finite");
  }
  const double t1 = np_reject_threshold(setup, alpha);
  const double t2 = np_accept_h1_threshold(setup, alpha);
  const double gap = t2 - t1;

  DualityClass cls = DualityClass::Equivalent;
  if (gap > tolerance) {
    cls = DualityClass::AcceptImpliesRejectOnly;
  } else if (gap < -tolerance) {
    cls = DualityClass::RejectImpliesAcceptOnly;
  }
  return {cls, gap, t1, t2, tolerance};
}

}  // namespace nptest
