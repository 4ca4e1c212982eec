#pragma once

// Decision rules for H0: theta = theta0 against H1: theta = theta1 > theta0,
// based on the sample mean of n draws from N(theta, sigma^2) with sigma known.

#include <cmath>
#include <string>
#include <string_view>

#include "nptest/error.hpp"
#include "nptest/normal_kernel.hpp"

namespace nptest {

/// Problem instance: null mean, alternative mean, known sigma, sample size.
class TestSetup {
 public:
  TestSetup(double theta0, double theta1, double sigma, int n)
      : theta0_(theta0), theta1_(theta1), sigma_(sigma), n_(n) {
    if (!std::isfinite(theta0) || !std::isfinite(theta1)) {
      throw domain_error("theta0 and theta1 must be finite");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw domain_error("sigma must be positive and finite");
    }
    if (n < 1) {
      throw domain_error("sample size n must be at least 1");
    }
    if (theta1 == theta0) {
      throw degenerate_setup_error("theta1 equals theta0; the hypotheses coincide");
    }
    if (theta1 < theta0) {
      throw domain_error("theta1 must exceed theta0");
    }
  }

  [[nodiscard]] double theta0() const noexcept { return theta0_; }
  [[nodiscard]] double theta1() const noexcept { return theta1_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] int n() const noexcept { return n_; }

  /// sigma / sqrt(n), the standard deviation of the sample mean.
  [[nodiscard]] double mean_scale() const noexcept {
    return sigma_ / std::sqrt(static_cast<double>(n_));
  }

  bool operator==(const TestSetup&) const = default;

 private:
  double theta0_;
  double theta1_;
  double sigma_;
  int n_;
};

/// Observed sample mean together with the size of the sample behind it.
class SampleSummary {
 public:
  SampleSummary(double xbar, int n) : xbar_(xbar), n_(n) {
    if (!std::isfinite(xbar)) {
      throw domain_error("sample mean must be finite");
    }
    if (n < 1) {
      throw domain_error("sample size n must be at least 1");
    }
  }

  [[nodiscard]] double xbar() const noexcept { return xbar_; }
  [[nodiscard]] int n() const noexcept { return n_; }

 private:
  double xbar_;
  int n_;
};

enum class Outcome { RejectH0, AcceptH0 };

enum class Rule { NeymanPearson, NPAcceptH1Form, Bayes };

/// Which of the two equivalent-looking Neyman-Pearson statements to apply:
/// reject H0 when xbar >= theta0 + d*s, or accept H1 when xbar >= theta1 - d*s.
enum class NpForm { RejectH0Form, AcceptH1Form };

struct Decision {
  Outcome outcome;
  double threshold;
  Rule rule;

  bool operator==(const Decision&) const = default;
};

inline std::string_view to_string(Outcome o) {
  return o == Outcome::RejectH0 ? "RejectH0" : "AcceptH0";
}

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::NeymanPearson:
      return "NeymanPearson";
    case Rule::NPAcceptH1Form:
      return "NPAcceptH1Form";
    case Rule::Bayes:
      return "Bayes";
  }
  return "unknown";
}

namespace detail {

inline void require_same_size(const SampleSummary& sample, const TestSetup& setup) {
  if (sample.n() != setup.n()) {
    throw contract_error("sample size " + std::to_string(sample.n()) +
                         " does not match setup size " + std::to_string(setup.n()));
  }
}

inline double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw domain_error(std::string(what) + " must be finite");
  }
  return v;
}

inline Outcome reject_at_or_above(double xbar, double threshold) {
  return xbar >= threshold ? Outcome::RejectH0 : Outcome::AcceptH0;
}

}  // namespace detail

/// Most powerful level-alpha cutoff: reject H0 when xbar >= theta0 + d_alpha * sigma / sqrt(n).
inline double np_reject_threshold(const TestSetup& setup, Probability alpha) {
  return setup.theta0() + critical_value(alpha).value() * setup.mean_scale();
}

/// Accept H1 when xbar >= theta1 - d_alpha * sigma / sqrt(n).
inline double np_accept_h1_threshold(const TestSetup& setup, Probability alpha) {
  return setup.theta1() - critical_value(alpha).value() * setup.mean_scale();
}

/// Applies one of the two Neyman-Pearson forms. Ties go to rejection of H0
/// (equivalently, acceptance of H1 for the AcceptH1Form).
inline Decision np_decide(const SampleSummary& sample, const TestSetup& setup, Probability alpha,
                          NpForm form) {
  detail::require_same_size(sample, setup);
  if (form == NpForm::RejectH0Form) {
    const double t = np_reject_threshold(setup, alpha);
    return {detail::reject_at_or_above(sample.xbar(), t), t, Rule::NeymanPearson};
  }
  const double t = np_accept_h1_threshold(setup, alpha);
  return {detail::reject_at_or_above(sample.xbar(), t), t, Rule::NPAcceptH1Form};
}

/// Probability that the level-alpha rejection rule rejects H0 when the true
/// mean is theta. Evaluated as Phi(sqrt(n) (theta - T) / sigma), which is the
/// same quantity as 1 - Phi(sqrt(n) (T - theta) / sigma) without cancellation.
inline Probability power(const TestSetup& setup, Probability alpha, double theta) {
  detail::require_finite(theta, "theta");
  const double cutoff = np_reject_threshold(setup, alpha);
  return std_normal_cdf(ZScore{(theta - cutoff) / setup.mean_scale()});
}

/// Midpoint (theta0 + theta1) / 2, the Bayes cutoff for 0-1 loss and equal priors.
inline double bayes_threshold(const TestSetup& setup) {
  return 0.5 * (setup.theta0() + setup.theta1());
}

/// Bayes rule under 0-1 loss with prior 1/2 on each hypothesis. The event
/// xbar == midpoint has probability zero; it is resolved as RejectH0.
inline Decision bayes_decide(const SampleSummary& sample, const TestSetup& setup) {
  detail::require_same_size(sample, setup);
  const double t = bayes_threshold(setup);
  return {detail::reject_at_or_above(sample.xbar(), t), t, Rule::Bayes};
}

/// Type I error rate of the Bayes rule, 1 - Phi(sqrt(n) (theta1 - theta0) / (2 sigma)).
/// Not chosen in advance; it is fixed by theta0, theta1, sigma and n.
inline Probability bayes_effective_level(const TestSetup& setup) {
  const double arg = (setup.theta1() - setup.theta0()) / (2.0 * setup.mean_scale());
  return std_normal_cdf(ZScore{-arg});
}

/// The two error probabilities of the cutoff rule "reject H0 iff xbar >= c".
struct ErrorTerms {
  Probability type1;  // P_theta0(xbar >= c)
  Probability type2;  // P_theta1(xbar <  c)
};

inline ErrorTerms bayes_error_terms(const TestSetup& setup, double threshold) {
  detail::require_finite(threshold, "threshold");
  const double s = setup.mean_scale();
  return {std_normal_cdf(ZScore{(setup.theta0() - threshold) / s}),
          std_normal_cdf(ZScore{(threshold - setup.theta1()) / s})};
}

/// Average error probability under equal priors for cutoff c:
/// 1/2 [1 - Phi(sqrt(n)(c - theta0)/sigma)] + 1/2 Phi(sqrt(n)(c - theta1)/sigma).
inline Probability bayes_risk(const TestSetup& setup, double threshold) {
  const ErrorTerms terms = bayes_error_terms(setup, threshold);
  return Probability{0.5 * terms.type1.value() + 0.5 * terms.type2.value()};
}

}  // namespace nptest
