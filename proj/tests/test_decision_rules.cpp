#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nptest/decision_rules.hpp"
#include "support/oracle.hpp"

using namespace nptest;

namespace {

const Probability kAlpha05{0.05};
constexpr double kD05 = 1.6448536269514722;  // frozen quantile-oracle value of d_0.05

double oracle_upper_tail(double z) { return static_cast<double>(1.0L - oracle::cdf(z)); }

}  // namespace

TEST_CASE("TestSetup validation", "[decision_rules]") {
  CHECK_NOTHROW(TestSetup(0.0, 1.0, 1.0, 1));
  CHECK_THROWS_AS(TestSetup(0.0, 1.0, 0.0, 4), domain_error);
  CHECK_THROWS_AS(TestSetup(0.0, 1.0, -1.0, 4), domain_error);
  CHECK_THROWS_AS(TestSetup(0.0, 1.0, 1.0, 0), domain_error);
  CHECK_THROWS_AS(TestSetup(1.0, 0.0, 1.0, 4), domain_error);
  CHECK_THROWS_AS(TestSetup(0.0, 1.0, std::nan(""), 4), domain_error);
  CHECK_THROWS_AS(TestSetup(0.0, INFINITY, 1.0, 4), domain_error);
  CHECK_THROWS_AS(TestSetup(2.0, 2.0, 1.0, 4), degenerate_setup_error);
  CHECK_THROWS_AS(SampleSummary(std::nan(""), 4), domain_error);
  CHECK_THROWS_AS(SampleSummary(0.0, 0), domain_error);
}

TEST_CASE("np_reject_threshold", "[decision_rules]") {
  CHECK(np_reject_threshold(TestSetup(0, 1, 1, 4), Probability{0.5}) == 0.0);
  CHECK(std::fabs(np_reject_threshold(TestSetup(0, 1, 1, 4), kAlpha05) - 0.8224268134757361) <=
        1e-14);
  CHECK(std::fabs(np_reject_threshold(TestSetup(10, 12, 2, 16), kAlpha05) - 10.822426813475737) <=
        1e-13);
  CHECK_THROWS_AS(np_reject_threshold(TestSetup(0, 1, 1, 4), Probability{0.0}), domain_error);
}

TEST_CASE("np_accept_h1_threshold", "[decision_rules]") {
  CHECK(np_accept_h1_threshold(TestSetup(0, 1, 1, 4), Probability{0.5}) == 1.0);
  CHECK(std::fabs(np_accept_h1_threshold(TestSetup(0, 1, 1, 4), kAlpha05) -
                  0.17757318652426387) <= 1e-14);
  CHECK(std::fabs(np_accept_h1_threshold(TestSetup(10, 12, 2, 16), kAlpha05) -
                  11.177573186524264) <= 1e-13);
  CHECK_THROWS_AS(np_accept_h1_threshold(TestSetup(0, 1, 1, 4), Probability{1.0}), domain_error);
}

TEST_CASE("np_decide", "[decision_rules]") {
  const TestSetup setup(0, 1, 1, 4);

  const Decision reject = np_decide(SampleSummary(0.9, 4), setup, kAlpha05, NpForm::RejectH0Form);
  CHECK(reject.outcome == Outcome::RejectH0);
  CHECK(reject.rule == Rule::NeymanPearson);
  CHECK(reject.threshold == np_reject_threshold(setup, kAlpha05));

  const Decision accept = np_decide(SampleSummary(0.1, 4), setup, kAlpha05, NpForm::AcceptH1Form);
  CHECK(accept.outcome == Outcome::AcceptH0);
  CHECK(accept.rule == Rule::NPAcceptH1Form);

  SECTION("ties reject H0 in both forms") {
    const double t1 = np_reject_threshold(setup, kAlpha05);
    const double t2 = np_accept_h1_threshold(setup, kAlpha05);
    CHECK(np_decide(SampleSummary(t1, 4), setup, kAlpha05, NpForm::RejectH0Form).outcome ==
          Outcome::RejectH0);
    CHECK(np_decide(SampleSummary(std::nextafter(t1, -1.0), 4), setup, kAlpha05,
                    NpForm::RejectH0Form)
              .outcome == Outcome::AcceptH0);
    CHECK(np_decide(SampleSummary(t2, 4), setup, kAlpha05, NpForm::AcceptH1Form).outcome ==
          Outcome::RejectH0);
  }

  SECTION("size mismatch is a contract error") {
    CHECK_THROWS_AS(np_decide(SampleSummary(0.9, 5), setup, kAlpha05, NpForm::RejectH0Form),
                    contract_error);
  }
}

TEST_CASE("power", "[decision_rules]") {
  const TestSetup setup(0, 1, 1, 4);
  CHECK(std::fabs(power(setup, kAlpha05, 0.0).value() - 0.05) <= 1e-12);
  CHECK(std::fabs(power(setup, kAlpha05, 0.8224268134757361).value() - 0.5) <= 1e-14);
  // Oracle: 1 - Phi(2 (0.8224268134757361 - 1)) = 1 - Phi(-0.3551463730485279).
  const double expected = oracle_upper_tail(2.0 * (kD05 / 2.0 - 1.0));
  CHECK(std::fabs(expected - 0.6387600313123351) <= 1e-15);
  CHECK(std::fabs(power(setup, kAlpha05, 1.0).value() - 0.6387600313123351) <= 1e-14);
  CHECK_THROWS_AS(power(setup, kAlpha05, std::nan("")), domain_error);
}

TEST_CASE("power properties", "[decision_rules][property]") {
  std::mt19937_64 gen(20261018);
  std::uniform_real_distribution<double> theta0_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> delta_dist(0.05, 5.0);
  std::uniform_real_distribution<double> sigma_dist(0.1, 5.0);
  std::uniform_int_distribution<int> n_dist(1, 200);
  std::uniform_real_distribution<double> alpha_dist(0.001, 0.5);

  for (int trial = 0; trial < 500; ++trial) {
    const double theta0 = theta0_dist(gen);
    const TestSetup setup(theta0, theta0 + delta_dist(gen), sigma_dist(gen), n_dist(gen));
    const Probability alpha{alpha_dist(gen)};
    CHECK(std::fabs(power(setup, alpha, setup.theta0()).value() - alpha.value()) <= 1e-12);

    // Strictly increasing over +-4 standard errors of the cutoff.
    const double cutoff = np_reject_threshold(setup, alpha);
    const double s = setup.mean_scale();
    double prev = -1.0;
    for (int i = 0; i <= 80; ++i) {
      const double p = power(setup, alpha, cutoff + s * (-4.0 + 0.1 * i)).value();
      CHECK(p > prev);
      prev = p;
    }
  }
}

TEST_CASE("bayes_threshold", "[decision_rules]") {
  CHECK(bayes_threshold(TestSetup(0, 2, 1, 1)) == 1.0);
  CHECK(bayes_threshold(TestSetup(0, 1, 1, 1)) == 0.5);
  CHECK(bayes_threshold(TestSetup(-3, 5, 1, 1)) == 1.0);
}

TEST_CASE("bayes_decide", "[decision_rules]") {
  const TestSetup setup(0, 1, 1, 4);
  CHECK(bayes_decide(SampleSummary(0.6, 4), setup).outcome == Outcome::RejectH0);
  CHECK(bayes_decide(SampleSummary(0.4, 4), setup).outcome == Outcome::AcceptH0);
  CHECK(bayes_decide(SampleSummary(0.5, 4), setup).outcome == Outcome::RejectH0);
  CHECK(bayes_decide(SampleSummary(0.5, 4), setup).rule == Rule::Bayes);
  CHECK_THROWS_AS(bayes_decide(SampleSummary(0.5, 3), setup), contract_error);
}

TEST_CASE("bayes_decide matches the threshold comparison", "[decision_rules][property]") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_real_distribution<double> pos(0.01, 10.0);
  std::uniform_int_distribution<int> n_dist(1, 100);
  for (int trial = 0; trial < 5000; ++trial) {
    const double theta0 = u(gen);
    const int n = n_dist(gen);
    const TestSetup setup(theta0, theta0 + pos(gen), pos(gen), n);
    const double xbar = trial % 10 == 0 ? bayes_threshold(setup) : u(gen);
    const Decision d = bayes_decide(SampleSummary(xbar, n), setup);
    CHECK((d.outcome == Outcome::RejectH0) == (xbar >= bayes_threshold(setup)));
  }
}

TEST_CASE("bayes_effective_level", "[decision_rules]") {
  CHECK(std::fabs(bayes_effective_level(TestSetup(0, 1, 1, 4)).value() - 0.15865525393145705) <=
        1e-15);
  CHECK(std::fabs(bayes_effective_level(TestSetup(0, 1, 1, 16)).value() -
                  0.022750131948179195) <= 1e-15);
  CHECK(std::fabs(oracle_upper_tail(2.0) - 0.022750131948179195) <= 1e-15);
  // theta1 -> theta0+ limit.
  CHECK(bayes_effective_level(TestSetup(0, 1e-300, 1, 4)).value() == 0.5);

  SECTION("monotone in n, separation and sigma") {
    double prev = 1.0;
    for (int n = 1; n <= 60; ++n) {
      const double level = bayes_effective_level(TestSetup(0, 1, 1, n)).value();
      CHECK(level < prev);
      prev = level;
    }
    prev = 1.0;
    for (double delta = 0.1; delta <= 6.0; delta += 0.1) {
      const double level = bayes_effective_level(TestSetup(0, delta, 1, 4)).value();
      CHECK(level < prev);
      prev = level;
    }
    prev = 0.0;
    for (double sigma = 0.1; sigma <= 6.0; sigma += 0.1) {
      const double level = bayes_effective_level(TestSetup(0, 1, sigma, 4)).value();
      CHECK(level > prev);
      prev = level;
    }
  }
}

TEST_CASE("bayes_risk", "[decision_rules]") {
  const TestSetup setup(0, 1, 1, 4);
  const double mid = bayes_threshold(setup);
  CHECK(std::fabs(bayes_risk(setup, mid).value() - 0.15865525393145705) <= 1e-15);
  CHECK(bayes_risk(setup, 1e6).value() == 0.5);
  CHECK(bayes_risk(setup, -1e6).value() == 0.5);

  // Oracle values for the neighbours, from the quadrature CDF.
  const auto oracle_risk = [](double c) {
    return static_cast<double>(0.5L * (1.0L - oracle::cdf(2.0L * c)) +
                               0.5L * oracle::cdf(2.0L * (c - 1.0L)));
  };
  CHECK(std::fabs(oracle_risk(0.4) - 0.16346253440255248) <= 1e-15);
  CHECK(std::fabs(bayes_risk(setup, 0.4).value() - oracle_risk(0.4)) <= 1e-14);
  CHECK(std::fabs(bayes_risk(setup, 0.6).value() - oracle_risk(0.6)) <= 1e-14);
  CHECK(bayes_risk(setup, mid).value() < bayes_risk(setup, mid - 0.1).value());
  CHECK(bayes_risk(setup, mid).value() < bayes_risk(setup, mid + 0.1).value());

  CHECK_THROWS_AS(bayes_risk(setup, INFINITY), domain_error);
}

TEST_CASE("bayes risk properties", "[decision_rules][property]") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> theta0_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> delta_dist(0.2, 3.0);
  std::uniform_real_distribution<double> sigma_dist(0.5, 3.0);
  std::uniform_int_distribution<int> n_dist(1, 30);
  for (int trial = 0; trial < 300; ++trial) {
    const double theta0 = theta0_dist(gen);
    const TestSetup setup(theta0, theta0 + delta_dist(gen), sigma_dist(gen), n_dist(gen));
    const double mid = bayes_threshold(setup);

    const ErrorTerms terms = bayes_error_terms(setup, mid);
    CHECK(std::fabs(terms.type1.value() - terms.type2.value()) <= 1e-12);
    CHECK(std::fabs(terms.type1.value() - bayes_effective_level(setup).value()) <= 1e-12);

    const double at_mid = bayes_risk(setup, mid).value();
    for (int k = 1; k <= 100; ++k) {
      const double offset = 0.01 * k;
      CHECK(at_mid < bayes_risk(setup, mid + offset).value());
      CHECK(at_mid < bayes_risk(setup, mid - offset).value());
    }
  }
}

TEST_CASE("matched level makes all three thresholds coincide", "[decision_rules][property]") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> theta0_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> delta_dist(0.05, 4.0);
  std::uniform_real_distribution<double> sigma_dist(0.2, 4.0);
  std::uniform_int_distribution<int> n_dist(1, 100);
  for (int trial = 0; trial < 500; ++trial) {
    const double theta0 = theta0_dist(gen);
    const TestSetup setup(theta0, theta0 + delta_dist(gen), sigma_dist(gen), n_dist(gen));
    const Probability alpha = bayes_effective_level(setup);
    if (!(alpha.value() > 1e-300)) {
      continue;
    }
    const double mid = bayes_threshold(setup);
    CHECK(std::fabs(np_reject_threshold(setup, alpha) - mid) <= 1e-10);
    CHECK(std::fabs(np_accept_h1_threshold(setup, alpha) - mid) <= 1e-10);
  }
}
