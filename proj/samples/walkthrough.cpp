// Walks through the library on one setup: H0 theta = 0 against H1 theta = 1,
// unit variance, four observations per sample.

#include <iomanip>
#include <iostream>

#include "nptest/nptest.hpp"

int main() {
  using namespace nptest;

  const TestSetup setup(0.0, 1.0, 1.0, 4);
  const Probability alpha{0.05};
  const SampleSummary sample(0.9, 4);

  std::cout << std::fixed << std::setprecision(6);
  std::cout << "nptest " << kVersion << "\n\n";

  const Decision np = np_decide(sample, setup, alpha, NpForm::RejectH0Form);
  const Decision bayes = bayes_decide(sample, setup);
  std::cout << "xbar = " << sample.xbar() << "\n"
            << "  Neyman-Pearson: " << to_string(np.outcome) << " (threshold " << np.threshold
            << ")\n"
            << "  Bayes:          " << to_string(bayes.outcome) << " (threshold "
            << bayes.threshold << ")\n\n";

  std::cout << "power at theta1        = " << power(setup, alpha, 1.0).value() << "\n"
            << "Bayes effective level  = " << bayes_effective_level(setup).value() << "\n\n";

  const DualityReport report = analyze_duality(setup, alpha);
  const MatchedAlternative matched = matched_theta1(0.0, 1.0, 4, alpha);
  std::cout << "duality: " << to_string(report.classification) << ", gap " << report.gap << "\n"
            << "theta1 at which both rules coincide = " << matched.theta1 << "\n\n";

  SimulationConfig config;
  config.reps = 100000;
  const EmpiricalReport mc =
      estimate_error_rates(setup, alpha, SimulatedRule::NeymanPearson, config);
  std::cout << std::setprecision(4) << "simulated NP type I  = " << mc.type1_rate.value()
            << " +/- " << mc.type1_stderr << "\n"
            << "simulated NP type II = " << mc.type2_rate.value() << " +/- " << mc.type2_stderr
            << "\n";
  return 0;
}
