#pragma once

// Command-line front end. Every command prints one envelope
//   {"command", "version", "inputs", "results"}
// as JSON (default) or CSV on stdout; diagnostics go to stderr.
//
// Exit codes: 0 success, 2 usage or parse error, 3 domain error.

#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nptest/nptest.hpp"

namespace nptest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

using Json = nlohmann::ordered_json;

/// Argument combinations CLI11 cannot express (e.g. --alpha required only for --rule np).
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_scalar(const Json& v) {
  if (v.is_number_float()) {
    return format_number(v.get<double>());
  }
  if (v.is_string()) {
    return v.get<std::string>();
  }
  return v.dump();
}

inline void flatten(const Json& node, const std::string& prefix, std::ostream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten(node[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out << prefix << ',' << format_scalar(node) << '\n';
  }
}

// Table-shaped results go out as a header row plus data rows, preceded by
// "# key,value" lines carrying the rest of the envelope.
inline void write_csv(const Json& envelope, const Json* table, std::ostream& out) {
  if (table == nullptr) {
    out << "key,value\n";
    flatten(envelope, "", out);
    return;
  }
  std::ostringstream meta;
  flatten(envelope, "", meta);
  std::istringstream lines(meta.str());
  for (std::string line; std::getline(lines, line);) {
    out << "# " << line << '\n';
  }
  const auto& rows = *table;
  if (rows.empty()) {
    return;
  }
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [_, value] : row.items()) {
      out << (first ? "" : ",") << format_scalar(value);
      first = false;
    }
    out << '\n';
  }
}

struct SetupArgs {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double sigma = 0.0;
  int n = 0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--theta0", theta0, "Null mean theta0")->required();
    cmd.add_option("--theta1", theta1, "Alternative mean theta1 (> theta0)")->required();
    cmd.add_option("--sigma", sigma, "Known standard deviation (> 0)")->required();
    cmd.add_option("--n", n, "Sample size (>= 1)")->required();
  }

  [[nodiscard]] TestSetup build() const { return TestSetup(theta0, theta1, sigma, n); }

  [[nodiscard]] Json echo() const {
    return Json{{"theta0", theta0}, {"theta1", theta1}, {"sigma", sigma}, {"n", n}};
  }
};

struct DecideArgs {
  SetupArgs setup;
  double alpha = 0.0;
  double xbar = 0.0;
};

struct DualityArgs {
  SetupArgs setup;
  double alpha = 0.0;
  double tolerance = kDefaultDualityTolerance;
};

struct SimulateArgs {
  SetupArgs setup;
  std::string rule;
  std::optional<double> alpha;
  std::int64_t reps = kDefaultReps;
  std::uint64_t seed = kDefaultSeed;
  std::string mode = "direct";
  int lanes = 1;
  std::vector<double> scan_thresholds;
};

struct PowerCurveArgs {
  SetupArgs setup;
  double alpha = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  int steps = 0;
};

inline Json envelope(const char* command, Json inputs, Json results) {
  return Json{{"command", command},
              {"version", kVersion},
              {"inputs", std::move(inputs)},
              {"results", std::move(results)}};
}

inline Json run_decide(const DecideArgs& a) {
  const TestSetup setup = a.setup.build();
  const Probability alpha{a.alpha};
  const SampleSummary sample(a.xbar, setup.n());

  const Decision np = np_decide(sample, setup, alpha, NpForm::RejectH0Form);
  const Decision np_h1 = np_decide(sample, setup, alpha, NpForm::AcceptH1Form);
  const Decision bayes = bayes_decide(sample, setup);
  const DualityReport duality = analyze_duality(setup, alpha);

  Json inputs = a.setup.echo();
  inputs["alpha"] = a.alpha;
  inputs["xbar"] = a.xbar;
  inputs["tolerance"] = duality.tolerance;

  Json results{
      {"thresholds",
       {{"np_reject_h0", np.threshold}, {"np_accept_h1", np_h1.threshold}, {"bayes", bayes.threshold}}},
      {"verdicts",
       {{"np_reject_h0_form", to_string(np.outcome)},
        {"np_accept_h1_form", to_string(np_h1.outcome)},
        {"bayes", to_string(bayes.outcome)}}},
      {"duality_classification", to_string(duality.classification)},
      {"bayes_effective_level", bayes_effective_level(setup).value()}};
  return envelope("decide", std::move(inputs), std::move(results));
}

inline Json run_duality(const DualityArgs& a) {
  const TestSetup setup = a.setup.build();
  const Probability alpha{a.alpha};
  const DualityReport report = analyze_duality(setup, alpha, a.tolerance);
  const MatchedAlternative matched =
      matched_theta1(setup.theta0(), setup.sigma(), setup.n(), alpha);

  Json inputs = a.setup.echo();
  inputs["alpha"] = a.alpha;
  inputs["tolerance"] = a.tolerance;

  Json results{{"classification", to_string(report.classification)},
               {"gap", report.gap},
               {"t1", report.t1},
               {"t2", report.t2},
               {"tolerance", report.tolerance},
               {"consistency_gap", consistency_gap(setup, alpha)},
               {"matched_theta1", matched.theta1},
               {"matched_theta1_degenerate", matched.degenerate},
               {"matched_alpha", matched_alpha(setup).value()}};
  return envelope("duality", std::move(inputs), std::move(results));
}

inline Json run_simulate(const SimulateArgs& a) {
  const SimulatedRule rule = a.rule == "np" ? SimulatedRule::NeymanPearson : SimulatedRule::Bayes;
  if (rule == SimulatedRule::NeymanPearson && !a.alpha) {
    throw usage_error("--alpha is required with --rule np");
  }
  const TestSetup setup = a.setup.build();
  std::optional<Probability> alpha;
  if (a.alpha) {
    alpha = Probability{*a.alpha};
  }

  SimulationConfig config;
  config.reps = a.reps;
  config.seed = a.seed;
  config.sampling_mode = a.mode == "full" ? SamplingMode::FullSample : SamplingMode::DirectMean;
  config.lanes = a.lanes;

  const EmpiricalReport report = estimate_error_rates(setup, alpha, rule, config);

  Json inputs = a.setup.echo();
  inputs["rule"] = a.rule;
  inputs["alpha"] = a.alpha ? Json(*a.alpha) : Json(nullptr);
  inputs["reps"] = a.reps;
  inputs["seed"] = a.seed;
  inputs["mode"] = to_string(config.sampling_mode);
  inputs["lanes"] = a.lanes;
  inputs["scan_thresholds"] = a.scan_thresholds;

  Json results{{"rule", to_string(report.rule)},
               {"threshold", report.threshold},
               {"type1_rate", report.type1_rate.value()},
               {"type2_rate", report.type2_rate.value()},
               {"type1_stderr", report.type1_stderr},
               {"type2_stderr", report.type2_stderr},
               {"reps", report.reps},
               {"seed", report.seed}};
  if (rule == SimulatedRule::Bayes) {
    results["analytic_type1"] = bayes_effective_level(setup).value();
  } else {
    results["analytic_type1"] = power(setup, *alpha, setup.theta0()).value();
  }
  if (!a.scan_thresholds.empty()) {
    Json rows = Json::array();
    for (const RiskPoint& p : empirical_bayes_risk_scan(setup, a.scan_thresholds, config)) {
      rows.push_back({{"threshold", p.threshold},
                      {"risk", p.risk},
                      {"standard_error", p.standard_error},
                      {"analytic_risk", bayes_risk(setup, p.threshold).value()}});
    }
    results["risk_scan"] = std::move(rows);
  }
  return envelope("simulate", std::move(inputs), std::move(results));
}

inline Json run_power_curve(const PowerCurveArgs& a) {
  if (a.theta_min > a.theta_max) {
    throw usage_error("--theta-min must not exceed --theta-max");
  }
  if (a.steps == 1 && a.theta_min != a.theta_max) {
    throw usage_error("--steps 1 needs --theta-min equal to --theta-max");
  }
  const TestSetup setup = a.setup.build();
  const Probability alpha{a.alpha};

  Json rows = Json::array();
  for (int i = 0; i < a.steps; ++i) {
    const double theta =
        i == a.steps - 1 ? a.theta_max
                         : a.theta_min + (a.theta_max - a.theta_min) * i / (a.steps - 1);
    rows.push_back({{"theta", theta}, {"power", power(setup, alpha, theta).value()}});
  }

  Json inputs = a.setup.echo();
  inputs["alpha"] = a.alpha;
  inputs["theta_min"] = a.theta_min;
  inputs["theta_max"] = a.theta_max;
  inputs["steps"] = a.steps;
  return envelope("power-curve", std::move(inputs),
                  Json{{"threshold", np_reject_threshold(setup, alpha)}, {"rows", std::move(rows)}});
}

}  // namespace detail

/// Parses argv, runs the selected command and writes its envelope to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Most powerful and Bayes tests for a normal mean with known variance", "nptest"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::string format = "json";
  app.add_option("--format", format, "Output format (default json)")
      ->check(CLI::IsMember({"json", "csv"}));

  detail::DecideArgs decide;
  auto* decide_cmd = app.add_subcommand("decide", "Apply all three rules to one observed mean");
  decide.setup.attach(*decide_cmd);
  decide_cmd->add_option("--alpha", decide.alpha, "Significance level in (0, 1)")->required();
  decide_cmd->add_option("--xbar", decide.xbar, "Observed sample mean")->required();

  detail::DualityArgs duality;
  auto* duality_cmd =
      app.add_subcommand("duality", "Classify whether rejecting H0 and accepting H1 coincide");
  duality.setup.attach(*duality_cmd);
  duality_cmd->add_option("--alpha", duality.alpha, "Significance level in (0, 1)")->required();
  duality_cmd->add_option("--tolerance", duality.tolerance, "Equivalence tolerance on the gap")
      ->capture_default_str();

  detail::SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo error rates of a rule");
  simulate.setup.attach(*simulate_cmd);
  simulate_cmd->add_option("--rule", simulate.rule, "np or bayes")
      ->required()
      ->check(CLI::IsMember({"np", "bayes"}));
  simulate_cmd->add_option("--alpha", simulate.alpha, "Significance level (np rule only)");
  simulate_cmd->add_option("--reps", simulate.reps, "Replications per hypothesis")
      ->check(CLI::Range(std::int64_t{1}, std::numeric_limits<std::int64_t>::max()))
      ->capture_default_str();
  simulate_cmd->add_option("--seed", simulate.seed, "Master seed")->capture_default_str();
  simulate_cmd->add_option("--mode", simulate.mode, "direct or full")
      ->check(CLI::IsMember({"direct", "full"}))
      ->capture_default_str();
  simulate_cmd->add_option("--lanes", simulate.lanes, "Worker threads (output is unaffected)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate_cmd
      ->add_option("--scan-thresholds", simulate.scan_thresholds,
                   "Comma-separated cutoffs for an empirical Bayes-risk scan")
      ->delimiter(',');

  detail::PowerCurveArgs curve;
  auto* curve_cmd =
      app.add_subcommand("power-curve", "Rejection probability of the level-alpha test over theta");
  curve.setup.attach(*curve_cmd);
  curve_cmd->add_option("--alpha", curve.alpha, "Significance level in (0, 1)")->required();
  curve_cmd->add_option("--theta-min", curve.theta_min, "Smallest theta")->required();
  curve_cmd->add_option("--theta-max", curve.theta_max, "Largest theta")->required();
  curve_cmd->add_option("--steps", curve.steps, "Number of grid points")
      ->required()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "nptest: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    Json result;
    const Json* table = nullptr;
    if (decide_cmd->parsed()) {
      result = detail::run_decide(decide);
    } else if (duality_cmd->parsed()) {
      result = detail::run_duality(duality);
    } else if (simulate_cmd->parsed()) {
      result = detail::run_simulate(simulate);
      if (result["results"].contains("risk_scan")) {
        table = &result["results"]["risk_scan"];
      }
    } else {
      result = detail::run_power_curve(curve);
      table = &result["results"]["rows"];
    }

    result["inputs"]["format"] = format;
    if (format == "csv") {
      Json meta = result;
      if (table != nullptr) {
        // Drop the table from the metadata block; it is written as rows.
        Json rows = *table;
        auto& results = meta["results"];
        results.erase(results.contains("rows") ? "rows" : "risk_scan");
        detail::write_csv(meta, &rows, out);
      } else {
        detail::write_csv(meta, nullptr, out);
      }
    } else {
      out << result.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const usage_error& e) {
    err << "nptest: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "nptest: " << e.what() << '\n';
    return kExitDomain;
  } catch (const contract_error& e) {
    err << "nptest: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace nptest::cli
