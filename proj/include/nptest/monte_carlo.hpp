#pragma once

// Seeded simulation of the decision rules.
//
// Every replication draws from its own Philox counter block, addressed by
// (replication index, variate block, world). World 0 simulates data under
// theta0 and world 1 under theta1, so the two error rates come from disjoint
// substreams of one master seed. Because replications are addressed rather
// than generated sequentially, splitting them across lanes cannot change any
// draw, and the merged counts are identical for any lane count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "nptest/decision_rules.hpp"
#include "nptest/error.hpp"
#include "nptest/normal_kernel.hpp"
#include "nptest/philox.hpp"

namespace nptest {

inline constexpr std::int64_t kDefaultReps = 200000;
inline constexpr std::uint64_t kDefaultSeed = 42;

enum class SamplingMode {
  DirectMean,  // one N(0,1) variate scaled to N(theta, sigma^2 / n)
  FullSample,  // n variates from N(theta, sigma^2), averaged
};

enum class SimulatedRule { NeymanPearson, Bayes };

inline std::string_view to_string(SamplingMode m) {
  return m == SamplingMode::DirectMean ? "direct" : "full";
}

inline std::string_view to_string(SimulatedRule r) {
  return r == SimulatedRule::NeymanPearson ? "np" : "bayes";
}

struct SimulationConfig {
  std::int64_t reps = kDefaultReps;
  std::uint64_t seed = kDefaultSeed;
  SamplingMode sampling_mode = SamplingMode::DirectMean;
  int lanes = 1;  // worker threads; results do not depend on this

  void validate() const {
    if (reps < 1) {
      throw contract_error("simulation needs at least one replication");
    }
    if (lanes < 1) {
      throw contract_error("simulation needs at least one lane");
    }
  }
};

/// Identifies the hypothesis under which data are simulated.
enum class World : std::uint32_t { Null = 0, Alternative = 1 };

/// Standard normal variates for one (seed, world, replication) triple.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, World world, std::uint64_t replication) noexcept
      : gen_(seed),
        rep_lo_(static_cast<std::uint32_t>(replication)),
        rep_hi_(static_cast<std::uint32_t>(replication >> 32)),
        world_(static_cast<std::uint32_t>(world)) {}

  /// Next N(0, 1) variate, by inversion of a uniform on (0, 1).
  double next() { return std_normal_quantile(Probability{next_uniform()}).value(); }

  double next_uniform() noexcept {
    if (pending_ == 0) {
      block_ = gen_({rep_lo_, rep_hi_, next_block_++, world_});
      pending_ = 2;
    }
    const std::size_t at = 2 - pending_--;
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(block_[2 * at]) << 32) | block_[2 * at + 1];
    return open_unit_interval(bits);
  }

 private:
  Philox4x32 gen_;
  std::uint32_t rep_lo_;
  std::uint32_t rep_hi_;
  std::uint32_t world_;
  std::uint32_t next_block_ = 0;
  Philox4x32::Counter block_{};
  int pending_ = 0;
};

/// One realisation of the sample mean of n draws from N(theta, sigma^2).
inline double draw_sample_mean(double theta, const TestSetup& setup, SamplingMode mode,
                               NormalStream& stream) {
  if (mode == SamplingMode::DirectMean) {
    return theta + setup.mean_scale() * stream.next();
  }
  double sum = 0.0;
  for (int i = 0; i < setup.n(); ++i) {
    sum += theta + setup.sigma() * stream.next();
  }
  return sum / static_cast<double>(setup.n());
}

struct EmpiricalReport {
  SimulatedRule rule;
  double threshold;  // cutoff used: reject H0 iff xbar >= threshold
  Probability type1_rate;
  Probability type2_rate;
  double type1_stderr;
  double type2_stderr;
  std::int64_t reps;
  std::uint64_t seed;
  SamplingMode sampling_mode;

  bool operator==(const EmpiricalReport&) const = default;
};

/// sqrt(rate (1 - rate) / reps).
inline double binomial_stderr(double rate, std::int64_t reps) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

namespace detail {

// Runs body(begin, end) over contiguous chunks of [0, reps) and returns the
// per-chunk results in chunk order.
template <typename Result, typename Body>
std::vector<Result> run_lanes(std::int64_t reps, int lanes, Body body) {
  const std::int64_t n_lanes = std::clamp<std::int64_t>(lanes, 1, reps);
  std::vector<Result> results(static_cast<std::size_t>(n_lanes));
  const auto chunk_begin = [&](std::int64_t lane) { return reps * lane / n_lanes; };
  if (n_lanes == 1) {
    results[0] = body(std::int64_t{0}, reps);
    return results;
  }
  std::vector<std::jthread> workers;
  workers.reserve(static_cast<std::size_t>(n_lanes));
  for (std::int64_t lane = 0; lane < n_lanes; ++lane) {
    workers.emplace_back([&, lane] {
      results[static_cast<std::size_t>(lane)] = body(chunk_begin(lane), chunk_begin(lane + 1));
    });
  }
  workers.clear();  // joins
  return results;
}

inline std::vector<double> simulate_means(const TestSetup& setup, World world,
                                          const SimulationConfig& config) {
  const double theta = world == World::Null ? setup.theta0() : setup.theta1();
  std::vector<double> means(static_cast<std::size_t>(config.reps));
  run_lanes<int>(config.reps, config.lanes, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      NormalStream stream(config.seed, world, static_cast<std::uint64_t>(r));
      means[static_cast<std::size_t>(r)] =
          draw_sample_mean(theta, setup, config.sampling_mode, stream);
    }
    return 0;
  });
  return means;
}

inline std::int64_t count_at_or_above(const TestSetup& setup, World world, double threshold,
                                      const SimulationConfig& config) {
  const double theta = world == World::Null ? setup.theta0() : setup.theta1();
  const auto partial = run_lanes<std::int64_t>(
      config.reps, config.lanes, [&](std::int64_t begin, std::int64_t end) {
        std::int64_t hits = 0;
        for (std::int64_t r = begin; r < end; ++r) {
          NormalStream stream(config.seed, world, static_cast<std::uint64_t>(r));
          if (draw_sample_mean(theta, setup, config.sampling_mode, stream) >= threshold) {
            ++hits;
          }
        }
        return hits;
      });
  std::int64_t total = 0;
  for (const auto h : partial) {
    total += h;
  }
  return total;
}

}  // namespace detail

/// Empirical Type I and Type II error rates of the chosen rule. alpha is
/// required for the Neyman-Pearson rule and ignored for the Bayes rule.
inline EmpiricalReport estimate_error_rates(const TestSetup& setup,
                                            std::optional<Probability> alpha, SimulatedRule rule,
                                            const SimulationConfig& config) {
  config.validate();
  double threshold = 0.0;
  if (rule == SimulatedRule::NeymanPearson) {
    if (!alpha) {
      throw contract_error("the Neyman-Pearson rule needs a significance level");
    }
    threshold = np_reject_threshold(setup, *alpha);
  } else {
    threshold = bayes_threshold(setup);
  }

  const auto rejections = detail::count_at_or_above(setup, World::Null, threshold, config);
  const auto alt_rejections =
      detail::count_at_or_above(setup, World::Alternative, threshold, config);
  const double reps = static_cast<double>(config.reps);
  const double type1 = static_cast<double>(rejections) / reps;
  const double type2 = static_cast<double>(config.reps - alt_rejections) / reps;

  return {rule,
          threshold,
          Probability{type1},
          Probability{type2},
          binomial_stderr(type1, config.reps),
          binomial_stderr(type2, config.reps),
          config.reps,
          config.seed,
          config.sampling_mode};
}

struct RiskPoint {
  double threshold;
  double risk;
  double standard_error;

  bool operator==(const RiskPoint&) const = default;
};

/// Empirical equal-prior 0-1 risk of "reject H0 iff xbar >= c" for each c.
/// One set of draws per world is shared by every threshold (common random
/// numbers), so differences between thresholds carry little noise.
inline std::vector<RiskPoint> empirical_bayes_risk_scan(const TestSetup& setup,
                                                        const std::vector<double>& thresholds,
                                                        const SimulationConfig& config) {
  config.validate();
  if (thresholds.empty()) {
    throw contract_error("risk scan needs at least one threshold");
  }
  for (const double c : thresholds) {
    detail::require_finite(c, "threshold");
  }

  auto null_means = detail::simulate_means(setup, World::Null, config);
  auto alt_means = detail::simulate_means(setup, World::Alternative, config);
  std::sort(null_means.begin(), null_means.end());
  std::sort(alt_means.begin(), alt_means.end());

  const double reps = static_cast<double>(config.reps);
  std::vector<RiskPoint> out;
  out.reserve(thresholds.size());
  for (const double c : thresholds) {
    const auto null_below = std::lower_bound(null_means.begin(), null_means.end(), c);
    const auto alt_below = std::lower_bound(alt_means.begin(), alt_means.end(), c);
    const double type1 = static_cast<double>(null_means.end() - null_below) / reps;
    const double type2 = static_cast<double>(alt_below - alt_means.begin()) / reps;
    const double var = 0.25 * (type1 * (1.0 - type1) + type2 * (1.0 - type2)) / reps;
    out.push_back({c, 0.5 * type1 + 0.5 * type2, std::sqrt(var)});
  }
  return out;
}

}  // namespace nptest
