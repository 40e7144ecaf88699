#pragma once

// Seeded Monte Carlo over i.i.d. N(0,1) channel realizations.

#include "cfnc/baselines.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace cfnc {

/// Engine for one trial.  The seed is a hash of (seed, power index, trial
/// index) so results do not depend on which worker runs the trial.
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t power_index, std::uint64_t trial);

/// L x L matrix of standard-normal gains; row m is h_m.
ChannelRealization generate_realization(std::size_t relays, Power p, std::mt19937_64& rng,
                                        RateUnits units = RateUnits::bits);

struct ExperimentConfig {
  std::size_t relays = 3;  // L
  std::vector<double> p_db{0.0};
  std::size_t trials = 10000;
  std::size_t t_max = 5;
  std::uint64_t seed = 1;
  RateUnits units = RateUnits::bits;
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  BaselineOptions baseline;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct AggregateRow {
  double p_db = 0.0;
  std::size_t trials = 0;
  std::map<Strategy, MeanEstimate> rates;  // only enabled strategies
  /// Fraction of trials whose locally optimized matrix is singular.
  double rank_failure_probability = 0.0;
  double rank_failure_stderr = 0.0;
  std::size_t proposed_failures = 0;  // builder found no full-rank matrix
};

/// Supplies the realization for (power index, trial); used to inject fixtures.
using RealizationSource =
    std::function<ChannelRealization(std::size_t power_index, std::size_t trial, Power p)>;

std::vector<AggregateRow> run_experiment(const ExperimentConfig& cfg);
std::vector<AggregateRow> run_experiment(const ExperimentConfig& cfg, const RealizationSource& source);

}  // namespace cfnc
