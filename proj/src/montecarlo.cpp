#include "cfnc/montecarlo.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <thread>

namespace cfnc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct TrialRecord {
  std::array<double, 4> rates{};
  bool local_rank_ok = true;
  bool proposed_failed = false;
};

MeanEstimate estimate(const std::vector<TrialRecord>& records, std::size_t slot) {
  const double n = static_cast<double>(records.size());
  double sum = 0.0;
  for (const auto& r : records) sum += r.rates[slot];
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& r : records) ss += (r.rates[slot] - mean) * (r.rates[slot] - mean);
  const double se = records.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se};
}

// Runs body(i) for i in [0, count) across workers.  Each i writes only its
// own slot, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t power_index, std::uint64_t trial) {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ power_index);
  key = splitmix64(key ^ trial);
  return std::mt19937_64(key);
}

ChannelRealization generate_realization(std::size_t relays, Power p, std::mt19937_64& rng,
                                        RateUnits units) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ChannelVector> channels;
  channels.reserve(relays);
  for (std::size_t m = 0; m < relays; ++m) {
    std::vector<double> h(relays);
    for (auto& v : h) v = normal(rng);
    channels.emplace_back(std::move(h), static_cast<int>(m));
  }
  return ChannelRealization(std::move(channels), p, units);
}

void ExperimentConfig::validate() const {
  if (relays < 1) throw std::invalid_argument("L must be at least 1");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (t_max < 1) throw std::invalid_argument("T_max must be at least 1");
  if (p_db.empty()) throw std::invalid_argument("at least one power value is required");
}

std::vector<AggregateRow> run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, [&cfg](std::size_t power_index, std::size_t trial, Power p) {
    auto rng = trial_stream(cfg.seed, power_index, trial);
    return generate_realization(cfg.relays, p, rng, cfg.units);
  });
}

std::vector<AggregateRow> run_experiment(const ExperimentConfig& cfg, const RealizationSource& source) {
  cfg.validate();
  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());

  bool local_enabled = false;
  for (Strategy s : cfg.strategies) local_enabled |= s == Strategy::local_opt;

  std::vector<AggregateRow> rows;
  rows.reserve(cfg.p_db.size());
  for (std::size_t pi = 0; pi < cfg.p_db.size(); ++pi) {
    const Power p = Power::from_db(cfg.p_db[pi]);
    std::vector<TrialRecord> records(cfg.trials);
    parallel_for(cfg.trials, workers, [&](std::size_t trial) {
      const ChannelRealization r = source(pi, trial, p);
      TrialRecord& rec = records[trial];
      for (Strategy s : cfg.strategies) {
        const StrategyResult res = evaluate_strategy(s, r, cfg.t_max, cfg.baseline);
        rec.rates[static_cast<std::size_t>(s)] = res.rate;
        if (s == Strategy::local_opt) rec.local_rank_ok = res.rank_ok;
        if (s == Strategy::proposed) rec.proposed_failed = !res.rank_ok;
      }
      if (!local_enabled) rec.local_rank_ok = rate_local_opt(r, cfg.baseline).rank_ok;
    });

    AggregateRow row;
    row.p_db = cfg.p_db[pi];
    row.trials = cfg.trials;
    for (Strategy s : cfg.strategies) row.rates[s] = estimate(records, static_cast<std::size_t>(s));
    std::size_t failures = 0;
    for (const auto& rec : records) {
      failures += rec.local_rank_ok ? 0 : 1;
      row.proposed_failures += rec.proposed_failed ? 1 : 0;
    }
    const double n = static_cast<double>(cfg.trials);
    row.rank_failure_probability = static_cast<double>(failures) / n;
    row.rank_failure_stderr =
        std::sqrt(row.rank_failure_probability * (1.0 - row.rank_failure_probability) / n);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cfnc
