#include "cfnc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfnc {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::df_noise: return "df_noise";
    case Strategy::round_h: return "round_h";
    case Strategy::local_opt: return "local_opt";
    case Strategy::proposed: return "proposed";
  }
  return "?";
}

Strategy parse_strategy(const std::string& text) {
  for (Strategy s : kAllStrategies) {
    if (text == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown strategy '" + text + "'");
}

ChannelRealization::ChannelRealization(std::vector<ChannelVector> channels_in, Power power_in,
                                       RateUnits units_in)
    : channels(std::move(channels_in)), power(power_in), units(units_in) {
  if (channels.empty()) throw std::invalid_argument("realization needs at least one relay");
  for (const auto& h : channels) {
    if (h.size() != channels.size()) throw std::invalid_argument("each channel vector must have length L");
  }
}

namespace {

StrategyResult from_matrix(Strategy s, const ChannelRealization& r, SystemMatrix a,
                           const BaselineOptions& options) {
  StrategyResult out{s, options.rank_failure_rate, a.full_rank(), std::nullopt};
  if (out.rank_ok) {
    double rate = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < r.size(); ++m) {
      rate = std::min(rate, computation_rate(r.channels[m], a.row(m), r.power, r.units));
    }
    out.rate = rate;
  }
  out.matrix = std::move(a);
  return out;
}

}  // namespace

StrategyResult rate_df_noise(const ChannelRealization& r) {
  const double p = r.power.linear();
  double rate = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < r.size(); ++m) {
    const auto& h = r.channels[m];
    const double signal = h[m] * h[m];
    const double interference = h.squared_norm() - signal;
    const double sinr = p * signal / (1.0 + p * interference);
    const double bits = 0.5 * std::log2(1.0 + sinr);
    rate = std::min(rate, r.units == RateUnits::bits ? bits : bits * std::log(2.0));
  }
  return {Strategy::df_noise, rate, true, SystemMatrix::identity(r.size())};
}

StrategyResult rate_round_h(const ChannelRealization& r, const BaselineOptions& options) {
  std::vector<CodingVector> rows;
  for (const auto& h : r.channels) {
    std::vector<CodingVector::value_type> a(h.size());
    std::transform(h.entries().begin(), h.entries().end(), a.begin(),
                   [](double v) { return static_cast<CodingVector::value_type>(std::round(v)); });
    if (std::all_of(a.begin(), a.end(), [](auto v) { return v == 0; })) {
      return {Strategy::round_h, options.rank_failure_rate, false, std::nullopt};
    }
    rows.emplace_back(std::move(a));
  }
  return from_matrix(Strategy::round_h, r, SystemMatrix(std::move(rows)), options);
}

StrategyResult rate_local_opt(const ChannelRealization& r, const BaselineOptions& options) {
  std::vector<CodingVector> rows;
  for (const auto& h : r.channels) rows.push_back(candidate_set(h, r.power, 1, r.units).vectors.front());
  return from_matrix(Strategy::local_opt, r, SystemMatrix(std::move(rows)), options);
}

StrategyResult rate_proposed(const ChannelRealization& r, std::size_t t_max) {
  std::vector<CandidateTable> tables;
  tables.reserve(r.size());
  for (const auto& h : r.channels) tables.push_back(candidate_set(h, r.power, t_max, r.units));
  auto outcome = construct_system_matrix(tables);
  if (!outcome) return {Strategy::proposed, 0.0, false, std::nullopt};
  return {Strategy::proposed, outcome->bottleneck_rate, true, std::move(outcome->matrix)};
}

StrategyResult evaluate_strategy(Strategy s, const ChannelRealization& r, std::size_t t_max,
                                 const BaselineOptions& options) {
  switch (s) {
    case Strategy::df_noise: return rate_df_noise(r);
    case Strategy::round_h: return rate_round_h(r, options);
    case Strategy::local_opt: return rate_local_opt(r, options);
    case Strategy::proposed: return rate_proposed(r, t_max);
  }
  throw std::invalid_argument("unknown strategy");
}

}  // namespace cfnc
