#pragma once

// Per-realization destination rate for the four relaying strategies.

#include "cfnc/nc_builder.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfnc {

enum class Strategy { df_noise, round_h, local_opt, proposed };

inline constexpr Strategy kAllStrategies[] = {Strategy::df_noise, Strategy::round_h,
                                              Strategy::local_opt, Strategy::proposed};

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& text);

/// Channels of all L relays for one transmission realization.
struct ChannelRealization {
  std::vector<ChannelVector> channels;  // row m = h_m
  Power power = Power::from_linear(1.0);
  RateUnits units = RateUnits::bits;

  ChannelRealization(std::vector<ChannelVector> channels, Power power, RateUnits units);
  std::size_t size() const { return channels.size(); }
};

struct StrategyResult {
  Strategy strategy = Strategy::proposed;
  double rate = 0.0;
  bool rank_ok = false;
  std::optional<SystemMatrix> matrix;
};

struct BaselineOptions {
  /// Destination rate charged when the system matrix is singular.
  double rank_failure_rate = 0.0;
};

/// Relay m decodes source m and treats the rest as noise (A = I).
StrategyResult rate_df_noise(const ChannelRealization& r);

/// a_m = round(h_m), half away from zero.
StrategyResult rate_round_h(const ChannelRealization& r, const BaselineOptions& options = {});

/// Each relay keeps its own best vector.
StrategyResult rate_local_opt(const ChannelRealization& r, const BaselineOptions& options = {});

/// Candidate tables per relay followed by max-min matrix construction.
StrategyResult rate_proposed(const ChannelRealization& r, std::size_t t_max);

StrategyResult evaluate_strategy(Strategy s, const ChannelRealization& r, std::size_t t_max,
                                 const BaselineOptions& options = {});

}  // namespace cfnc
