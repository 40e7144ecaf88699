#pragma once

// Three-relay reference instance (L = 3, P = 10 dB, T_max = 5, natural-log
// rates) with its expected candidate tables and system matrices.

#include "cfnc/baselines.hpp"

#include <array>
#include <vector>

namespace cfnc::worked_example {

inline constexpr double kPowerDb = 10.0;
inline constexpr std::size_t kTmax = 5;
inline constexpr RateUnits kUnits = RateUnits::nats;
inline constexpr double kTolerance = 1e-3;

inline const std::vector<std::vector<double>>& channels() {
  static const std::vector<std::vector<double>> h = {
      {0.9730, 0.4674, 0.5103},
      {-1.7291, 0.7166, -0.5856},
      {-0.3912, 1.4407, -0.8115},
  };
  return h;
}

struct ReferenceTable {
  std::vector<CodingVector> vectors;
  std::array<double, 5> rates;
};

inline const std::vector<ReferenceTable>& reference_tables() {
  static const std::vector<ReferenceTable> t = {
      {{{1, 0, 0}, {2, 1, 1}, {1, 1, 1}, {1, 0, 1}, {1, 1, 0}},
       {0.4846, 0.4620, 0.3408, 0.2918, 0.2231}},
      {{{1, 0, 0}, {2, -1, 1}, {3, -1, 1}, {-1, 1, 0}, {-2, 1, 0}},
       {0.7087, 0.6785, 0.5572, 0.3625, 0.2694}},
      {{{0, -1, 1}, {0, 1, 0}, {1, -2, 1}, {0, -2, 1}, {1, -3, 2}},
       {0.5987, 0.5935, 0.4384, 0.4165, 0.2902}},
  };
  return t;
}

/// Rows of the locally optimized (singular) matrix.
inline const std::vector<CodingVector>& local_matrix() {
  static const std::vector<CodingVector> a = {{1, 0, 0}, {1, 0, 0}, {0, -1, 1}};
  return a;
}

/// Rows of the max-min full-rank matrix.
inline const std::vector<CodingVector>& proposed_matrix() {
  static const std::vector<CodingVector> a = {{1, 0, 0}, {2, -1, 1}, {0, 1, 0}};
  return a;
}

inline constexpr double kBottleneckRate = 0.4846;
/// Fourth value of the global rate order; not achievable since relay 1 has
/// no vector that good.
inline constexpr double kGamma4 = 0.5935;
inline constexpr std::array<double, 6> kLeadingGammas = {0.7087, 0.6785, 0.5987,
                                                         0.5935, 0.5572, 0.4846};

inline ChannelRealization realization() {
  std::vector<ChannelVector> hs;
  for (std::size_t m = 0; m < channels().size(); ++m) {
    hs.emplace_back(channels()[m], static_cast<int>(m));
  }
  return ChannelRealization(std::move(hs), Power::from_db(kPowerDb), kUnits);
}

}  // namespace cfnc::worked_example
