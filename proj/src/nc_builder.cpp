#include "cfnc/nc_builder.hpp"

#include <algorithm>

namespace cfnc {

namespace {

using Wide = __int128;

// Bareiss elimination on an n x n row-major matrix.  Each division is exact.
// Returns false if a Wide intermediate would overflow.
template <typename Int>
bool bareiss(std::vector<Int>& m, std::size_t n, Int& det) {
  auto at = [&](std::size_t i, std::size_t j) -> Int& { return m[i * n + j]; };
  int sign = 1;
  Int previous = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) {
        det = 0;
        return true;
      }
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        if constexpr (std::is_same_v<Int, Wide>) {
          Wide lhs, rhs, diff;
          if (__builtin_mul_overflow(at(i, j), at(k, k), &lhs) ||
              __builtin_mul_overflow(at(i, k), at(k, j), &rhs) ||
              __builtin_sub_overflow(lhs, rhs, &diff)) {
            return false;
          }
          at(i, j) = diff / previous;
        } else {
          at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / previous;
        }
      }
      at(i, k) = 0;
    }
    previous = at(k, k);
  }
  det = n == 0 ? Int(1) : at(n - 1, n - 1);
  if (sign < 0) det = -det;
  return true;
}

BigInt to_big(Wide v) {
  const bool negative = v < 0;
  // Two's-complement safe magnitude via unsigned arithmetic.
  unsigned __int128 mag = negative ? ~static_cast<unsigned __int128>(v) + 1 : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return negative ? BigInt(-out) : out;
}

}  // namespace

BigInt exact_determinant(const std::vector<CodingVector>& rows) {
  const std::size_t n = rows.size();
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("determinant needs a square matrix");
  }
  std::vector<Wide> wide(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) wide[i * n + j] = rows[i][j];
  }
  Wide det_wide = 0;
  if (bareiss(wide, n, det_wide)) return to_big(det_wide);

  std::vector<BigInt> big(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) big[i * n + j] = rows[i][j];
  }
  BigInt det_big;
  bareiss(big, n, det_big);
  return det_big;
}

SystemMatrix::SystemMatrix(std::vector<CodingVector> rows)
    : rows_(std::move(rows)), det_(exact_determinant(rows_)) {}

SystemMatrix SystemMatrix::identity(std::size_t n) {
  std::vector<CodingVector> rows;
  rows.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<CodingVector::value_type> e(n, 0);
    e[m] = 1;
    rows.emplace_back(std::move(e));
  }
  return SystemMatrix(std::move(rows));
}

std::vector<GlobalRateEntry> global_rate_order(const std::vector<CandidateTable>& tables) {
  std::vector<GlobalRateEntry> entries;
  for (std::size_t m = 0; m < tables.size(); ++m) {
    for (std::size_t n = 0; n < tables[m].rates.size(); ++n) {
      entries.push_back({tables[m].rates[n], m, n});
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const GlobalRateEntry& a, const GlobalRateEntry& b) { return a.rate > b.rate; });
  return entries;
}

std::vector<std::vector<CodingVector>> cut_sets(const GlobalRateEntry& entry,
                                                const std::vector<CandidateTable>& tables) {
  std::vector<std::vector<CodingVector>> cuts(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    if (i == entry.relay) {
      cuts[i].push_back(t.vectors.at(entry.index));
      continue;
    }
    for (std::size_t n = 0; n < t.rates.size() && t.rates[n] >= entry.rate; ++n) {
      cuts[i].push_back(t.vectors[n]);
    }
  }
  return cuts;
}

namespace {

// Odometer over the product of the cut sets, last relay varying fastest.
std::optional<std::vector<std::size_t>> first_full_rank_indices(
    const std::vector<std::vector<CodingVector>>& cuts) {
  const std::size_t n = cuts.size();
  if (n == 0) return std::nullopt;
  for (const auto& c : cuts) {
    if (c.empty()) return std::nullopt;
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<CodingVector> rows(n);
  for (;;) {
    for (std::size_t m = 0; m < n; ++m) rows[m] = cuts[m][idx[m]];
    if (exact_determinant(rows) != 0) return idx;
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < cuts[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return std::nullopt;
    }
  }
}

}  // namespace

std::optional<SystemMatrix> find_full_rank(const std::vector<std::vector<CodingVector>>& cuts) {
  const auto idx = first_full_rank_indices(cuts);
  if (!idx) return std::nullopt;
  std::vector<CodingVector> rows;
  rows.reserve(cuts.size());
  for (std::size_t m = 0; m < cuts.size(); ++m) rows.push_back(cuts[m][(*idx)[m]]);
  return SystemMatrix(std::move(rows));
}

std::optional<BuildOutcome> construct_system_matrix(const std::vector<CandidateTable>& tables,
                                                    const BuildOptions& options,
                                                    std::vector<GammaCheck>* trace) {
  const std::size_t relays = tables.size();
  if (relays == 0) throw std::invalid_argument("no candidate tables");
  for (const auto& t : tables) {
    if (t.vectors.size() != t.rates.size()) throw std::invalid_argument("table vectors and rates differ in length");
    if (t.units != tables.front().units) throw std::invalid_argument("tables use different rate units");
    for (const auto& v : t.vectors) {
      if (v.size() != relays) throw std::invalid_argument("coding vector length must equal the number of relays");
    }
  }

  const auto order = global_rate_order(tables);
  const std::size_t start = options.start_position == 0 ? relays : options.start_position;
  std::size_t checked = 0;
  for (std::size_t pos = start; pos <= order.size(); ++pos) {
    const GlobalRateEntry& entry = order[pos - 1];
    auto cuts = cut_sets(entry, tables);
    ++checked;
    const auto idx = first_full_rank_indices(cuts);
    if (trace) trace->push_back({pos, entry, cuts, idx.has_value()});
    if (!idx) continue;

    std::vector<CodingVector> rows;
    std::vector<std::size_t> chosen(relays);
    for (std::size_t m = 0; m < relays; ++m) {
      rows.push_back(cuts[m][(*idx)[m]]);
      // Cut sets are table prefixes except for the pinned relay.
      chosen[m] = m == entry.relay ? entry.index : (*idx)[m];
    }
    return BuildOutcome{SystemMatrix(std::move(rows)), entry.rate, std::move(chosen), checked};
  }
  return std::nullopt;
}

}  // namespace cfnc
