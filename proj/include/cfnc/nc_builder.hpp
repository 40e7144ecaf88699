#pragma once

// Max-min selection of one coding vector per relay such that the stacked
// system matrix is nonsingular over the integers.

#include "cfnc/fp_enum.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <vector>

namespace cfnc {

using BigInt = boost::multiprecision::cpp_int;

/// Exact determinant by fraction-free (Bareiss) elimination.  Runs in 128-bit
/// integers and restarts in arbitrary precision if an intermediate overflows.
BigInt exact_determinant(const std::vector<CodingVector>& rows);

/// Row m is relay m's coefficient vector.
class SystemMatrix {
 public:
  explicit SystemMatrix(std::vector<CodingVector> rows);

  std::size_t size() const { return rows_.size(); }
  const std::vector<CodingVector>& rows() const { return rows_; }
  const CodingVector& row(std::size_t m) const { return rows_[m]; }
  const BigInt& determinant() const { return det_; }
  bool full_rank() const { return det_ != 0; }

  static SystemMatrix identity(std::size_t n);

 private:
  std::vector<CodingVector> rows_;
  BigInt det_;
};

struct GlobalRateEntry {
  double rate = 0.0;
  std::size_t relay = 0;  // position of the table in the input list
  std::size_t index = 0;  // position inside that table
};

/// Every table entry, rate descending; ties ordered by (relay, index).
std::vector<GlobalRateEntry> global_rate_order(const std::vector<CandidateTable>& tables);

/// Reduced candidate lists for checking whether entry.rate is achievable: the
/// owning relay is pinned to its entry, every other relay keeps the prefix of
/// its table with rate >= entry.rate.
std::vector<std::vector<CodingVector>> cut_sets(const GlobalRateEntry& entry,
                                                const std::vector<CandidateTable>& tables);

/// First nonsingular assembly in lexicographic index order, if any.
std::optional<SystemMatrix> find_full_rank(const std::vector<std::vector<CodingVector>>& cuts);

struct BuildOutcome {
  SystemMatrix matrix;
  double bottleneck_rate = 0.0;
  std::vector<std::size_t> chosen;  // table index picked for each relay
  std::size_t checked_count = 0;    // number of gamma values examined
};

/// One gamma visited during construction, for reporting.
struct GammaCheck {
  std::size_t position = 0;  // 1-based position in the global order
  GlobalRateEntry entry;
  std::vector<std::vector<CodingVector>> cuts;
  bool achievable = false;
};

struct BuildOptions {
  /// 1-based position of the first gamma checked.  The first L-1 values can
  /// never be achieved, so the default (0) means "start at L".
  std::size_t start_position = 0;
};

/// Walks the global rate order and returns the first achievable gamma with its
/// matrix.  nullopt when no nonsingular assembly exists within the tables.
std::optional<BuildOutcome> construct_system_matrix(const std::vector<CandidateTable>& tables,
                                                    const BuildOptions& options = {},
                                                    std::vector<GammaCheck>* trace = nullptr);

}  // namespace cfnc
