#pragma once

#include "cfnc/montecarlo.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cfnc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMismatch = 2;

/// Parses "x" or "start:step:stop" (inclusive of stop, within 1e-9).
std::vector<double> parse_db_sweep(const std::string& text);

/// Parses "a,b,c" into doubles.
std::vector<double> parse_real_list(const std::string& text);

/// Prints the three-relay reference walk-through and returns the number of
/// values that disagree with the reference beyond tolerance.
int write_example_report(std::ostream& out);

void write_rankfail_csv(std::ostream& out, const std::vector<std::pair<std::size_t, AggregateRow>>& rows);
void write_compare_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Entry point shared by the executable and the tests.  args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfnc::cli
