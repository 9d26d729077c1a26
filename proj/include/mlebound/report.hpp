#pragma once

#include <string>
#include <vector>

#include "mlebound/bounds.hpp"
#include "mlebound/montecarlo.hpp"

namespace mlebound::report {

enum class Format { Human, Csv, Json };

Format parse_format(const std::string& name);

/// Shortest decimal string that parses back to the same double.
std::string shortest(double value);

/// Six significant digits, for the human view.
std::string six_sig(double value);

/// Fixed three decimals, the table parity view.
std::string three_dp(double value);

inline constexpr const char* kSimulationCsvHeader =
    "n,empirical_distance,standard_error,new_bound,ar_bound,seed,trials";
inline constexpr const char* kBoundCsvHeader =
    "formula,n,stein_term,tail_term,taylor_term,total";

std::string render_bound(const BoundBreakdown& b, long n, Format format);
std::string render_simulations(const std::vector<SimulationResult>& rows,
                               Format format);

inline constexpr const char* kTableBoundsCsvHeader = "n,new_bound,ar_bound";

std::string render_table1_bounds(const std::vector<Table1BoundRow>& rows,
                                 Format format);

}  // namespace mlebound::report
