#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mlebound/models.hpp"

namespace mlebound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Parses "id" or "id:key=value,key=value" with keys d, p, alpha, sigma, mu.
/// Values override those already in `base`.
ModelSpec parse_model_spec(const std::string& text, ModelSpec base = {});

/// Runs the command line `args` (program name excluded). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlebound::cli
