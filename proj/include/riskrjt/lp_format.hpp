#pragma once

#include "riskrjt/mip_model.hpp"

#include <string>

namespace riskrjt {

/// CPLEX LP text: Maximize / Subject To / Bounds / Binaries / End. Rows are
/// named c1, c2, ... in model order and carry their tag as a trailing
/// comment. Numbers use the shortest round-trip representation, so the
/// output is byte-stable for a given model.
std::string export_lp(const MipModel& model);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace riskrjt
