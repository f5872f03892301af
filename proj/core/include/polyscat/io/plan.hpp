#pragma once

// TOML modulation plan: per-port segment schedules, either listed explicitly
// or in two-state shorthand (delay + on-duty with on/off states)

#include <string>

#include "polyscat/load.hpp"

namespace polyscat::io {

// load and validate a modulation plan; port indices must cover 1..N exactly
ModulationPlan load_plan(const std::string& path);

}  // namespace polyscat::io
