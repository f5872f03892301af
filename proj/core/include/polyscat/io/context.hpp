#pragma once

// JSON measurement context for cross-section evaluation: distances and
// antenna gains (uniform, per-direction, or per-direction-per-harmonic)

#include <string>

#include "polyscat/model.hpp"

namespace polyscat::io {

// gains given as tables are bound to the grid's harmonic frequencies; the
// returned context rejects queries at frequencies not on the grid
BcsContext load_bcs_context(const std::string& path, const FrequencyGrid& grid,
                            int num_directions);

}  // namespace polyscat::io
