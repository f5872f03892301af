#pragma once

// JSON scatterer bundle: layout, frequency grid, reference impedance and
// per-harmonic scattering blocks (or a single broadcast entry when flat)

#include <string>

#include "polyscat/model.hpp"

namespace polyscat::io {

struct Bundle {
  PortLayout layout;
  FrequencyGrid grid;
  ScattererBlocks blocks;
};

// load and fully validate a scatterer bundle; errors name the file, the
// offending block and harmonic, and the violated constraint
Bundle load_bundle(const std::string& path);

}  // namespace polyscat::io
