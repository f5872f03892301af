#pragma once

// shared synthetic fixtures: deterministic scatterer bundles at several
// scales, the published two-state schedules, and helpers to write bundles to
// disk in the public JSON format. all randomness comes from the bit-stable
// mt19937_64 engine, so regenerated fixtures are identical everywhere.

#include <random>
#include <string>

#include "polyscat/io/bundle.hpp"
#include "polyscat/load.hpp"

namespace polyscat::testsupport {

// deterministic uniform draws in [-1, 1)
struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() {
    return 2.0 * (static_cast<double>(engine() >> 11) * 0x1.0p-53) - 1.0;
  }
  cplx complex_uniform() {
    const double re = uniform();
    const double im = uniform();
    return {re, im};
  }
};

// measurement-scale frequency-flat fixture: M=12, N=9, H=25, h_c=13,
// reciprocal blocks; load-to-load coupling spectral norm 1e-4 when coupled
io::Bundle measurement_scale_bundle(bool coupled);

// small frequency-dependent fixture (H=5): blocks vary strongly with h
io::Bundle dispersive_bundle();

// M=N=1 fixture with zero structural and load-to-load blocks: the conversion
// line through the single load is a product of three scalars
io::Bundle single_port_bundle();

// all scattering blocks zero
io::Bundle zero_bundle();

// general random fixture for property sweeps
io::Bundle random_bundle(std::uint64_t seed, int m, int n, int h_count, bool flat,
                         double dd_scale, bool reciprocal);

// published two-state schedules; regime is "O", "II", "III", "IV" or "V".
// states are the idealised reflection values +1 (on) and -1 (off)
ModulationPlan regime_plan(const std::string& regime);

// every port holds one constant reflection state
ModulationPlan static_plan(int ports, cplx gamma);

std::string data_path(const std::string& rel);

void write_bundle_json(const std::string& path, const io::Bundle& bundle);

}  // namespace polyscat::testsupport
