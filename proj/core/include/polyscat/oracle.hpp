#pragma once

// independent time-domain reference: solve the frequency-flat system
// quasi-statically against the switching waveforms, transform one modulation
// period, and compare against the stacked-system spectrum.

#include <map>
#include <vector>

#include "polyscat/load.hpp"
#include "polyscat/model.hpp"

namespace polyscat {

// snap every switch instant to the uniform sample grid (nearest sample); the
// time-domain transform of the snapped staircase is then exact, so model and
// reference must be fed the same snapped plan to agree at fine tolerances
ModulationPlan snap_plan_to_grid(const ModulationPlan& plan, long samples);

struct OracleSpectrum {
  MatrixXcd bins;  // 2M x samples, column k = coefficient at offset k (mod samples)
  long samples = 0;

  int max_offset() const { return static_cast<int>(samples / 2 - 1); }
  VectorXcd at(int k) const;
  std::map<int, VectorXcd> offsets_up_to(int max_abs_k) const;
};

// quasi-static spectrum of a frequency-flat scatterer: per-interval
// instantaneous solves of the 2M-port system under the plan's switching
// waveforms, then an exact piecewise-constant Fourier transform.
// samples must be a power of two >= 1024; the plan is snapped internally.
OracleSpectrum quasi_static_spectrum(const HarmonicBlocks& blocks_at_center, cplx z_ref,
                                     double f_center_hz, const ModulationPlan& plan,
                                     const Excitation& excitation, long samples);

struct CompareRow {
  int k = 0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / oracle norm (inf when reference is zero)
  double model_norm = 0.0;
  double oracle_norm = 0.0;
  bool ok = false;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double spectrum_scale = 0.0;  // largest reference norm across offsets
  double tolerance = 0.0;
  bool pass = false;
};

// per-offset comparison; an offset passes when its error is within tolerance
// of the local reference norm or of the overall spectrum scale (so exact-zero
// offsets are judged against the spectrum, not against rounding dust)
CompareReport compare(const std::map<int, VectorXcd>& model,
                      const std::map<int, VectorXcd>& reference, double tolerance);

}  // namespace polyscat
