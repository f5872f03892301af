#pragma once

// periodically switched load schedules: per-port piecewise-constant reflection
// waveforms, their Fourier coefficients, and the polyharmonic load matrix that
// couples harmonics in the stacked system.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "polyscat/errors.hpp"
#include "polyscat/model.hpp"

namespace polyscat {

// segment states: a direct reflection value, a frequency-flat impedance, a
// per-harmonic impedance table, or an arbitrary impedance-vs-frequency map
struct DirectReflection {
  cplx gamma;
};
struct StaticImpedance {
  cplx z_ohms;
};
struct DispersiveImpedanceTable {
  std::vector<cplx> z_ohms_per_harmonic;  // entry h-1 used at harmonic h
};
struct ImpedanceFunction {
  std::function<cplx(double f_hz)> z_of_f;
};
using SegmentState =
    std::variant<DirectReflection, StaticImpedance, DispersiveImpedanceTable, ImpedanceFunction>;

struct LoadSegment {
  SegmentState state;
  double duty = 0.0;  // fraction of the modulation period, in [0, 1]
};

// one modulation period of one load port; segment q starts at the prefix sum
// of the preceding duties (first segment starts at t = 0)
struct PortSchedule {
  std::vector<LoadSegment> segments;

  void validate() const;  // duties in [0,1], sum within 1e-12 of 1
  std::vector<double> delays() const;
};

struct ModulationPlan {
  std::vector<PortSchedule> schedules;  // position p drives load port p+1
  double f_m_hz = 0.0;
  std::string regime_id;  // optional label carried through to result records

  void validate() const;
};

// voltage reflection coefficient of impedance z against reference z_ref
cplx reflection_of_impedance(cplx z_ohms, cplx z_ref);

// per-segment reflection values of one schedule, with impedance states
// evaluated at harmonic h / frequency f_hz
std::vector<cplx> gamma_table(const PortSchedule& schedule, int h, double f_hz, cplx z_ref);

// instantaneous reflection at normalised time t in [0, 1)
cplx waveform_at(const PortSchedule& schedule, double t, const std::vector<cplx>& gammas);

// Fourier coefficient of the reflection waveform at harmonic offset k,
// closed form: exact for piecewise-constant schedules
cplx fourier_coefficient(const PortSchedule& schedule, const std::vector<cplx>& gammas, int k);

// quadrature check of the same coefficient: per-segment midpoint rule with
// cells apportioned by duty, evaluated in closed geometric form
cplx fourier_coefficient_numeric(const PortSchedule& schedule, const std::vector<cplx>& gammas,
                                 int k, long samples);

// dense HN x HN matrix of load-port Fourier coefficients; block (i, j) is the
// N x N diagonal matrix of coefficients at offset k = i - j, with impedances
// evaluated at the input harmonic j
struct PolyharmonicLoadMatrix {
  MatrixXcd values;
  int num_harmonics = 0;
  int num_loads = 0;

  Eigen::Block<MatrixXcd> block(int i, int j);
  Eigen::Block<const MatrixXcd> block(int i, int j) const;
};

PolyharmonicLoadMatrix assemble_load_matrix(const ModulationPlan& plan,
                                            const ScattererBlocks& blocks,
                                            const FrequencyGrid& grid);

// replace selected harmonic blocks (keys are 1-based (i, j)) with explicit
// N x N matrices, e.g. to model coupling between load ports
PolyharmonicLoadMatrix apply_load_coupling(
    PolyharmonicLoadMatrix matrix,
    const std::map<std::pair<int, int>, MatrixXcd>& block_overrides);

// block-diagonal concatenation for independently modulated tone groups
PolyharmonicLoadMatrix combine_multitone(const std::vector<PolyharmonicLoadMatrix>& parts);

}  // namespace polyscat
