#include "polyscat/load.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "phase_util.hpp"

namespace polyscat {

using detail::cis_neg;
using detail::one_minus_cis_neg;

namespace {
constexpr double duty_sum_tol = 1e-12;
}

void PortSchedule::validate() const {
  if (segments.empty()) throw validation_error("schedule has no segments");
  double sum = 0.0;
  for (size_t q = 0; q < segments.size(); ++q) {
    const double d = segments[q].duty;
    if (!(d >= 0.0) || !(d <= 1.0)) {
      std::ostringstream msg;
      msg << "segment " << q + 1 << " duty " << d << " outside [0, 1]";
      throw validation_error(msg.str());
    }
    sum += d;
  }
  if (std::abs(sum - 1.0) > duty_sum_tol) {
    std::ostringstream msg;
    msg << "segment duties sum to " << sum << ", expected 1 within " << duty_sum_tol;
    throw validation_error(msg.str());
  }
}

std::vector<double> PortSchedule::delays() const {
  std::vector<double> r(segments.size(), 0.0);
  double acc = 0.0;
  for (size_t q = 0; q < segments.size(); ++q) {
    r[q] = acc;
    acc += segments[q].duty;
  }
  return r;
}

void ModulationPlan::validate() const {
  if (schedules.empty()) throw validation_error("plan has no port schedules");
  if (!(f_m_hz > 0.0)) throw validation_error("modulation frequency must be positive");
  for (size_t p = 0; p < schedules.size(); ++p) {
    try {
      schedules[p].validate();
    } catch (const validation_error& e) {
      std::ostringstream msg;
      msg << "port " << p + 1 << ": " << e.what();
      throw validation_error(msg.str());
    }
  }
}

cplx reflection_of_impedance(cplx z_ohms, cplx z_ref) {
  const cplx den = z_ohms + z_ref;
  if (!(std::abs(den) > 0.0)) {
    throw singular_error("load impedance equals the negated reference; reflection undefined",
                         0.0);
  }
  return (z_ohms - std::conj(z_ref)) / den;
}

std::vector<cplx> gamma_table(const PortSchedule& schedule, int h, double f_hz, cplx z_ref) {
  std::vector<cplx> gammas;
  gammas.reserve(schedule.segments.size());
  for (size_t q = 0; q < schedule.segments.size(); ++q) {
    const SegmentState& st = schedule.segments[q].state;
    if (const auto* direct = std::get_if<DirectReflection>(&st)) {
      gammas.push_back(direct->gamma);
    } else if (const auto* flat = std::get_if<StaticImpedance>(&st)) {
      gammas.push_back(reflection_of_impedance(flat->z_ohms, z_ref));
    } else if (const auto* table = std::get_if<DispersiveImpedanceTable>(&st)) {
      if (h < 1 || static_cast<size_t>(h) > table->z_ohms_per_harmonic.size()) {
        std::ostringstream msg;
        msg << "segment " << q + 1 << " impedance table has "
            << table->z_ohms_per_harmonic.size() << " entries; harmonic " << h << " requested";
        throw index_error(msg.str());
      }
      gammas.push_back(
          reflection_of_impedance(table->z_ohms_per_harmonic[static_cast<size_t>(h - 1)], z_ref));
    } else {
      const auto& fn = std::get<ImpedanceFunction>(st);
      if (!fn.z_of_f) throw validation_error("segment impedance function is not set");
      gammas.push_back(reflection_of_impedance(fn.z_of_f(f_hz), z_ref));
    }
  }
  return gammas;
}

namespace {

void require_gamma_count(const PortSchedule& schedule, const std::vector<cplx>& gammas) {
  if (gammas.size() != schedule.segments.size()) {
    std::ostringstream msg;
    msg << "got " << gammas.size() << " reflection values for " << schedule.segments.size()
        << " segments";
    throw validation_error(msg.str());
  }
}

}  // namespace

cplx waveform_at(const PortSchedule& schedule, double t, const std::vector<cplx>& gammas) {
  require_gamma_count(schedule, gammas);
  if (!(t >= 0.0) || !(t < 1.0)) {
    std::ostringstream msg;
    msg << "time " << t << " outside one period [0, 1)";
    throw domain_error(msg.str());
  }
  double start = 0.0;
  cplx last{0.0, 0.0};
  bool have_last = false;
  for (size_t q = 0; q < schedule.segments.size(); ++q) {
    const double d = schedule.segments[q].duty;
    if (d > 0.0) {
      if (t >= start && t < start + d) return gammas[q];
      last = gammas[q];
      have_last = true;
    }
    start += d;
  }
  // duties may sum to 1 - O(1e-12); a t inside that sliver belongs to the tail segment
  if (have_last) return last;
  throw validation_error("schedule has no segment with positive duty");
}

cplx fourier_coefficient(const PortSchedule& schedule, const std::vector<cplx>& gammas, int k) {
  require_gamma_count(schedule, gammas);
  const std::vector<double> r = schedule.delays();
  if (k == 0) {
    cplx acc{0.0, 0.0};
    for (size_t q = 0; q < schedule.segments.size(); ++q)
      acc += gammas[q] * schedule.segments[q].duty;
    return acc;
  }
  // gamma_q e^{-j 2 pi k r_q} (e^{-j 2 pi k R_q} - 1), summed, times j / (2 pi k)
  cplx acc{0.0, 0.0};
  for (size_t q = 0; q < schedule.segments.size(); ++q) {
    const double duty = schedule.segments[q].duty;
    if (duty == 0.0) continue;
    acc += gammas[q] * cis_neg(k * r[q]) * (-one_minus_cis_neg(k * duty));
  }
  return cplx(0.0, 1.0) / (2.0 * std::numbers::pi * k) * acc;
}

cplx fourier_coefficient_numeric(const PortSchedule& schedule, const std::vector<cplx>& gammas,
                                 int k, long samples) {
  require_gamma_count(schedule, gammas);
  if (samples < 64) throw validation_error("quadrature needs at least 64 samples");
  const std::vector<double> r = schedule.delays();
  cplx acc{0.0, 0.0};
  for (size_t q = 0; q < schedule.segments.size(); ++q) {
    const double duty = schedule.segments[q].duty;
    if (duty <= 0.0) continue;
    const long n = std::max<long>(1, std::lround(duty * static_cast<double>(samples)));
    if (k == 0) {
      acc += gammas[q] * duty;
      continue;
    }
    // midpoint nodes r + (i + 1/2) h, i = 0..n-1: a geometric phase series,
    // summed in closed form (identical to direct summation up to rounding)
    const double h = duty / static_cast<double>(n);
    const cplx lead = gammas[q] * h * cis_neg(k * (r[q] + 0.5 * h));
    const cplx den = one_minus_cis_neg(k * h);
    if (std::abs(den) == 0.0) {
      // all nodes in phase
      acc += lead * static_cast<double>(n);
    } else {
      const cplx num = one_minus_cis_neg(k * (static_cast<double>(n) * h));
      acc += lead * num / den;
    }
  }
  return acc;
}

Eigen::Block<MatrixXcd> PolyharmonicLoadMatrix::block(int i, int j) {
  const int n = num_loads;
  return values.block((i - 1) * n, (j - 1) * n, n, n);
}

Eigen::Block<const MatrixXcd> PolyharmonicLoadMatrix::block(int i, int j) const {
  const int n = num_loads;
  return values.block((i - 1) * n, (j - 1) * n, n, n);
}

PolyharmonicLoadMatrix assemble_load_matrix(const ModulationPlan& plan,
                                            const ScattererBlocks& blocks,
                                            const FrequencyGrid& grid) {
  plan.validate();
  grid.validate();
  const int n = static_cast<int>(plan.schedules.size());
  const int h_count = grid.num_harmonics;
  PolyharmonicLoadMatrix out;
  out.num_harmonics = h_count;
  out.num_loads = n;
  out.values = MatrixXcd::Zero(h_count * n, h_count * n);

  // reflection states are evaluated at the input harmonic j of each block column
  for (int d = 1; d <= n; ++d) {
    const PortSchedule& schedule = plan.schedules[static_cast<size_t>(d - 1)];
    for (int j = 1; j <= h_count; ++j) {
      const std::vector<cplx> gammas =
          gamma_table(schedule, j, frequency_of(grid, j), blocks.z_ref);
      for (int i = 1; i <= h_count; ++i) {
        const int k = i - j;
        out.values((i - 1) * n + (d - 1), (j - 1) * n + (d - 1)) =
            fourier_coefficient(schedule, gammas, k);
      }
    }
  }
  return out;
}

PolyharmonicLoadMatrix apply_load_coupling(
    PolyharmonicLoadMatrix matrix,
    const std::map<std::pair<int, int>, MatrixXcd>& block_overrides) {
  const int n = matrix.num_loads;
  for (const auto& [key, block] : block_overrides) {
    const auto [i, j] = key;
    if (i < 1 || i > matrix.num_harmonics || j < 1 || j > matrix.num_harmonics) {
      std::ostringstream msg;
      msg << "override block (" << i << ", " << j << ") outside harmonic grid [1, "
          << matrix.num_harmonics << "]^2";
      throw index_error(msg.str());
    }
    if (block.rows() != n || block.cols() != n) {
      std::ostringstream msg;
      msg << "override block (" << i << ", " << j << ") is " << block.rows() << "x"
          << block.cols() << ", expected " << n << "x" << n;
      throw validation_error(msg.str());
    }
    matrix.block(i, j) = block;
  }
  return matrix;
}

PolyharmonicLoadMatrix combine_multitone(const std::vector<PolyharmonicLoadMatrix>& parts) {
  if (parts.empty()) throw validation_error("no load matrices to combine");
  const int n = parts.front().num_loads;
  int total_h = 0;
  for (const PolyharmonicLoadMatrix& part : parts) {
    if (part.num_loads != n) {
      std::ostringstream msg;
      msg << "load-port counts differ across tone groups: " << part.num_loads << " vs " << n;
      throw validation_error(msg.str());
    }
    total_h += part.num_harmonics;
  }
  PolyharmonicLoadMatrix out;
  out.num_loads = n;
  out.num_harmonics = total_h;
  out.values = MatrixXcd::Zero(total_h * n, total_h * n);
  int offset = 0;
  for (const PolyharmonicLoadMatrix& part : parts) {
    const int size = part.num_harmonics * n;
    out.values.block(offset, offset, size, size) = part.values;
    offset += size;
  }
  return out;
}

}  // namespace polyscat
