#include "polyscat/model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "polyscat/errors.hpp"

namespace polyscat {

namespace {

void require_range(int value, int lo, int hi, const char* axis) {
  if (value < lo || value > hi) {
    std::ostringstream msg;
    msg << axis << " index " << value << " out of range [" << lo << ", " << hi << "]";
    throw index_error(msg.str());
  }
}

void require_shape(const MatrixXcd& m, int rows, int cols, const char* name, int h) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << name << " at harmonic " << h << " is " << m.rows() << "x" << m.cols()
        << ", expected " << rows << "x" << cols;
    throw validation_error(msg.str());
  }
}

}  // namespace

void FrequencyGrid::validate() const {
  if (!(f_in_hz > 0.0)) throw validation_error("f_in must be positive");
  if (!(f_m_hz > 0.0)) throw validation_error("f_m must be positive");
  if (!(f_m_hz < f_in_hz)) throw validation_error("f_m must be smaller than f_in");
  if (num_harmonics < 1) throw validation_error("harmonic count must be at least 1");
  if (center_index < 1 || center_index > num_harmonics) {
    std::ostringstream msg;
    msg << "center harmonic " << center_index << " outside ladder [1, " << num_harmonics << "]";
    throw validation_error(msg.str());
  }
  // lowest harmonic must stay at a physical (positive) frequency
  const double f_low = f_in_hz + (1 - center_index) * f_m_hz;
  if (!(f_low > 0.0)) {
    std::ostringstream msg;
    msg << "harmonic 1 falls at " << f_low << " Hz; ladder extends below zero frequency";
    throw validation_error(msg.str());
  }
}

bool FrequencyGrid::center_off_middle() const {
  const double middle = 0.5 * (num_harmonics + 1);
  return std::abs(center_index - middle) > 1.0 + 1e-9;
}

double frequency_of(const FrequencyGrid& grid, int h) {
  require_range(h, 1, grid.num_harmonics, "harmonic");
  const double f = grid.f_in_hz + static_cast<double>(h - grid.center_index) * grid.f_m_hz;
  if (!(f > 0.0)) {
    std::ostringstream msg;
    msg << "harmonic " << h << " falls at nonpositive frequency " << f << " Hz";
    throw domain_error(msg.str());
  }
  return f;
}

void PortLayout::validate() const {
  if (num_directions < 1) throw validation_error("direction count must be at least 1");
  if (num_loads < 1) throw validation_error("load port count must be at least 1");
  if (num_harmonics < 1) throw validation_error("harmonic count must be at least 1");
}

int radiation_index(int h, Pol pol, int m, const PortLayout& layout) {
  require_range(h, 1, layout.num_harmonics, "harmonic");
  require_range(m, 1, layout.num_directions, "direction");
  const int pol_offset = (pol == Pol::theta) ? layout.num_directions : 0;
  return (h - 1) * 2 * layout.num_directions + pol_offset + (m - 1);
}

int load_index(int h, int n, const PortLayout& layout) {
  require_range(h, 1, layout.num_harmonics, "harmonic");
  require_range(n, 1, layout.num_loads, "load port");
  return (h - 1) * layout.num_loads + (n - 1);
}

const HarmonicBlocks& ScattererBlocks::at(int h, const PortLayout& layout) const {
  require_range(h, 1, layout.num_harmonics, "harmonic");
  if (flat) return per_harmonic.at(0);
  return per_harmonic.at(static_cast<size_t>(h - 1));
}

void ScattererBlocks::validate(const PortLayout& layout) const {
  layout.validate();
  const size_t expected = flat ? 1u : static_cast<size_t>(layout.num_harmonics);
  if (per_harmonic.size() != expected) {
    std::ostringstream msg;
    msg << "bundle carries " << per_harmonic.size() << " harmonic block sets, expected "
        << expected << (flat ? " (flat)" : "");
    throw validation_error(msg.str());
  }
  const int m = layout.num_directions;
  const int n = layout.num_loads;
  for (size_t i = 0; i < per_harmonic.size(); ++i) {
    const int h = static_cast<int>(i) + 1;
    const HarmonicBlocks& hb = per_harmonic[i];
    require_shape(hb.ff_pp, m, m, "s_ff.pp", h);
    require_shape(hb.ff_tp, m, m, "s_ff.tp", h);
    require_shape(hb.ff_pt, m, m, "s_ff.pt", h);
    require_shape(hb.ff_tt, m, m, "s_ff.tt", h);
    require_shape(hb.fd_p, m, n, "s_fd.p", h);
    require_shape(hb.fd_t, m, n, "s_fd.t", h);
    require_shape(hb.df_p, n, m, "s_df.p", h);
    require_shape(hb.df_t, n, m, "s_df.t", h);
    require_shape(hb.dd, n, n, "s_dd", h);
  }
  if (!(std::abs(z_ref) > 0.0)) throw validation_error("reference impedance must be nonzero");
}

void Excitation::validate(const PortLayout& layout) const {
  if (entries.empty()) throw validation_error("excitation has no entries");
  std::set<std::pair<int, int>> seen;
  bool any_nonzero = false;
  for (const ExcitationEntry& e : entries) {
    require_range(e.harmonic, 1, layout.num_harmonics, "harmonic");
    require_range(e.direction, 1, layout.num_directions, "direction");
    if (!seen.insert({e.harmonic, e.direction}).second) {
      std::ostringstream msg;
      msg << "duplicate excitation entry at harmonic " << e.harmonic << ", direction "
          << e.direction;
      throw validation_error(msg.str());
    }
    if (std::abs(e.a_phi) > 0.0 || std::abs(e.a_theta) > 0.0) any_nonzero = true;
  }
  if (!any_nonzero) throw validation_error("excitation is identically zero");
}

VectorXcd Excitation::assemble(const PortLayout& layout) const {
  validate(layout);
  VectorXcd a = VectorXcd::Zero(layout.radiation_size());
  for (const ExcitationEntry& e : entries) {
    a(radiation_index(e.harmonic, Pol::phi, e.direction, layout)) = e.a_phi;
    a(radiation_index(e.harmonic, Pol::theta, e.direction, layout)) = e.a_theta;
  }
  return a;
}

double Excitation::total_power_w() const {
  double p = 0.0;
  for (const ExcitationEntry& e : entries) p += std::norm(e.a_phi) + std::norm(e.a_theta);
  return p;
}

cplx ScatterResult::at(int h, Pol pol, int m) const {
  return b(radiation_index(h, pol, m, layout));
}

void BcsContext::validate() const {
  if (!(s_t_m > 0.0)) throw validation_error("transmitter distance must be positive");
  if (!(s_r_m > 0.0)) throw validation_error("receiver distance must be positive");
  if (!gain_tx) throw validation_error("transmit gain function is not set");
  if (!gain_rx) throw validation_error("receive gain function is not set");
}

}  // namespace polyscat
