#pragma once

// frequency grid, port bookkeeping and the scatterer description:
// a device with 2M radiation ports (M directions x {phi, theta}) and N
// reconfigurable load ports, characterised per mixing harmonic.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace polyscat {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr double speed_of_light_m_s = 299792458.0;

enum class Pol { phi = 0, theta = 1 };

// uniform harmonic ladder f_h = f_in + (h - h_c) f_m, h = 1..H (1-based)
struct FrequencyGrid {
  double f_in_hz = 0.0;   // excitation carrier
  double f_m_hz = 0.0;    // modulation frequency
  int num_harmonics = 0;  // H
  int center_index = 0;   // h_c, harmonic carrying the excitation

  void validate() const;
  // true when the excitation harmonic sits more than one slot away from the
  // middle of the ladder, so one sideband window is much shorter than the other
  bool center_off_middle() const;
};

double frequency_of(const FrequencyGrid& grid, int h);

struct PortLayout {
  int num_directions = 0;  // M
  int num_loads = 0;       // N
  int num_harmonics = 0;   // H

  void validate() const;
  int radiation_size() const { return 2 * num_harmonics * num_directions; }
  int load_size() const { return num_harmonics * num_loads; }
};

// flat position of radiation port (h, pol, m) in the stacked wave vector:
// harmonics are outermost, then polarisation (phi before theta), then direction
int radiation_index(int h, Pol pol, int m, const PortLayout& layout);

// flat position of load port (h, n): harmonics outermost, then load port
int load_index(int h, int n, const PortLayout& layout);

// scattering submatrices of one harmonic; *_tp maps theta-in to phi-out
struct HarmonicBlocks {
  MatrixXcd ff_pp, ff_tp, ff_pt, ff_tt;  // M x M radiation-to-radiation
  MatrixXcd fd_p, fd_t;                  // M x N load-to-radiation
  MatrixXcd df_p, df_t;                  // N x M radiation-to-load
  MatrixXcd dd;                          // N x N load-to-load
};

struct ScattererBlocks {
  // one entry when flat (broadcast to every harmonic), else exactly H entries
  std::vector<HarmonicBlocks> per_harmonic;
  bool flat = false;
  cplx z_ref{50.0, 0.0};

  const HarmonicBlocks& at(int h, const PortLayout& layout) const;
  void validate(const PortLayout& layout) const;
};

// one illuminated tone: amplitudes of both polarisations from direction tau at harmonic h
struct ExcitationEntry {
  int harmonic = 0;
  int direction = 0;
  cplx a_phi{0.0, 0.0};
  cplx a_theta{0.0, 0.0};
};

struct Excitation {
  std::vector<ExcitationEntry> entries;

  void validate(const PortLayout& layout) const;
  VectorXcd assemble(const PortLayout& layout) const;  // stacked incident vector
  double total_power_w() const;                        // sum of |a|^2 over entries
};

struct ScatterResult {
  VectorXcd b;  // stacked outgoing radiation waves
  PortLayout layout;
  FrequencyGrid grid;

  cplx at(int h, Pol pol, int m) const;
};

// geometry and antenna gains entering the conversion-scattering cross-section
struct BcsContext {
  double s_t_m = 0.0;  // transmitter distance
  double s_r_m = 0.0;  // receiver distance
  // linear gain of the illuminating / receiving antenna toward direction index, at frequency
  std::function<double(int direction, double f_hz)> gain_tx;
  std::function<double(int direction, double f_hz)> gain_rx;

  void validate() const;
};

}  // namespace polyscat
