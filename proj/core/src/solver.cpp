#include "polyscat/solver.hpp"

#include <cmath>
#include <sstream>

#include "polyscat/errors.hpp"

namespace polyscat {

namespace {

void require_square(const MatrixXcd& m, const char* name) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << name << " is " << m.rows() << "x" << m.cols() << ", expected square";
    throw validation_error(msg.str());
  }
}

}  // namespace

MatrixXcd system_matrix(const MatrixXcd& c_ff, const MatrixXcd& c_fd, const MatrixXcd& c_df,
                        const MatrixXcd& c_dd, const MatrixXcd& c_l) {
  require_square(c_ff, "c_ff");
  require_square(c_dd, "c_dd");
  require_square(c_l, "c_l");
  const auto rad = c_ff.rows();
  const auto load = c_dd.rows();
  if (c_l.rows() != load || c_fd.rows() != rad || c_fd.cols() != load || c_df.rows() != load ||
      c_df.cols() != rad) {
    std::ostringstream msg;
    msg << "block dimensions disagree: c_ff " << rad << "x" << rad << ", c_fd " << c_fd.rows()
        << "x" << c_fd.cols() << ", c_df " << c_df.rows() << "x" << c_df.cols() << ", c_dd "
        << load << "x" << load << ", c_l " << c_l.rows() << "x" << c_l.cols();
    throw validation_error(msg.str());
  }

  const MatrixXcd interaction = MatrixXcd::Identity(load, load) - c_dd * c_l;
  Eigen::PartialPivLU<MatrixXcd> lu(interaction);
  const double rc = lu.rcond();
  if (!(rc >= rcond_threshold)) {
    std::ostringstream msg;
    msg << "interaction matrix numerically singular: rcond estimate " << rc << " below "
        << rcond_threshold;
    throw singular_error(msg.str(), rc);
  }
  return c_ff + c_fd * (c_l * lu.solve(c_df));
}

ScatterResult scatter(const MatrixXcd& c_sys, const Excitation& excitation,
                      const PortLayout& layout, const FrequencyGrid& grid) {
  layout.validate();
  grid.validate();
  if (grid.num_harmonics != layout.num_harmonics)
    throw validation_error("frequency grid and port layout disagree on harmonic count");
  if (c_sys.rows() != layout.radiation_size() || c_sys.cols() != layout.radiation_size()) {
    std::ostringstream msg;
    msg << "system matrix is " << c_sys.rows() << "x" << c_sys.cols() << ", expected "
        << layout.radiation_size() << "x" << layout.radiation_size();
    throw validation_error(msg.str());
  }
  ScatterResult result;
  result.layout = layout;
  result.grid = grid;
  result.b = c_sys * excitation.assemble(layout);
  return result;
}

std::vector<SpectrumRow> harmonic_spectrum(const ScatterResult& result, int rho) {
  std::vector<SpectrumRow> rows;
  rows.reserve(static_cast<size_t>(result.layout.num_harmonics));
  for (int h = 1; h <= result.layout.num_harmonics; ++h) {
    SpectrumRow row;
    row.h = h;
    row.k_offset = h - result.grid.center_index;
    row.f_hz = frequency_of(result.grid, h);
    row.b_phi = result.at(h, Pol::phi, rho);
    row.b_theta = result.at(h, Pol::theta, rho);
    row.power_w = std::norm(row.b_phi) + std::norm(row.b_theta);
    rows.push_back(row);
  }
  return rows;
}

std::map<int, VectorXcd> spectrum_by_offset(const ScatterResult& result, int max_offset) {
  const int h_c = result.grid.center_index;
  const int h_count = result.grid.num_harmonics;
  if (max_offset < 0) throw validation_error("offset window must be nonnegative");
  if (h_c - max_offset < 1 || h_c + max_offset > h_count) {
    std::ostringstream msg;
    msg << "offset window " << max_offset << " exceeds the ladder around harmonic " << h_c
        << " (1.." << h_count << ")";
    throw index_error(msg.str());
  }
  const int m2 = 2 * result.layout.num_directions;
  std::map<int, VectorXcd> out;
  for (int k = -max_offset; k <= max_offset; ++k) {
    const int h = h_c + k;
    out[k] = result.b.segment((h - 1) * m2, m2);
  }
  return out;
}

double to_dbm2(double sigma_m2) {
  constexpr double floor_dbm2 = -300.0;
  if (!(sigma_m2 > 0.0)) return floor_dbm2;
  const double v = 10.0 * std::log10(sigma_m2);
  return v < floor_dbm2 ? floor_dbm2 : v;
}

BcsValue bcs(const ScatterResult& result, const Excitation& excitation, const BcsContext& ctx,
             int h, int rho, int tau, int h_c) {
  ctx.validate();
  const PortLayout& layout = result.layout;
  if (h_c < 1 || h_c > layout.num_harmonics)
    throw index_error("excitation harmonic outside the ladder");

  double incident = 0.0;
  for (const ExcitationEntry& e : excitation.entries)
    if (e.harmonic == h_c && e.direction == tau)
      incident = std::norm(e.a_phi) + std::norm(e.a_theta);
  if (!(incident > 0.0)) {
    std::ostringstream msg;
    msg << "excitation carries no power at harmonic " << h_c << ", direction " << tau;
    throw domain_error(msg.str());
  }

  const double outgoing =
      std::norm(result.at(h, Pol::phi, rho)) + std::norm(result.at(h, Pol::theta, rho));
  const double f_h = frequency_of(result.grid, h);
  const double f_c = frequency_of(result.grid, h_c);
  const double lambda_h = speed_of_light_m_s / f_h;
  const double g_rx = ctx.gain_rx(rho, f_h);
  const double g_tx = ctx.gain_tx(tau, f_c);
  if (!(g_rx > 0.0) || !(g_tx > 0.0)) throw domain_error("antenna gains must be positive");

  constexpr double pi = 3.14159265358979323846;
  const double scale = 64.0 * pi * pi * pi * (ctx.s_t_m * ctx.s_t_m) * (ctx.s_r_m * ctx.s_r_m) /
                       (lambda_h * lambda_h * g_rx * g_tx);
  BcsValue v;
  v.sigma_m2 = scale * outgoing / incident;
  v.sigma_dbm2 = to_dbm2(v.sigma_m2);
  return v;
}

ConvergenceReport convergence_check(const std::function<ScatterResult(int)>& solve_at,
                                    const std::vector<int>& h_counts,
                                    const ConvergenceProbe& probe, double tolerance) {
  if (!solve_at) throw validation_error("no solver callback given");
  if (h_counts.empty()) throw validation_error("no harmonic counts to scan");
  if (probe.offsets.empty()) throw validation_error("no probe offsets given");
  if (!(tolerance > 0.0)) throw validation_error("settling tolerance must be positive");
  for (size_t i = 0; i < h_counts.size(); ++i) {
    // odd counts keep the tone at the exact middle of each ladder
    if (h_counts[i] % 2 == 0) throw validation_error("harmonic counts must be odd");
    if (i > 0 && h_counts[i] <= h_counts[i - 1])
      throw validation_error("harmonic counts must strictly increase");
  }

  ConvergenceReport report;
  report.offsets = probe.offsets;
  report.tolerance = tolerance;

  for (const int hc : h_counts) {
    const ScatterResult result = solve_at(hc);
    ConvergenceRow row;
    row.num_harmonics = hc;
    for (const int k : probe.offsets) {
      const int h = result.grid.center_index + k;
      if (h < 1 || h > result.grid.num_harmonics) {
        row.magnitudes.emplace_back();
        continue;
      }
      const cplx bp = result.at(h, Pol::phi, probe.rho);
      const cplx bt = result.at(h, Pol::theta, probe.rho);
      row.magnitudes.emplace_back(std::sqrt(std::norm(bp) + std::norm(bt)));
    }
    report.rows.push_back(std::move(row));
  }

  // settled: every offset present, and all transitions from here on stay small
  const size_t n_rows = report.rows.size();
  const size_t n_off = probe.offsets.size();
  std::vector<bool> stable_from(n_rows, false);
  if (n_rows >= 2) {
    // the last row cannot start a settled run: no transition after it confirms it
    for (size_t i = n_rows - 1; i-- > 0;) {
      bool ok = true;
      for (size_t p = 0; p < n_off && ok; ++p) {
        const auto& cur = report.rows[i].magnitudes[p];
        const auto& nxt = report.rows[i + 1].magnitudes[p];
        ok = cur.has_value() && nxt.has_value() && std::abs(*nxt - *cur) <= tolerance;
      }
      if (ok && i + 2 < n_rows) ok = stable_from[i + 1];
      stable_from[i] = ok;
      if (ok) report.settled_h = report.rows[i].num_harmonics;
    }
  }
  return report;
}

}  // namespace polyscat
