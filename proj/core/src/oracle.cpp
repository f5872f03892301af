#include "polyscat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <fftw3.h>

#include "phase_util.hpp"
#include "polyscat/errors.hpp"
#include "polyscat/solver.hpp"

namespace polyscat {

using detail::one_minus_cis_neg;

namespace {

bool is_pow2(long v) { return v > 0 && (v & (v - 1)) == 0; }

void require_samples(long samples) {
  if (!is_pow2(samples) || samples < 1024) {
    std::ostringstream msg;
    msg << "sample count " << samples << " must be a power of two >= 1024";
    throw validation_error(msg.str());
  }
}

// integer switch boundaries of one schedule on the sample grid; the final
// boundary always lands exactly on `samples`
std::vector<long> snapped_boundaries(const PortSchedule& schedule, long samples) {
  std::vector<long> b(schedule.segments.size() + 1, 0);
  double acc = 0.0;
  for (size_t q = 0; q < schedule.segments.size(); ++q) {
    acc += schedule.segments[q].duty;
    b[q + 1] = std::lround(acc * static_cast<double>(samples));
  }
  b.back() = samples;
  return b;
}

}  // namespace

ModulationPlan snap_plan_to_grid(const ModulationPlan& plan, long samples) {
  plan.validate();
  require_samples(samples);
  ModulationPlan out = plan;
  for (PortSchedule& schedule : out.schedules) {
    const std::vector<long> b = snapped_boundaries(schedule, samples);
    for (size_t q = 0; q < schedule.segments.size(); ++q) {
      // integer / power-of-two: exact in binary, so snapped duties sum to 1 exactly
      schedule.segments[q].duty =
          static_cast<double>(b[q + 1] - b[q]) / static_cast<double>(samples);
    }
  }
  return out;
}

VectorXcd OracleSpectrum::at(int k) const {
  if (std::abs(k) > max_offset()) {
    std::ostringstream msg;
    msg << "offset " << k << " beyond resolvable window " << max_offset();
    throw index_error(msg.str());
  }
  const long col = (k >= 0) ? k : samples + k;
  return bins.col(col);
}

std::map<int, VectorXcd> OracleSpectrum::offsets_up_to(int max_abs_k) const {
  std::map<int, VectorXcd> out;
  for (int k = -max_abs_k; k <= max_abs_k; ++k) out[k] = at(k);
  return out;
}

OracleSpectrum quasi_static_spectrum(const HarmonicBlocks& blocks_at_center, cplx z_ref,
                                     double f_center_hz, const ModulationPlan& plan,
                                     const Excitation& excitation, long samples) {
  require_samples(samples);
  const ModulationPlan snapped = snap_plan_to_grid(plan, samples);

  const int m = static_cast<int>(blocks_at_center.ff_pp.rows());
  const int n = static_cast<int>(blocks_at_center.dd.rows());
  const int n_ports = static_cast<int>(snapped.schedules.size());
  if (n_ports != n) {
    std::ostringstream msg;
    msg << "plan drives " << n_ports << " load ports, scatterer has " << n;
    throw validation_error(msg.str());
  }

  // single-tone incident vector [a_phi; a_theta] over the M directions
  if (excitation.entries.empty()) throw validation_error("excitation has no entries");
  int tone_h = excitation.entries.front().harmonic;
  VectorXcd a = VectorXcd::Zero(2 * m);
  for (const ExcitationEntry& e : excitation.entries) {
    if (e.harmonic != tone_h)
      throw validation_error("quasi-static reference requires a single-tone excitation");
    if (e.direction < 1 || e.direction > m) {
      std::ostringstream msg;
      msg << "direction index " << e.direction << " out of range [1, " << m << "]";
      throw index_error(msg.str());
    }
    a(e.direction - 1) += e.a_phi;
    a(m + e.direction - 1) += e.a_theta;
  }

  // static 2M-port blocks of the frequency-flat scatterer
  MatrixXcd s_ff(2 * m, 2 * m);
  s_ff.topLeftCorner(m, m) = blocks_at_center.ff_pp;
  s_ff.topRightCorner(m, m) = blocks_at_center.ff_tp;
  s_ff.bottomLeftCorner(m, m) = blocks_at_center.ff_pt;
  s_ff.bottomRightCorner(m, m) = blocks_at_center.ff_tt;
  MatrixXcd s_fd(2 * m, n);
  s_fd.topRows(m) = blocks_at_center.fd_p;
  s_fd.bottomRows(m) = blocks_at_center.fd_t;
  MatrixXcd s_df(n, 2 * m);
  s_df.leftCols(m) = blocks_at_center.df_p;
  s_df.rightCols(m) = blocks_at_center.df_t;
  const VectorXcd structural = s_ff * a;
  const VectorXcd into_loads = s_df * a;

  // per-port segment reflections and integer switch boundaries
  std::vector<std::vector<cplx>> port_gammas(static_cast<size_t>(n));
  std::vector<std::vector<long>> port_bounds(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    const PortSchedule& schedule = snapped.schedules[static_cast<size_t>(d)];
    port_gammas[static_cast<size_t>(d)] = gamma_table(schedule, tone_h, f_center_hz, z_ref);
    port_bounds[static_cast<size_t>(d)] = snapped_boundaries(schedule, samples);
  }

  // merged switching instants across ports
  std::vector<long> cuts{0, samples};
  for (int d = 0; d < n; ++d)
    for (long b : port_bounds[static_cast<size_t>(d)])
      if (b > 0 && b < samples) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // time series, one instantaneous solve per constant interval
  std::vector<cplx> series(static_cast<size_t>(2 * m) * static_cast<size_t>(samples));
  const Eigen::MatrixXcd identity = MatrixXcd::Identity(n, n);
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    const long t0 = cuts[c];
    const long t1 = cuts[c + 1];
    VectorXcd gamma_now(n);
    for (int d = 0; d < n; ++d) {
      const std::vector<long>& b = port_bounds[static_cast<size_t>(d)];
      size_t q = 0;
      while (q + 1 < b.size() && !(t0 >= b[q] && t0 < b[q + 1])) ++q;
      gamma_now(d) = port_gammas[static_cast<size_t>(d)][q];
    }
    const MatrixXcd interaction = identity - blocks_at_center.dd * gamma_now.asDiagonal();
    Eigen::PartialPivLU<MatrixXcd> lu(interaction);
    const double rc = lu.rcond();
    if (!(rc >= rcond_threshold)) {
      std::ostringstream msg;
      msg << "instantaneous system singular on interval starting at sample " << t0
          << ": rcond estimate " << rc;
      throw singular_error(msg.str(), rc);
    }
    const VectorXcd b_now =
        structural + s_fd * gamma_now.cwiseProduct(lu.solve(into_loads));
    for (long t = t0; t < t1; ++t)
      for (int row = 0; row < 2 * m; ++row)
        series[static_cast<size_t>(row) * static_cast<size_t>(samples) +
               static_cast<size_t>(t)] = b_now(row);
  }

  // forward DFT row by row, then the exact staircase quadrature kernel
  OracleSpectrum out;
  out.samples = samples;
  out.bins.resize(2 * m, samples);
  std::vector<cplx> buf(static_cast<size_t>(samples));
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(samples),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
  std::vector<cplx> kernel(static_cast<size_t>(samples));
  for (long k = 0; k < samples; ++k) {
    // signed bin frequency matching the output convention
    const long ks = (k <= samples / 2) ? k : k - samples;
    if (ks == 0) {
      kernel[static_cast<size_t>(k)] = cplx(1.0 / static_cast<double>(samples), 0.0);
    } else {
      // integral of e^{-j 2 pi ks t} over one sample cell starting at t
      kernel[static_cast<size_t>(k)] =
          one_minus_cis_neg(static_cast<double>(ks) / static_cast<double>(samples)) /
          cplx(0.0, 2.0 * std::numbers::pi * static_cast<double>(ks));
    }
  }
  for (int row = 0; row < 2 * m; ++row) {
    std::copy_n(series.begin() + static_cast<size_t>(row) * static_cast<size_t>(samples),
                static_cast<size_t>(samples), buf.begin());
    fftw_execute(fwd);
    for (long k = 0; k < samples; ++k)
      out.bins(row, k) = buf[static_cast<size_t>(k)] * kernel[static_cast<size_t>(k)];
  }
  fftw_destroy_plan(fwd);
  return out;
}

CompareReport compare(const std::map<int, VectorXcd>& model,
                      const std::map<int, VectorXcd>& reference, double tolerance) {
  if (!(tolerance > 0.0)) throw validation_error("comparison tolerance must be positive");
  if (model.size() != reference.size())
    throw validation_error("model and reference cover different offset sets");
  for (const auto& [k, v] : model) {
    (void)v;
    if (reference.find(k) == reference.end())
      throw validation_error("model and reference cover different offset sets");
  }

  CompareReport report;
  report.tolerance = tolerance;
  for (const auto& [k, ref] : reference)
    report.spectrum_scale = std::max(report.spectrum_scale, ref.norm());

  report.pass = true;
  for (const auto& [k, ref] : reference) {
    const VectorXcd& got = model.at(k);
    if (got.size() != ref.size())
      throw validation_error("model and reference vectors differ in length");
    CompareRow row;
    row.k = k;
    row.model_norm = got.norm();
    row.oracle_norm = ref.norm();
    row.abs_err = (got - ref).norm();
    row.rel_err = row.oracle_norm > 0.0
                      ? row.abs_err / row.oracle_norm
                      : (row.abs_err > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    row.ok = row.abs_err <= tolerance * std::max(row.oracle_norm, report.spectrum_scale);
    report.max_abs_err = std::max(report.max_abs_err, row.abs_err);
    if (std::isfinite(row.rel_err)) report.max_rel_err = std::max(report.max_rel_err, row.rel_err);
    report.pass = report.pass && row.ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace polyscat
