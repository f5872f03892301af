#include "fixtures.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace polyscat::testsupport {

namespace {

MatrixXcd random_matrix(Rng& rng, int rows, int cols) {
  MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.complex_uniform();
  return m;
}

void scale_to_norm(MatrixXcd& m, double target) {
  if (target == 0.0) {
    m.setZero();
    return;
  }
  const double norm = Eigen::JacobiSVD<MatrixXcd>(m).singularValues()(0);
  m *= target / norm;
}

// split a full 2M x 2M / 2M x N / N x 2M description into harmonic blocks
HarmonicBlocks split_blocks(const MatrixXcd& s_ff, const MatrixXcd& s_fd, const MatrixXcd& s_df,
                            const MatrixXcd& s_dd) {
  const int m = static_cast<int>(s_ff.rows()) / 2;
  HarmonicBlocks hb;
  hb.ff_pp = s_ff.topLeftCorner(m, m);
  hb.ff_tp = s_ff.topRightCorner(m, m);
  hb.ff_pt = s_ff.bottomLeftCorner(m, m);
  hb.ff_tt = s_ff.bottomRightCorner(m, m);
  hb.fd_p = s_fd.topRows(m);
  hb.fd_t = s_fd.bottomRows(m);
  hb.df_p = s_df.leftCols(m);
  hb.df_t = s_df.rightCols(m);
  hb.dd = s_dd;
  return hb;
}

}  // namespace

io::Bundle measurement_scale_bundle(bool coupled) {
  const int m = 12;
  const int n = 9;
  const int h_count = 25;
  Rng rng(0x706f6c79u);  // fixed seed: fixture must never drift

  MatrixXcd s_ff = random_matrix(rng, 2 * m, 2 * m);
  s_ff = ((s_ff + s_ff.transpose()) / 2.0).eval();  // reciprocal structure
  scale_to_norm(s_ff, 0.30);

  MatrixXcd s_fd = random_matrix(rng, 2 * m, n);
  scale_to_norm(s_fd, 0.50);
  const MatrixXcd s_df = s_fd.transpose();

  MatrixXcd s_dd = random_matrix(rng, n, n);
  s_dd = ((s_dd + s_dd.transpose()) / 2.0).eval();
  scale_to_norm(s_dd, coupled ? 1e-4 : 0.0);

  io::Bundle bundle;
  bundle.layout = PortLayout{m, n, h_count};
  bundle.grid = FrequencyGrid{2.4e9, 1e5, h_count, 13};
  bundle.blocks.flat = true;
  bundle.blocks.z_ref = cplx(50.0, 0.0);
  bundle.blocks.per_harmonic = {split_blocks(s_ff, s_fd, s_df, s_dd)};
  return bundle;
}

io::Bundle dispersive_bundle() {
  const int m = 2;
  const int n = 2;
  const int h_count = 5;
  Rng rng(0xd15bu);

  const MatrixXcd base_ff = random_matrix(rng, 2 * m, 2 * m);
  const MatrixXcd base_fd = random_matrix(rng, 2 * m, n);
  const MatrixXcd base_dd = random_matrix(rng, n, n);

  io::Bundle bundle;
  bundle.layout = PortLayout{m, n, h_count};
  bundle.grid = FrequencyGrid{2.4e9, 1e5, h_count, 3};
  bundle.blocks.flat = false;
  bundle.blocks.z_ref = cplx(50.0, 0.0);
  for (int h = 1; h <= h_count; ++h) {
    // strong, smooth frequency dependence across the ladder
    const double w = 1.0 + 0.25 * (h - 3);
    MatrixXcd s_ff = 0.2 * w * base_ff;
    MatrixXcd s_fd = 0.5 * w * base_fd;
    MatrixXcd s_df = s_fd.transpose();
    MatrixXcd s_dd = 0.05 * w * base_dd;
    bundle.blocks.per_harmonic.push_back(split_blocks(s_ff, s_fd, s_df, s_dd));
  }
  return bundle;
}

io::Bundle single_port_bundle() {
  const int m = 1;
  const int n = 1;
  const int h_count = 3;
  MatrixXcd s_ff = MatrixXcd::Zero(2, 2);
  MatrixXcd s_fd = MatrixXcd::Zero(2, 1);
  MatrixXcd s_df = MatrixXcd::Zero(1, 2);
  MatrixXcd s_dd = MatrixXcd::Zero(1, 1);
  s_fd(0, 0) = cplx(0.6, 0.0);  // phi row only
  s_df(0, 0) = cplx(0.5, 0.0);

  io::Bundle bundle;
  bundle.layout = PortLayout{m, n, h_count};
  bundle.grid = FrequencyGrid{2.4e9, 1e5, h_count, 2};
  bundle.blocks.flat = true;
  bundle.blocks.z_ref = cplx(50.0, 0.0);
  bundle.blocks.per_harmonic = {split_blocks(s_ff, s_fd, s_df, s_dd)};
  return bundle;
}

io::Bundle zero_bundle() {
  const int m = 2;
  const int n = 1;
  const int h_count = 3;
  io::Bundle bundle;
  bundle.layout = PortLayout{m, n, h_count};
  bundle.grid = FrequencyGrid{2.4e9, 1e5, h_count, 2};
  bundle.blocks.flat = true;
  bundle.blocks.z_ref = cplx(50.0, 0.0);
  bundle.blocks.per_harmonic = {split_blocks(
      MatrixXcd::Zero(2 * m, 2 * m), MatrixXcd::Zero(2 * m, n), MatrixXcd::Zero(n, 2 * m),
      MatrixXcd::Zero(n, n))};
  return bundle;
}

io::Bundle random_bundle(std::uint64_t seed, int m, int n, int h_count, bool flat,
                         double dd_scale, bool reciprocal) {
  Rng rng(seed);
  io::Bundle bundle;
  bundle.layout = PortLayout{m, n, h_count};
  bundle.grid = FrequencyGrid{2.4e9, 1e5, h_count, (h_count + 1) / 2};
  bundle.blocks.flat = flat;
  bundle.blocks.z_ref = cplx(50.0, 0.0);
  const int entries = flat ? 1 : h_count;
  for (int e = 0; e < entries; ++e) {
    MatrixXcd s_ff = 0.3 * random_matrix(rng, 2 * m, 2 * m);
    if (reciprocal) s_ff = ((s_ff + s_ff.transpose()) / 2.0).eval();
    MatrixXcd s_fd = 0.4 * random_matrix(rng, 2 * m, n);
    MatrixXcd s_df = reciprocal ? MatrixXcd(s_fd.transpose())
                                : MatrixXcd(0.4 * random_matrix(rng, n, 2 * m));
    MatrixXcd s_dd = random_matrix(rng, n, n);
    if (reciprocal) s_dd = ((s_dd + s_dd.transpose()) / 2.0).eval();
    scale_to_norm(s_dd, dd_scale);
    bundle.blocks.per_harmonic.push_back(split_blocks(s_ff, s_fd, s_df, s_dd));
  }
  return bundle;
}

namespace {

struct TwoState {
  double delay;
  double duty_on;
};

// measured two-state schedules: normalised delay to the on-transition and
// on-state duty, one row per load port
constexpr std::array<TwoState, 9> regime_o{{{0.0, 0.5},
                                            {0.1, 0.5},
                                            {0.2, 0.5},
                                            {0.3, 0.5},
                                            {0.4, 0.5},
                                            {0.5, 0.5},
                                            {0.6, 0.5},
                                            {0.7, 0.5},
                                            {0.8, 0.5}}};
constexpr std::array<TwoState, 9> regime_ii{{{0.23, 0.22},
                                             {0.43, 0.2},
                                             {0.32, 0.82},
                                             {0.69, 0.48},
                                             {0.51, 0.85},
                                             {0.43, 0.5},
                                             {0.55, 0.17},
                                             {0.64, 0.17},
                                             {0.56, 0.19}}};
constexpr std::array<TwoState, 9> regime_iii{{{0.6, 0.7},
                                              {0.32, 0.28},
                                              {0.16, 0.73},
                                              {0.67, 0.35},
                                              {0.44, 0.83},
                                              {0.3, 0.31},
                                              {0.49, 0.24},
                                              {0.73, 0.22},
                                              {0.56, 0.71}}};
constexpr std::array<TwoState, 9> regime_iv{{{0.38, 0.54},
                                             {0.29, 0.54},
                                             {0.11, 0.62},
                                             {0.71, 0.41},
                                             {0.57, 0.43},
                                             {0.31, 0.5},
                                             {0.56, 0.42},
                                             {0.51, 0.53},
                                             {0.31, 0.48}}};
constexpr std::array<TwoState, 9> regime_v{{{0.71, 0.73},
                                            {0.41, 0.3},
                                            {0.13, 0.74},
                                            {0.07, 0.19},
                                            {0.27, 0.31},
                                            {0.41, 0.29},
                                            {0.29, 0.25},
                                            {0.97, 0.28},
                                            {0.72, 0.72}}};

const std::array<TwoState, 9>& regime_rows(const std::string& regime) {
  if (regime == "O") return regime_o;
  if (regime == "II") return regime_ii;
  if (regime == "III") return regime_iii;
  if (regime == "IV") return regime_iv;
  if (regime == "V") return regime_v;
  throw std::invalid_argument("unknown regime '" + regime + "'");
}

}  // namespace

ModulationPlan regime_plan(const std::string& regime) {
  const auto& rows = regime_rows(regime);
  ModulationPlan plan;
  plan.f_m_hz = 1e5;
  plan.regime_id = regime;
  for (const TwoState& row : rows) {
    PortSchedule schedule;
    const DirectReflection off{cplx(-1.0, 0.0)};
    const DirectReflection on{cplx(1.0, 0.0)};
    // the on-window [delay, delay + duty_on) wraps modulo one period
    const double wrap = row.delay + row.duty_on - 1.0;
    if (wrap > 0.0) {
      schedule.segments.push_back({on, wrap});
      schedule.segments.push_back({off, 1.0 - row.duty_on});
      schedule.segments.push_back({on, 1.0 - row.delay});
    } else {
      schedule.segments.push_back({off, row.delay});
      schedule.segments.push_back({on, row.duty_on});
      schedule.segments.push_back({off, -wrap});
    }
    plan.schedules.push_back(std::move(schedule));
  }
  return plan;
}

ModulationPlan static_plan(int ports, cplx gamma) {
  ModulationPlan plan;
  plan.f_m_hz = 1e5;
  for (int p = 0; p < ports; ++p) {
    PortSchedule schedule;
    schedule.segments.push_back({DirectReflection{gamma}, 1.0});
    plan.schedules.push_back(std::move(schedule));
  }
  return plan;
}

std::string data_path(const std::string& rel) {
  return std::string(POLYSCAT_DATA_DIR) + "/" + rel;
}

namespace {

std::string fmt(double v) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_matrix(std::ostream& out, const MatrixXcd& m, const std::string& indent) {
  out << "[";
  for (int r = 0; r < m.rows(); ++r) {
    out << (r ? ",\n" + indent + " " : "");
    out << "[";
    for (int c = 0; c < m.cols(); ++c) {
      out << (c ? ", " : "") << "[" << fmt(m(r, c).real()) << ", " << fmt(m(r, c).imag())
          << "]";
    }
    out << "]";
  }
  out << "]";
}

}  // namespace

void write_bundle_json(const std::string& path, const io::Bundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "{\n";
  out << "  \"format_version\": 1,\n";
  out << "  \"layout\": {\"M\": " << bundle.layout.num_directions
      << ", \"N\": " << bundle.layout.num_loads << ", \"H\": " << bundle.layout.num_harmonics
      << ", \"h_c\": " << bundle.grid.center_index << "},\n";
  out << "  \"grid\": {\"f_in_hz\": " << fmt(bundle.grid.f_in_hz)
      << ", \"f_m_hz\": " << fmt(bundle.grid.f_m_hz) << "},\n";
  out << "  \"z_ref\": {\"re\": " << fmt(bundle.blocks.z_ref.real())
      << ", \"im\": " << fmt(bundle.blocks.z_ref.imag()) << "},\n";
  out << "  \"flat\": " << (bundle.blocks.flat ? "true" : "false") << ",\n";
  out << "  \"harmonics\": [\n";
  for (size_t i = 0; i < bundle.blocks.per_harmonic.size(); ++i) {
    const HarmonicBlocks& hb = bundle.blocks.per_harmonic[i];
    out << "    {\"h\": " << (i + 1) << ",\n";
    out << "     \"s_ff\": {\n      \"pp\": ";
    write_matrix(out, hb.ff_pp, "            ");
    out << ",\n      \"tp\": ";
    write_matrix(out, hb.ff_tp, "            ");
    out << ",\n      \"pt\": ";
    write_matrix(out, hb.ff_pt, "            ");
    out << ",\n      \"tt\": ";
    write_matrix(out, hb.ff_tt, "            ");
    out << "},\n     \"s_fd\": {\n      \"p\": ";
    write_matrix(out, hb.fd_p, "            ");
    out << ",\n      \"t\": ";
    write_matrix(out, hb.fd_t, "            ");
    out << "},\n     \"s_df\": {\n      \"p\": ";
    write_matrix(out, hb.df_p, "            ");
    out << ",\n      \"t\": ";
    write_matrix(out, hb.df_t, "            ");
    out << "},\n     \"s_dd\": ";
    write_matrix(out, hb.dd, "            ");
    out << "}" << (i + 1 < bundle.blocks.per_harmonic.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace polyscat::testsupport
