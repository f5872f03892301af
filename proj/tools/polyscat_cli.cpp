// polyscat: harmonic scattering off load-modulated reconfigurable surfaces.
// subcommands: coeffs, solve, bcs, validate, converge. every command is
// deterministic: identical invocations produce byte-identical output.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyscat/assembly.hpp"
#include "polyscat/errors.hpp"
#include "polyscat/io/bundle.hpp"
#include "polyscat/io/context.hpp"
#include "polyscat/io/plan.hpp"
#include "polyscat/io/results.hpp"
#include "polyscat/load.hpp"
#include "polyscat/model.hpp"
#include "polyscat/oracle.hpp"
#include "polyscat/solver.hpp"

namespace {

using namespace polyscat;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;       // bad flags, malformed files, failed validation
constexpr int exit_singular = 3;    // interaction system numerically singular
constexpr int exit_mismatch = 4;    // reference comparison failed

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// complex literals like "1+0j", "-0.5j", "2", "-1-1j"
cplx parse_complex(const std::string& raw) {
  std::string s;
  for (const char c : raw)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw validation_error("empty complex literal");

  const bool has_j = (s.back() == 'j' || s.back() == 'i');
  const auto to_double = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw validation_error("malformed complex literal '" + raw + "'");
    }
    if (used != part.size()) throw validation_error("malformed complex literal '" + raw + "'");
    return v;
  };

  if (!has_j) return {to_double(s), 0.0};
  s.pop_back();
  // split real|imag at the last sign that is not an exponent sign or leading
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s)};
  return {to_double(s.substr(0, split)), to_double(s.substr(split))};
}

Pol parse_pol(const std::string& s) {
  if (s == "phi") return Pol::phi;
  if (s == "theta") return Pol::theta;
  throw validation_error("polarisation must be 'phi' or 'theta', got '" + s + "'");
}

// --excite "tau=1,pol=phi,amp=1+0j[,h=13]"; entries at the same (h, tau) merge
Excitation build_excitation(const std::vector<std::string>& specs, int default_h) {
  Excitation exc;
  std::map<std::pair<int, int>, size_t> slot;
  const auto add = [&](int h, int tau, Pol pol, cplx amp) {
    const auto key = std::make_pair(h, tau);
    const auto it = slot.find(key);
    size_t at;
    if (it == slot.end()) {
      exc.entries.push_back({h, tau, {0.0, 0.0}, {0.0, 0.0}});
      at = exc.entries.size() - 1;
      slot[key] = at;
    } else {
      at = it->second;
    }
    if (pol == Pol::phi) exc.entries[at].a_phi += amp;
    else exc.entries[at].a_theta += amp;
  };

  if (specs.empty()) {
    add(default_h, 1, Pol::phi, {1.0, 0.0});
    return exc;
  }
  for (const std::string& spec : specs) {
    int h = default_h;
    int tau = 1;
    Pol pol = Pol::phi;
    cplx amp{1.0, 0.0};
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw validation_error("excitation term '" + item + "' is not key=value");
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (key == "tau") tau = std::stoi(value);
      else if (key == "pol") pol = parse_pol(value);
      else if (key == "amp") amp = parse_complex(value);
      else if (key == "h") h = std::stoi(value);
      else throw validation_error("unknown excitation key '" + key + "'");
    }
    add(h, tau, pol, amp);
  }
  return exc;
}

io::ResultFormat parse_format(const std::string& s) {
  if (s == "csv") return io::ResultFormat::csv;
  if (s == "json") return io::ResultFormat::json;
  throw validation_error("format must be 'csv' or 'json', got '" + s + "'");
}

void emit(const std::vector<io::ResultRecord>& records, const std::string& out_path,
          io::ResultFormat format) {
  if (out_path.empty()) {
    std::cout << io::render_records(records, format);
  } else {
    io::write_spectrum(records, out_path, format);
  }
}

// shared solve pipeline: stacked blocks + load matrix -> outgoing waves
ScatterResult solve_pipeline(const io::Bundle& bundle, const ModulationPlan& plan,
                             const Excitation& exc) {
  if (static_cast<int>(plan.schedules.size()) != bundle.layout.num_loads) {
    std::ostringstream msg;
    msg << "plan drives " << plan.schedules.size() << " load ports, bundle has "
        << bundle.layout.num_loads;
    throw validation_error(msg.str());
  }
  const MatrixXcd c_ff = assemble_structural(bundle.blocks, bundle.layout);
  const MatrixXcd c_fd = assemble_fd(bundle.blocks, bundle.layout);
  const MatrixXcd c_df = assemble_df(bundle.blocks, bundle.layout);
  const MatrixXcd c_dd = assemble_dd(bundle.blocks, bundle.layout);
  const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, bundle.blocks, bundle.grid);
  const MatrixXcd c_sys = system_matrix(c_ff, c_fd, c_df, c_dd, c_l.values);
  return scatter(c_sys, exc, bundle.layout, bundle.grid);
}

int shared_tau(const Excitation& exc) {
  int tau = exc.entries.front().direction;
  for (const ExcitationEntry& e : exc.entries)
    if (e.direction != tau) return 0;  // mixed-direction excitation
  return tau;
}

void warn_if_off_middle(const FrequencyGrid& grid) {
  if (grid.center_off_middle())
    std::cerr << "warning: excitation harmonic " << grid.center_index
              << " sits away from the middle of the ladder; one sideband window is short\n";
}

int cmd_coeffs(const std::string& plan_path, int port, int kmax, bool numeric, long samples,
               int harmonic) {
  const ModulationPlan plan = io::load_plan(plan_path);
  if (port < 1 || port > static_cast<int>(plan.schedules.size())) {
    std::ostringstream msg;
    msg << "port " << port << " out of range [1, " << plan.schedules.size() << "]";
    throw index_error(msg.str());
  }
  const PortSchedule& schedule = plan.schedules[static_cast<size_t>(port - 1)];
  // direct-reflection and impedance states evaluated against 50 ohm at the requested harmonic
  const std::vector<cplx> gammas = gamma_table(schedule, harmonic, 0.0, cplx(50.0, 0.0));

  std::cout << (numeric ? "k,re,im,re_numeric,im_numeric,abs_diff\n" : "k,re,im\n");
  double max_diff = 0.0;
  for (int k = -kmax; k <= kmax; ++k) {
    const cplx closed = fourier_coefficient(schedule, gammas, k);
    std::cout << k << ',' << format_double(closed.real()) << ','
              << format_double(closed.imag());
    if (numeric) {
      const cplx quad = fourier_coefficient_numeric(schedule, gammas, k, samples);
      const double diff = std::abs(closed - quad);
      max_diff = std::max(max_diff, diff);
      std::cout << ',' << format_double(quad.real()) << ',' << format_double(quad.imag()) << ','
                << format_double(diff);
    }
    std::cout << '\n';
  }
  if (numeric)
    std::cout << "# max |closed - numeric| = " << format_double(max_diff) << "\n";
  return exit_ok;
}

int cmd_solve(const std::string& bundle_path, const std::string& plan_path,
              const std::vector<std::string>& excite, int rho, const std::string& out_path,
              const std::string& format) {
  const io::Bundle bundle = io::load_bundle(bundle_path);
  const ModulationPlan plan = io::load_plan(plan_path);
  warn_if_off_middle(bundle.grid);
  const Excitation exc = build_excitation(excite, bundle.grid.center_index);
  const ScatterResult result = solve_pipeline(bundle, plan, exc);
  const int tau = shared_tau(exc);

  std::vector<int> rhos;
  if (rho > 0) rhos.push_back(rho);
  else for (int r = 1; r <= bundle.layout.num_directions; ++r) rhos.push_back(r);

  std::vector<io::ResultRecord> records;
  for (const int r : rhos) {
    for (const SpectrumRow& row : harmonic_spectrum(result, r)) {
      io::ResultRecord rec;
      rec.regime_id = plan.regime_id;
      rec.tau = tau;
      rec.rho = r;
      rec.h = row.h;
      rec.k_offset = row.k_offset;
      rec.f_hz = row.f_hz;
      rec.b_phi = row.b_phi;
      rec.b_theta = row.b_theta;
      rec.power_w = row.power_w;
      records.push_back(std::move(rec));
    }
  }
  emit(records, out_path, parse_format(format));
  return exit_ok;
}

// sweep the observation direction at one harmonic offset; the illumination is
// the canonical unit phi-polarised tone at (tau, h_c)
int cmd_bcs(const std::string& bundle_path, const std::string& plan_path,
            const std::string& ctx_path, int tau, int k_offset, const std::string& out_path,
            const std::string& format) {
  const io::Bundle bundle = io::load_bundle(bundle_path);
  const ModulationPlan plan = io::load_plan(plan_path);
  warn_if_off_middle(bundle.grid);
  const BcsContext ctx =
      io::load_bcs_context(ctx_path, bundle.grid, bundle.layout.num_directions);
  const int h_c = bundle.grid.center_index;
  const int h = h_c + k_offset;
  if (h < 1 || h > bundle.grid.num_harmonics) {
    std::ostringstream msg;
    msg << "harmonic offset " << k_offset << " leaves the ladder (harmonic " << h
        << " of 1.." << bundle.grid.num_harmonics << ")";
    throw index_error(msg.str());
  }
  Excitation exc;
  exc.entries.push_back({h_c, tau, {1.0, 0.0}, {0.0, 0.0}});
  const ScatterResult result = solve_pipeline(bundle, plan, exc);

  std::vector<io::ResultRecord> records;
  for (int rho = 1; rho <= bundle.layout.num_directions; ++rho) {
    const BcsValue v = bcs(result, exc, ctx, h, rho, tau, h_c);
    io::ResultRecord rec;
    rec.regime_id = plan.regime_id;
    rec.tau = tau;
    rec.rho = rho;
    rec.h = h;
    rec.k_offset = k_offset;
    rec.f_hz = frequency_of(result.grid, h);
    rec.b_phi = result.at(h, Pol::phi, rho);
    rec.b_theta = result.at(h, Pol::theta, rho);
    rec.power_w = std::norm(rec.b_phi) + std::norm(rec.b_theta);
    rec.bcs_m2 = v.sigma_m2;
    rec.bcs_dbm2 = v.sigma_dbm2;
    records.push_back(std::move(rec));
  }
  emit(records, out_path, parse_format(format));
  return exit_ok;
}

int cmd_validate(const std::string& bundle_path, const std::string& plan_path, long samples,
                 double tol) {
  const io::Bundle bundle = io::load_bundle(bundle_path);
  const ModulationPlan plan = io::load_plan(plan_path);
  warn_if_off_middle(bundle.grid);

  const int h_c = bundle.grid.center_index;
  const int kmax = std::min(h_c - 1, bundle.grid.num_harmonics - h_c);

  // both sides see the same snapped switching instants, so the comparison
  // probes the stacked model rather than grid placement
  const ModulationPlan snapped = snap_plan_to_grid(plan, samples);
  Excitation exc;
  exc.entries.push_back({h_c, 1, {1.0, 0.0}, {0.0, 0.0}});

  const ScatterResult result = solve_pipeline(bundle, snapped, exc);
  const std::map<int, VectorXcd> model = spectrum_by_offset(result, kmax);

  const HarmonicBlocks& center = bundle.blocks.at(h_c, bundle.layout);
  const OracleSpectrum oracle = quasi_static_spectrum(
      center, bundle.blocks.z_ref, bundle.grid.f_in_hz, plan, exc, samples);
  const CompareReport report = compare(model, oracle.offsets_up_to(kmax), tol);

  const bool dispersive = !bundle.blocks.flat;
  std::cout << "offsets |k| <= " << kmax << ", samples " << samples << ", tolerance "
            << format_double(tol) << "\n";
  std::cout << "k,model_norm,reference_norm,abs_err,rel_err,ok\n";
  for (const CompareRow& row : report.rows)
    std::cout << row.k << ',' << format_double(row.model_norm) << ','
              << format_double(row.oracle_norm) << ',' << format_double(row.abs_err) << ','
              << format_double(row.rel_err) << ',' << (row.ok ? "yes" : "no") << '\n';
  std::cout << "# max_abs_err = " << format_double(report.max_abs_err)
            << ", spectrum_scale = " << format_double(report.spectrum_scale) << "\n";

  if (dispersive) {
    // the quasi-static reference cannot follow frequency-dependent blocks;
    // report the divergence instead of judging it
    std::cout << "# bundle is frequency-dependent: divergence from the quasi-static "
                 "reference is expected, not checked\n";
    std::cout << "verdict: divergence "
              << format_double(report.max_abs_err / std::max(report.spectrum_scale, 1e-300))
              << " (informational)\n";
    return exit_ok;
  }
  std::cout << "verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? exit_ok : exit_mismatch;
}

// probe spec "rho=1,k=3": k entries repeat; "k=+-3" (or "k=±3") adds both signs
ConvergenceProbe parse_probe(const std::string& spec) {
  ConvergenceProbe probe;
  if (spec.empty()) {
    probe.rho = 1;
    probe.offsets = {-3, -2, -1, 0, 1, 2, 3};
    return probe;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw validation_error("probe term '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "rho") {
      probe.rho = std::stoi(value);
    } else if (key == "k") {
      bool both = false;
      if (value.rfind("+-", 0) == 0) {
        both = true;
        value = value.substr(2);
      } else if (value.rfind("\xc2\xb1", 0) == 0) {  // UTF-8 plus-minus sign
        both = true;
        value = value.substr(2);
      }
      const int k = std::stoi(value);
      probe.offsets.push_back(k);
      if (both && k != 0) probe.offsets.push_back(-k);
    } else {
      throw validation_error("unknown probe key '" + key + "'");
    }
  }
  if (probe.offsets.empty()) probe.offsets = {-3, -2, -1, 0, 1, 2, 3};
  std::sort(probe.offsets.begin(), probe.offsets.end());
  probe.offsets.erase(std::unique(probe.offsets.begin(), probe.offsets.end()),
                      probe.offsets.end());
  return probe;
}

int cmd_converge(const std::string& bundle_path, const std::string& plan_path, int hmax,
                 const std::string& probe_spec, double tol) {
  const io::Bundle bundle = io::load_bundle(bundle_path);
  const ModulationPlan plan = io::load_plan(plan_path);
  const ConvergenceProbe probe = parse_probe(probe_spec);
  if (hmax < 5) throw validation_error("hmax must be at least 5");
  if (hmax % 2 == 0)
    throw validation_error("hmax must be odd so the tone sits at the middle of the ladder");

  std::vector<int> h_counts;
  for (int h = 5; h <= hmax; h += 2) h_counts.push_back(h);

  const auto solve_at = [&](int h_count) {
    io::Bundle sub = bundle;
    const int h_c = (h_count + 1) / 2;
    if (bundle.blocks.flat) {
      sub.layout.num_harmonics = h_count;
      sub.grid.num_harmonics = h_count;
      sub.grid.center_index = h_c;
    } else {
      // carve a centred window out of the tabulated harmonics
      const int lo = bundle.grid.center_index - (h_count - 1) / 2;
      const int hi = bundle.grid.center_index + (h_count - 1) / 2;
      if (lo < 1 || hi > bundle.grid.num_harmonics) {
        std::ostringstream msg;
        msg << "bundle tabulates harmonics 1.." << bundle.grid.num_harmonics
            << "; cannot scan H = " << h_count << " around harmonic "
            << bundle.grid.center_index;
        throw validation_error(msg.str());
      }
      sub.blocks.per_harmonic.assign(
          bundle.blocks.per_harmonic.begin() + (lo - 1),
          bundle.blocks.per_harmonic.begin() + hi);
      sub.layout.num_harmonics = h_count;
      sub.grid.num_harmonics = h_count;
      sub.grid.center_index = h_c;
    }
    Excitation exc;
    exc.entries.push_back({h_c, 1, {1.0, 0.0}, {0.0, 0.0}});
    return solve_pipeline(sub, plan, exc);
  };

  const ConvergenceReport report = convergence_check(solve_at, h_counts, probe, tol);

  std::cout << "H";
  for (const int k : report.offsets) std::cout << ",|b| at k=" << k;
  std::cout << "\n";
  for (const ConvergenceRow& row : report.rows) {
    std::cout << row.num_harmonics;
    for (const auto& mag : row.magnitudes) {
      std::cout << ',';
      if (mag) std::cout << format_double(*mag);
    }
    std::cout << "\n";
  }
  if (report.settled_h)
    std::cout << "settled H = " << *report.settled_h << " (tolerance "
              << format_double(tol) << ")\n";
  else
    std::cout << "not settled up to H = " << hmax << " (tolerance " << format_double(tol)
              << ")\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic scattering off load-modulated reconfigurable scatterers"};
  app.require_subcommand(1);

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "switching-waveform Fourier table for one port");
  std::string co_plan;
  int co_port = 1, co_kmax = 8, co_harmonic = 1;
  long co_samples = 65536;
  bool co_numeric = false;
  coeffs->add_option("--plan", co_plan, "modulation plan (TOML)")->required();
  coeffs->add_option("--port", co_port, "load port index (1-based)")->required();
  coeffs->add_option("--kmax", co_kmax, "largest |k| to print")->required();
  coeffs->add_flag("--numeric", co_numeric, "add quadrature columns and difference");
  coeffs->add_option("--samples", co_samples, "quadrature sample count");
  coeffs->add_option("--harmonic", co_harmonic, "harmonic for impedance evaluation");

  // solve
  auto* solve = app.add_subcommand("solve", "outgoing harmonic spectrum");
  std::string so_bundle, so_plan, so_out, so_format = "csv";
  std::vector<std::string> so_excite;
  int so_rho = 0;
  solve->add_option("--bundle", so_bundle, "scatterer bundle (JSON)")->required();
  solve->add_option("--plan", so_plan, "modulation plan (TOML)")->required();
  solve->add_option("--excite", so_excite,
                    "excitation term \"tau=1,pol=phi,amp=1+0j[,h=H]\" (repeatable)")
      ->required();
  solve->add_option("--rho", so_rho, "restrict output to one observation direction");
  solve->add_option("--out", so_out, "output file (stdout when omitted)");
  solve->add_option("--format", so_format, "csv or json");

  // bcs
  auto* bcs_cmd =
      app.add_subcommand("bcs", "conversion cross-section vs direction at one offset");
  std::string bc_bundle, bc_plan, bc_ctx, bc_out, bc_format = "csv";
  int bc_tau = 1, bc_offset = 0;
  bool bc_sweep = false;
  bcs_cmd->add_option("--bundle", bc_bundle, "scatterer bundle (JSON)")->required();
  bcs_cmd->add_option("--plan", bc_plan, "modulation plan (TOML)")->required();
  bcs_cmd->add_option("--ctx", bc_ctx, "measurement context (JSON)")->required();
  bcs_cmd->add_option("--tau", bc_tau, "illumination direction")->required();
  bcs_cmd->add_flag("--sweep-rho", bc_sweep, "emit one row per observation direction")
      ->required();
  bcs_cmd->add_option("--harmonic-offset", bc_offset, "harmonic offset k from the carrier")
      ->required();
  bcs_cmd->add_option("--out", bc_out, "output file (stdout when omitted)");
  bcs_cmd->add_option("--format", bc_format, "csv or json");

  // validate
  auto* validate = app.add_subcommand("validate", "compare against the quasi-static reference");
  std::string va_bundle, va_plan;
  long va_samples = 65536;
  double va_tol = 1e-9;
  validate->add_option("--bundle", va_bundle, "scatterer bundle (JSON)")->required();
  validate->add_option("--plan", va_plan, "modulation plan (TOML)")->required();
  validate->add_option("--samples", va_samples, "time samples (power of two >= 1024)");
  validate->add_option("--tol", va_tol, "comparison tolerance");

  // converge
  auto* converge = app.add_subcommand("converge", "harmonic-count convergence scan");
  std::string cv_bundle, cv_plan, cv_probe;
  int cv_hmax = 25;
  double cv_tol = 1e-6;
  converge->add_option("--bundle", cv_bundle, "scatterer bundle (JSON)")->required();
  converge->add_option("--plan", cv_plan, "modulation plan (TOML)")->required();
  converge->add_option("--hmax", cv_hmax, "largest harmonic count (odd)")->required();
  converge->add_option("--probe", cv_probe, "probe spec \"rho=1,k=+-3\"");
  converge->add_option("--tol", cv_tol, "settling tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*coeffs)
      return cmd_coeffs(co_plan, co_port, co_kmax, co_numeric, co_samples, co_harmonic);
    if (*solve) return cmd_solve(so_bundle, so_plan, so_excite, so_rho, so_out, so_format);
    if (*bcs_cmd)
      return cmd_bcs(bc_bundle, bc_plan, bc_ctx, bc_tau, bc_offset, bc_out, bc_format);
    if (*validate) return cmd_validate(va_bundle, va_plan, va_samples, va_tol);
    if (*converge) return cmd_converge(cv_bundle, cv_plan, cv_hmax, cv_probe, cv_tol);
  } catch (const singular_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_singular;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
