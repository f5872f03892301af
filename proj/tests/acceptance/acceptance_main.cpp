// acceptance gate: ten numbered criteria covering the analytic switching
// spectra, the stacked harmonic solver, the quasi-static reference, the
// cross-section arithmetic and the published two-state schedules. each
// criterion prints exactly one PASS/FAIL line; the exit code is the number
// of failures. run `acceptance --only N` to run a single criterion.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "polyscat/assembly.hpp"
#include "polyscat/errors.hpp"
#include "polyscat/io/bundle.hpp"
#include "polyscat/io/context.hpp"
#include "polyscat/io/plan.hpp"
#include "polyscat/io/toml_lite.hpp"
#include "polyscat/load.hpp"
#include "polyscat/model.hpp"
#include "polyscat/oracle.hpp"
#include "polyscat/solver.hpp"

namespace {

using namespace polyscat;
using testsupport::Rng;
using testsupport::data_path;

constexpr double pi = std::numbers::pi;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// shared pipeline: stacked blocks + plan -> outgoing spectrum under the
// canonical unit phi tone at the excitation harmonic from direction 1

struct Assembled {
  MatrixXcd c_ff, c_fd, c_df, c_dd;
};

Assembled assemble_all(const io::Bundle& bundle) {
  return {assemble_structural(bundle.blocks, bundle.layout),
          assemble_fd(bundle.blocks, bundle.layout),
          assemble_df(bundle.blocks, bundle.layout),
          assemble_dd(bundle.blocks, bundle.layout)};
}

Excitation center_tone(const io::Bundle& bundle) {
  Excitation exc;
  exc.entries.push_back({bundle.grid.center_index, 1, {1.0, 0.0}, {0.0, 0.0}});
  return exc;
}

ScatterResult run_model(const io::Bundle& bundle, const ModulationPlan& plan) {
  const Assembled a = assemble_all(bundle);
  const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, bundle.blocks, bundle.grid);
  const MatrixXcd c_sys = system_matrix(a.c_ff, a.c_fd, a.c_df, a.c_dd, c_l.values);
  return scatter(c_sys, center_tone(bundle), bundle.layout, bundle.grid);
}

// total outgoing power at one harmonic offset, summed over directions and
// polarisations, for a 1 W incident tone
double offset_power(const ScatterResult& result, int k) {
  return spectrum_by_offset(result, std::abs(k)).at(k).squaredNorm();
}

// ---------------------------------------------------------------------------
// published two-state schedule values (turn-on delay, on dwell) per port

struct TwoState {
  double r_on, duty_on;
};

const std::map<std::string, std::vector<TwoState>> published_schedules = {
    {"O",
     {{0.0, 0.5}, {0.1, 0.5}, {0.2, 0.5}, {0.3, 0.5}, {0.4, 0.5}, {0.5, 0.5}, {0.6, 0.5},
      {0.7, 0.5}, {0.8, 0.5}}},
    {"II",
     {{0.23, 0.22}, {0.43, 0.2}, {0.32, 0.82}, {0.69, 0.48}, {0.51, 0.85}, {0.43, 0.5},
      {0.55, 0.17}, {0.64, 0.17}, {0.56, 0.19}}},
    {"III",
     {{0.6, 0.7}, {0.32, 0.28}, {0.16, 0.73}, {0.67, 0.35}, {0.44, 0.83}, {0.3, 0.31},
      {0.49, 0.24}, {0.73, 0.22}, {0.56, 0.71}}},
    {"IV",
     {{0.38, 0.54}, {0.29, 0.54}, {0.11, 0.62}, {0.71, 0.41}, {0.57, 0.43}, {0.31, 0.5},
      {0.56, 0.42}, {0.51, 0.53}, {0.31, 0.48}}},
    {"V",
     {{0.71, 0.73}, {0.41, 0.3}, {0.13, 0.74}, {0.07, 0.19}, {0.27, 0.31}, {0.41, 0.29},
      {0.29, 0.25}, {0.97, 0.28}, {0.72, 0.72}}}};

const std::vector<std::pair<std::string, std::string>> plan_files = {
    {"O", "plans/regime_o.toml"},
    {"II", "plans/regime_ii.toml"},
    {"III", "plans/regime_iii.toml"},
    {"IV", "plans/regime_iv.toml"},
    {"V", "plans/regime_v.toml"}};

// ---------------------------------------------------------------------------
// regression goldens, frozen from this repository's own deterministic
// fixtures at the recorded sample counts. they guard against silent drift;
// the analytic gates in each criterion are what define correctness.

// quasi-static reference, coupled measurement fixture, published schedule O,
// 4096 samples: total power revived at offsets +2 / -2 by load-to-load
// coupling (watts per 1 W incident)
constexpr double golden_revived_power_plus2 = 2.7129708649376492e-12;
constexpr double golden_revived_power_minus2 = 2.4590817100199581e-12;

// harmonic solver, coupled measurement fixture: dominant-offset total power
// for the near-complementary schedule pair (watts per 1 W incident)
constexpr double golden_regime_iii_power_minus2 = 0.00055847765006846242;
constexpr double golden_regime_v_power_plus2 = 0.00058024057409225983;

// ---------------------------------------------------------------------------
// criterion 1: closed-form coefficients vs high-resolution quadrature over
// randomised schedules (Q <= 6 segments, states inside the unit disk)

bool criterion_1(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int num_schedules = 200;
  constexpr int kmax = 16;
  constexpr long samples = 1L << 20;
  constexpr double tol = 1e-8;

  double max_diff = 0.0;
  for (int s = 0; s < num_schedules; ++s) {
    Rng rng(0xacce5501u + static_cast<std::uint64_t>(s));
    const int q = 1 + static_cast<int>((rng.uniform() + 1.0) * 3.0) % 6;
    PortSchedule schedule;
    std::vector<cplx> gammas;
    double total = 0.0;
    std::vector<double> raw(q);
    for (int i = 0; i < q; ++i) {
      raw[i] = 0.05 + 0.5 * (rng.uniform() + 1.0);
      total += raw[i];
    }
    for (int i = 0; i < q; ++i) {
      cplx g = rng.complex_uniform();
      if (std::abs(g) > 1.0) g /= std::abs(g);
      schedule.segments.push_back({DirectReflection{g}, raw[i] / total});
      gammas.push_back(g);
    }
    for (int k = -kmax; k <= kmax; ++k) {
      const cplx closed = fourier_coefficient(schedule, gammas, k);
      const cplx quad = fourier_coefficient_numeric(schedule, gammas, k, samples);
      max_diff = std::max(max_diff, std::abs(closed - quad));
    }
  }
  const double elapsed = seconds_since(t0);

  std::ostringstream os;
  os << "max |closed - quadrature| = " << max_diff << " over " << num_schedules
     << " schedules, |k| <= " << kmax << ", " << elapsed << " s";
  detail = os.str();
  return max_diff <= tol && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// criterion 2: half-duty +/-1 switching. first lines land on -+2j/pi, even
// lines vanish, and a pure turn-on delay never changes line magnitudes

bool criterion_2(std::string& detail) {
  const ModulationPlan plan = testsupport::regime_plan("O");
  const cplx expect_plus(0.0, -2.0 / pi);

  double worst_first = 0.0;   // |Gamma_{+-1}| deviation from 2/pi, all ports
  double worst_even = 0.0;    // largest |Gamma_k| for even k != 0
  double worst_pattern = 0.0; // port 1 sign pattern and odd-line values
  for (size_t p = 0; p < plan.schedules.size(); ++p) {
    const PortSchedule& schedule = plan.schedules[p];
    const std::vector<cplx> gammas = gamma_table(schedule, 1, 0.0, cplx(50.0, 0.0));
    for (int k = -16; k <= 16; ++k) {
      const cplx g = fourier_coefficient(schedule, gammas, k);
      if (k == 1 || k == -1) worst_first = std::max(worst_first, std::abs(std::abs(g) - 2.0 / pi));
      if (k != 0 && k % 2 == 0) worst_even = std::max(worst_even, std::abs(g));
      if (p == 0 && k % 2 != 0) {
        // zero-delay square wave: Gamma_k = -2j/(pi k) for odd k
        const cplx expect = expect_plus / static_cast<double>(k);
        worst_pattern = std::max(worst_pattern, std::abs(g - expect));
      }
    }
  }

  std::ostringstream os;
  os << "| |Gamma_1| - 2/pi | <= " << worst_first << ", even lines <= " << worst_even
     << ", zero-delay pattern <= " << worst_pattern;
  detail = os.str();
  return worst_first <= 1e-12 && worst_even <= 1e-14 && worst_pattern <= 1e-12;
}

// ---------------------------------------------------------------------------
// criterion 3: partial line-power sums climb monotonically to the mean
// squared waveform for every published two-state schedule

bool criterion_3(std::string& detail) {
  constexpr int kmax = 10000;
  double worst_rel = 0.0;
  bool monotone = true;

  for (const auto& [regime, file] : plan_files) {
    const ModulationPlan plan = io::load_plan(data_path(file));
    for (const PortSchedule& schedule : plan.schedules) {
      const std::vector<cplx> gammas = gamma_table(schedule, 1, 0.0, cplx(50.0, 0.0));
      double target = 0.0;
      for (size_t q = 0; q < schedule.segments.size(); ++q)
        target += std::norm(gammas[q]) * schedule.segments[q].duty;

      double sum = std::norm(fourier_coefficient(schedule, gammas, 0));
      double prev = sum;
      for (int k = 1; k <= kmax; ++k) {
        sum += std::norm(fourier_coefficient(schedule, gammas, k));
        sum += std::norm(fourier_coefficient(schedule, gammas, -k));
        if (sum < prev) monotone = false;
        prev = sum;
      }
      worst_rel = std::max(worst_rel, std::abs(sum - target) / target);
    }
  }

  std::ostringstream os;
  os << "worst relative deficit = " << worst_rel << " at |k| <= " << kmax
     << (monotone ? ", monotone" : ", NOT monotone");
  detail = os.str();
  return worst_rel <= 1e-4 && monotone;
}

// ---------------------------------------------------------------------------
// criterion 4: load-loop degenerations of the stacked system matrix

bool criterion_4(std::string& detail) {
  const io::Bundle bundle = io::load_bundle(data_path("bundles/regime_flat.json"));
  const Assembled a = assemble_all(bundle);
  const int dim = bundle.layout.load_size();

  // open loop: zero load matrix must return the structural blocks bit-exactly
  const MatrixXcd zero_l = MatrixXcd::Zero(dim, dim);
  const MatrixXcd open_loop = system_matrix(a.c_ff, a.c_fd, a.c_df, a.c_dd, zero_l);
  const bool bit_exact = (open_loop.array() == a.c_ff.array()).all();

  // no load-to-load coupling: single bounce fd * l * df
  const ModulationPlan plan = io::load_plan(data_path("plans/regime_o.toml"));
  const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, bundle.blocks, bundle.grid);
  const MatrixXcd zero_dd = MatrixXcd::Zero(dim, dim);
  const MatrixXcd single = system_matrix(a.c_ff, a.c_fd, a.c_df, zero_dd, c_l.values);
  const MatrixXcd expected = a.c_ff + a.c_fd * c_l.values * a.c_df;
  const double single_err = (single - expected).cwiseAbs().maxCoeff();

  // scalar closed form: ff + fd l df / (1 - dd l)
  MatrixXcd ff(1, 1), fd(1, 1), df(1, 1), dd(1, 1), l(1, 1);
  ff << cplx(0.1, 0.0);
  fd << cplx(0.6, 0.0);
  df << cplx(0.5, 0.0);
  dd << cplx(0.25, 0.0);
  l << cplx(0.6, 0.0);
  const cplx scalar = system_matrix(ff, fd, df, dd, l)(0, 0);
  const double scalar_err = std::abs(scalar - cplx(0.1 + 0.18 / 0.85, 0.0));

  std::ostringstream os;
  os << "open loop " << (bit_exact ? "bit-exact" : "NOT bit-exact") << ", uncoupled error = "
     << single_err << ", scalar error = " << scalar_err;
  detail = os.str();
  return bit_exact && single_err <= 1e-14 && scalar_err <= 1e-12;
}

// ---------------------------------------------------------------------------
// criterion 5: harmonic solver vs quasi-static reference on the frequency-flat
// measurement-scale fixture without load-to-load coupling. with coupling the
// truncated harmonic ladder cannot reproduce the coupling-only even lines, so
// that divergence is reported as context, not judged.

bool criterion_5(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr long samples = 65536;
  constexpr int kmax = 10;
  constexpr double tol = 1e-9;

  const ModulationPlan plan = io::load_plan(data_path("plans/regime_o.toml"));
  const ModulationPlan snapped = snap_plan_to_grid(plan, samples);

  const auto compare_offsets = [&](const io::Bundle& bundle) {
    const Assembled a = assemble_all(bundle);
    const PolyharmonicLoadMatrix c_l =
        assemble_load_matrix(snapped, bundle.blocks, bundle.grid);
    const MatrixXcd c_sys = system_matrix(a.c_ff, a.c_fd, a.c_df, a.c_dd, c_l.values);
    const ScatterResult result = scatter(c_sys, center_tone(bundle), bundle.layout, bundle.grid);
    const HarmonicBlocks& center = bundle.blocks.at(bundle.grid.center_index, bundle.layout);
    const OracleSpectrum oracle = quasi_static_spectrum(
        center, bundle.blocks.z_ref, bundle.grid.f_in_hz, plan, center_tone(bundle), samples);
    return compare(spectrum_by_offset(result, kmax), oracle.offsets_up_to(kmax), tol);
  };

  const CompareReport uncoupled =
      compare_offsets(io::load_bundle(data_path("bundles/regime_flat_uncoupled.json")));
  const CompareReport coupled =
      compare_offsets(io::load_bundle(data_path("bundles/regime_flat.json")));
  const double elapsed = seconds_since(t0);

  std::ostringstream os;
  os << "uncoupled max_abs_err = " << uncoupled.max_abs_err << " (scale "
     << uncoupled.spectrum_scale << "), |k| <= " << kmax << ", " << elapsed
     << " s; coupled fixture diverges at coupling-only lines as expected (max_abs_err = "
     << coupled.max_abs_err << ", truncated multi-bounce chains)";
  detail = os.str();
  return uncoupled.pass && elapsed < 30.0;
}

// ---------------------------------------------------------------------------
// criterion 6: even lines of half-duty schedules vanish without load-to-load
// coupling and revive with it; the revived level is pinned by a golden taken
// from the quasi-static reference

bool criterion_6(std::string& detail) {
  const ModulationPlan plan = io::load_plan(data_path("plans/regime_o.toml"));

  const io::Bundle uncoupled = io::load_bundle(data_path("bundles/regime_flat_uncoupled.json"));
  const ScatterResult dark = run_model(uncoupled, plan);
  const double dark_plus = offset_power(dark, 2);
  const double dark_minus = offset_power(dark, -2);

  const io::Bundle coupled = io::load_bundle(data_path("bundles/regime_flat.json"));
  const ScatterResult lit = run_model(coupled, plan);
  const double lit_plus = offset_power(lit, 2);
  const double lit_minus = offset_power(lit, -2);

  // golden regression check against the quasi-static reference
  constexpr long samples = 4096;
  const HarmonicBlocks& center = coupled.blocks.at(coupled.grid.center_index, coupled.layout);
  const OracleSpectrum oracle = quasi_static_spectrum(
      center, coupled.blocks.z_ref, coupled.grid.f_in_hz, plan, center_tone(coupled), samples);
  const double ref_plus = oracle.at(2).squaredNorm();
  const double ref_minus = oracle.at(-2).squaredNorm();
  const double drift =
      std::max(std::abs(ref_plus - golden_revived_power_plus2) / golden_revived_power_plus2,
               std::abs(ref_minus - golden_revived_power_minus2) / golden_revived_power_minus2);

  // the truncated harmonic ladder sits a few percent off the reference at
  // coupling-only lines; hold it inside a 10 % band of the pinned level
  const double gap =
      std::max(std::abs(lit_plus - golden_revived_power_plus2) / golden_revived_power_plus2,
               std::abs(lit_minus - golden_revived_power_minus2) / golden_revived_power_minus2);

  std::ostringstream os;
  os << "uncoupled k=+-2 power <= " << std::max(dark_plus, dark_minus)
     << " W, coupled >= " << std::min(lit_plus, lit_minus) << " W, reference golden drift = "
     << drift << ", model within " << gap << " of golden";
  detail = os.str();
  return dark_plus < 1e-25 && dark_minus < 1e-25 && lit_plus > 1e-12 && lit_minus > 1e-12 &&
         drift <= 1e-9 && gap <= 0.10;
}

// ---------------------------------------------------------------------------
// criterion 7: constant plans collapse to the per-harmonic static formula
// ff_h + fd_h G (I - dd_h G)^{-1} df_h with G = diag(gamma)

bool criterion_7(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(0x57a71cu + static_cast<std::uint64_t>(i));
    const int m = 1 + i % 3;
    const int n = 1 + i % 4;
    const int h_count = 1 + 2 * (i % 3);
    const bool flat = (i % 2) == 0;
    const io::Bundle bundle = testsupport::random_bundle(
        0xb0b0u + static_cast<std::uint64_t>(i), m, n, h_count, flat, 0.3, false);

    ModulationPlan plan;
    plan.f_m_hz = bundle.grid.f_m_hz;
    MatrixXcd gamma = MatrixXcd::Zero(n, n);
    for (int p = 0; p < n; ++p) {
      cplx g = rng.complex_uniform();
      if (std::abs(g) > 1.0) g /= std::abs(g);
      gamma(p, p) = g;
      PortSchedule schedule;
      schedule.segments.push_back({DirectReflection{g}, 1.0});
      plan.schedules.push_back(std::move(schedule));
    }

    const Assembled a = assemble_all(bundle);
    const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, bundle.blocks, bundle.grid);
    const MatrixXcd c_sys = system_matrix(a.c_ff, a.c_fd, a.c_df, a.c_dd, c_l.values);

    // independent per-harmonic evaluation on the raw blocks
    const int r = 2 * m;
    MatrixXcd expected = MatrixXcd::Zero(c_sys.rows(), c_sys.cols());
    for (int h = 1; h <= h_count; ++h) {
      const MatrixXcd ff = a.c_ff.block((h - 1) * r, (h - 1) * r, r, r);
      const MatrixXcd fd = a.c_fd.block((h - 1) * r, (h - 1) * n, r, n);
      const MatrixXcd df = a.c_df.block((h - 1) * n, (h - 1) * r, n, r);
      const MatrixXcd dd = a.c_dd.block((h - 1) * n, (h - 1) * n, n, n);
      const MatrixXcd core = (MatrixXcd::Identity(n, n) - dd * gamma).inverse();
      expected.block((h - 1) * r, (h - 1) * r, r, r) = ff + fd * gamma * core * df;
    }
    worst = std::max(worst, (c_sys - expected).cwiseAbs().maxCoeff());
  }

  std::ostringstream os;
  os << "max |stacked - per-harmonic static| = " << worst << " over 50 fixtures";
  detail = os.str();
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// criterion 8: reciprocal blocks with constant loads keep the system matrix
// symmetric; staggered-delay modulation breaks that symmetry measurably

bool criterion_8(std::string& detail) {
  double worst_sym = 0.0;
  for (int i = 0; i < 3; ++i) {
    const io::Bundle bundle = testsupport::random_bundle(
        0x5e1fu + static_cast<std::uint64_t>(i), 2, 3, 3, true, 0.3, true);
    const ModulationPlan plan = testsupport::static_plan(3, cplx(0.35, -0.2));
    const Assembled a = assemble_all(bundle);
    const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, bundle.blocks, bundle.grid);
    const MatrixXcd c_sys = system_matrix(a.c_ff, a.c_fd, a.c_df, a.c_dd, c_l.values);
    worst_sym = std::max(worst_sym, (c_sys - c_sys.transpose()).cwiseAbs().maxCoeff());
  }

  // reciprocal measurement fixture under the staggered half-duty schedule
  const io::Bundle bundle = io::load_bundle(data_path("bundles/regime_flat.json"));
  const ModulationPlan plan = io::load_plan(data_path("plans/regime_o.toml"));
  const Assembled a = assemble_all(bundle);
  const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, bundle.blocks, bundle.grid);
  const MatrixXcd c_sys = system_matrix(a.c_ff, a.c_fd, a.c_df, a.c_dd, c_l.values);
  const double asym = (c_sys.cwiseAbs() - c_sys.transpose().cwiseAbs()).cwiseAbs().maxCoeff();

  std::ostringstream os;
  os << "static symmetric within " << worst_sym << ", modulated |forward| vs |reverse| gap = "
     << asym;
  detail = os.str();
  return worst_sym <= 1e-12 && asym > 1e-6;
}

// ---------------------------------------------------------------------------
// criterion 9: conversion cross-section arithmetic on an exactly-representable
// wavelength: sigma = 64 pi^3 s_t^2 s_r^2 |b|^2 / (lambda^2 g_tx g_rx |a|^2)

bool criterion_9(std::string& detail) {
  // harmonic 3 lands exactly on c / 0.125 m
  FrequencyGrid grid{2398339664.0 - 1e5, 1e5, 3, 2};
  PortLayout layout{1, 1, 3};
  ScatterResult result;
  result.layout = layout;
  result.grid = grid;
  result.b = VectorXcd::Zero(layout.radiation_size());
  result.b(radiation_index(3, Pol::phi, 1, layout)) = cplx(1e-3, 0.0);

  Excitation exc;
  exc.entries.push_back({2, 1, {1.0, 0.0}, {0.0, 0.0}});

  BcsContext ctx;
  ctx.s_t_m = 1.0;
  ctx.s_r_m = 1.0;
  ctx.gain_tx = [](int, double) { return 1.0; };
  ctx.gain_rx = [](int, double) { return 1.0; };

  const BcsValue v = bcs(result, exc, ctx, 3, 1, 1, 2);
  const double analytic = 64.0 * pi * pi * pi * 1e-6 / (0.125 * 0.125);
  const double rel = std::abs(v.sigma_m2 - analytic) / analytic;

  // quadrupled ranges scale sigma by exactly 16 (powers of two)
  BcsContext far = ctx;
  far.s_t_m = 2.0;
  far.s_r_m = 2.0;
  const BcsValue v16 = bcs(result, exc, far, 3, 1, 1, 2);
  const bool scaling_exact = v16.sigma_m2 == 16.0 * v.sigma_m2;

  // a dark line floors at -300 dBm^2
  const BcsValue dark = bcs(result, exc, ctx, 1, 1, 1, 2);
  const bool floored = dark.sigma_m2 == 0.0 && dark.sigma_dbm2 == -300.0;

  std::ostringstream os;
  os << "sigma = " << v.sigma_m2 << " m^2 (" << v.sigma_dbm2 << " dBm^2), relative error = "
     << rel << ", s^2-scaling " << (scaling_exact ? "exact" : "NOT exact") << ", floor "
     << (floored ? "held" : "NOT held");
  detail = os.str();
  return rel <= 1e-10 && scaling_exact && floored;
}

// ---------------------------------------------------------------------------
// criterion 10: shipped plan files reproduce the published schedule table
// exactly, and the near-complementary pair dominates the half-duty baseline
// at its dominant offsets by >= 10 dB

bool criterion_10(std::string& detail) {
  // raw TOML values, compared as exact doubles
  int mismatches = 0;
  for (const auto& [regime, file] : plan_files) {
    const toml::Table doc = toml::parse_file(data_path(file));
    const toml::Array& ports = doc.at("port").as_array();
    const std::vector<TwoState>& expect = published_schedules.at(regime);
    if (ports.size() != expect.size()) {
      ++mismatches;
      continue;
    }
    for (size_t p = 0; p < ports.size(); ++p) {
      const toml::Table& port = ports[p].as_table();
      if (port.at("r_on").as_number() != expect[p].r_on ||
          port.at("duty_on").as_number() != expect[p].duty_on ||
          port.at("index").as_integer() != static_cast<std::int64_t>(p + 1))
        ++mismatches;
    }
  }

  const io::Bundle bundle = io::load_bundle(data_path("bundles/regime_flat.json"));
  const double base_minus2 = offset_power(run_model(bundle, io::load_plan(data_path("plans/regime_o.toml"))), -2);
  const ScatterResult iii = run_model(bundle, io::load_plan(data_path("plans/regime_iii.toml")));
  const ScatterResult v = run_model(bundle, io::load_plan(data_path("plans/regime_v.toml")));
  const double base_plus2 = offset_power(run_model(bundle, io::load_plan(data_path("plans/regime_o.toml"))), 2);
  const double iii_minus2 = offset_power(iii, -2);
  const double v_plus2 = offset_power(v, 2);

  const double margin_iii_db = 10.0 * std::log10(iii_minus2 / base_minus2);
  const double margin_v_db = 10.0 * std::log10(v_plus2 / base_plus2);
  const double drift = std::max(
      std::abs(iii_minus2 - golden_regime_iii_power_minus2) / golden_regime_iii_power_minus2,
      std::abs(v_plus2 - golden_regime_v_power_plus2) / golden_regime_v_power_plus2);

  std::ostringstream os;
  os << "table mismatches = " << mismatches << ", k=-2 margin = " << margin_iii_db
     << " dB, k=+2 margin = " << margin_v_db << " dB, golden drift = " << drift;
  detail = os.str();
  return mismatches == 0 && margin_iii_db >= 10.0 && margin_v_db >= 10.0 && drift <= 1e-6;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]\n");
      return 64;
    }
  }

  using CriterionFn = bool (*)(std::string&);
  const std::vector<std::pair<const char*, CriterionFn>> criteria = {
      {"closed-form vs quadrature coefficients", criterion_1},
      {"half-duty line values and even-line nulls", criterion_2},
      {"line power sums reach the mean squared waveform", criterion_3},
      {"load-loop degenerations of the system matrix", criterion_4},
      {"solver matches the quasi-static reference", criterion_5},
      {"coupling revives the even lines", criterion_6},
      {"constant plans reduce to the static formula", criterion_7},
      {"static reciprocity, modulated nonreciprocity", criterion_8},
      {"conversion cross-section arithmetic", criterion_9},
      {"published schedule table and dominant offsets", criterion_10}};

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && only != id) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].second(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("criterion %2d [%s]: %s — %s\n", id, ok ? "PASS" : "FAIL", criteria[i].first,
                detail.c_str());
  }
  return failures;
}
