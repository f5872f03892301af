// benchmarks for the hot paths: switching-coefficient tables, polyharmonic
// load-matrix assembly, the stacked interaction solve at measurement scale
// (M=12 directions, N=9 loads, H=25 harmonics), and the quasi-static
// reference. fixtures are synthetic and sized like the measured structure.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "polyscat/assembly.hpp"
#include "polyscat/load.hpp"
#include "polyscat/model.hpp"
#include "polyscat/oracle.hpp"
#include "polyscat/solver.hpp"

namespace {

using namespace polyscat;

// staggered half-duty two-state schedules, one per load port
ModulationPlan staggered_plan(int ports) {
  ModulationPlan plan;
  plan.f_m_hz = 1e5;
  for (int p = 0; p < ports; ++p) {
    const double delay = 0.05 * static_cast<double>(p % 10);
    PortSchedule schedule;
    schedule.segments.push_back({DirectReflection{cplx(-1.0, 0.0)}, delay});
    schedule.segments.push_back({DirectReflection{cplx(1.0, 0.0)}, 0.5});
    schedule.segments.push_back({DirectReflection{cplx(-1.0, 0.0)}, 0.5 - delay});
    plan.schedules.push_back(std::move(schedule));
  }
  return plan;
}

// frequency-flat blocks with contractive norms, deterministic seed
ScattererBlocks flat_blocks(int m, int n) {
  srand(42u);  // Eigen's setRandom draws from rand()
  HarmonicBlocks hb;
  hb.ff_pp = 0.08 * MatrixXcd::Random(m, m);
  hb.ff_tp = 0.08 * MatrixXcd::Random(m, m);
  hb.ff_pt = 0.08 * MatrixXcd::Random(m, m);
  hb.ff_tt = 0.08 * MatrixXcd::Random(m, m);
  hb.fd_p = 0.2 * MatrixXcd::Random(m, n);
  hb.fd_t = 0.2 * MatrixXcd::Random(m, n);
  hb.df_p = 0.2 * MatrixXcd::Random(n, m);
  hb.df_t = 0.2 * MatrixXcd::Random(n, m);
  hb.dd = 0.05 * MatrixXcd::Random(n, n);

  ScattererBlocks blocks;
  blocks.flat = true;
  blocks.z_ref = cplx(50.0, 0.0);
  blocks.per_harmonic = {std::move(hb)};
  return blocks;
}

constexpr int bench_m = 12;
constexpr int bench_n = 9;
constexpr int bench_h = 25;
const FrequencyGrid bench_grid{2.4e9, 1e5, bench_h, 13};
const PortLayout bench_layout{bench_m, bench_n, bench_h};

void bm_fourier_line_table(benchmark::State& state) {
  const ModulationPlan plan = staggered_plan(1);
  const PortSchedule& schedule = plan.schedules.front();
  const std::vector<cplx> gammas = gamma_table(schedule, 1, 0.0, cplx(50.0, 0.0));
  const int kmax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    cplx acc{0.0, 0.0};
    for (int k = -kmax; k <= kmax; ++k) acc += fourier_coefficient(schedule, gammas, k);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * (2 * kmax + 1));
}

void bm_assemble_load_matrix(benchmark::State& state) {
  const ScattererBlocks blocks = flat_blocks(bench_m, bench_n);
  const ModulationPlan plan = staggered_plan(bench_n);
  for (auto _ : state) {
    const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, blocks, bench_grid);
    benchmark::DoNotOptimize(c_l.values.data());
  }
}

void bm_system_matrix(benchmark::State& state) {
  const ScattererBlocks blocks = flat_blocks(bench_m, bench_n);
  const ModulationPlan plan = staggered_plan(bench_n);
  const MatrixXcd c_ff = assemble_structural(blocks, bench_layout);
  const MatrixXcd c_fd = assemble_fd(blocks, bench_layout);
  const MatrixXcd c_df = assemble_df(blocks, bench_layout);
  const MatrixXcd c_dd = assemble_dd(blocks, bench_layout);
  const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, blocks, bench_grid);
  for (auto _ : state) {
    const MatrixXcd c_sys = system_matrix(c_ff, c_fd, c_df, c_dd, c_l.values);
    benchmark::DoNotOptimize(c_sys.data());
  }
}

void bm_full_solve(benchmark::State& state) {
  const ScattererBlocks blocks = flat_blocks(bench_m, bench_n);
  const ModulationPlan plan = staggered_plan(bench_n);
  Excitation exc;
  exc.entries.push_back({bench_grid.center_index, 1, {1.0, 0.0}, {0.0, 0.0}});
  for (auto _ : state) {
    const MatrixXcd c_ff = assemble_structural(blocks, bench_layout);
    const MatrixXcd c_fd = assemble_fd(blocks, bench_layout);
    const MatrixXcd c_df = assemble_df(blocks, bench_layout);
    const MatrixXcd c_dd = assemble_dd(blocks, bench_layout);
    const PolyharmonicLoadMatrix c_l = assemble_load_matrix(plan, blocks, bench_grid);
    const MatrixXcd c_sys = system_matrix(c_ff, c_fd, c_df, c_dd, c_l.values);
    const ScatterResult result = scatter(c_sys, exc, bench_layout, bench_grid);
    benchmark::DoNotOptimize(result.b.data());
  }
}

void bm_quasi_static_reference(benchmark::State& state) {
  const ScattererBlocks blocks = flat_blocks(2, bench_n);
  const ModulationPlan plan = staggered_plan(bench_n);
  Excitation exc;
  exc.entries.push_back({1, 1, {1.0, 0.0}, {0.0, 0.0}});
  const long samples = state.range(0);
  for (auto _ : state) {
    const OracleSpectrum spectrum = quasi_static_spectrum(
        blocks.per_harmonic.front(), blocks.z_ref, 2.4e9, plan, exc, samples);
    benchmark::DoNotOptimize(spectrum.bins.data());
  }
}

BENCHMARK(bm_fourier_line_table)->Arg(16)->Arg(64);
BENCHMARK(bm_assemble_load_matrix);
BENCHMARK(bm_system_matrix);
BENCHMARK(bm_full_solve);
BENCHMARK(bm_quasi_static_reference)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
