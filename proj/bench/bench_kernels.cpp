#include <cmath>

#include <benchmark/benchmark.h>

#include "l2control/dynamics.hpp"
#include "l2control/gramian.hpp"
#include "l2control/null_control.hpp"
#include "l2control/scenario.hpp"

namespace {

using namespace l2control;

// One shared 100-block workload so serial and parallel rows are comparable.
struct Setup {
  BlockSystem system;
  BlockVector x0;
  ControlSignal input;
  QuadratureSpec quad{32, 8};
};

const Setup& setup() {
  static const Setup s = [] {
    GeneratorParams params;
    params.n_blocks = 100;
    params.dim_min = 2;
    params.dim_max = 6;
    params.seed = 7;
    const Scenario sc = generate_scenario(params);
    BlockSystem system = sc.make_system();
    BlockVector x0 = sc.make_x0();
    ControlSignal input = ControlSignal::analytic(
        system.dims(), 2.0, [dims = system.dims()](int i, double t) {
          Vec v = Vec::Zero(dims[i]);
          v(0) = std::sin(3.0 * t + i);
          return v;
        });
    return Setup{std::move(system), std::move(x0), std::move(input), QuadratureSpec(32, 8)};
  }();
  return s;
}

void bm_gramian(benchmark::State& state, Exec exec) {
  const Setup& s = setup();
  for (auto _ : state) {
    const BlockGramian g = assemble_gramian(s.system, 1.0, s.quad, exec);
    double probe = g.block(0).matrix()(0, 0);
    benchmark::DoNotOptimize(probe);
  }
}

void bm_propagate(benchmark::State& state, Exec exec) {
  const Setup& s = setup();
  for (auto _ : state) {
    const BlockVector x = propagate(s.system, s.x0, s.input, 2.0, s.quad, 0.0, exec);
    double probe = x.retained_norm();
    benchmark::DoNotOptimize(probe);
  }
}

void bm_null_control(benchmark::State& state, Exec exec) {
  const Setup& s = setup();
  for (auto _ : state) {
    const NullControl u0 = null_control(s.system, s.x0, 1.0, s.quad, exec);
    double probe = u0.energy();
    benchmark::DoNotOptimize(probe);
  }
}

BENCHMARK_CAPTURE(bm_gramian, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_gramian, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_propagate, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_propagate, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_null_control, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_null_control, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
