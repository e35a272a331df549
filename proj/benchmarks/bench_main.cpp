#include <benchmark/benchmark.h>

#include "itamp/initialization.hpp"
#include "itamp/jacobian_check.hpp"
#include "itamp/kinematics.hpp"
#include "itamp/residuals.hpp"
#include "itamp/solver.hpp"
#include "support/scenarios.hpp"

using namespace itamp;

namespace {

static void BM_ForwardKinematics(benchmark::State& state) {
  const ManipulatorSpec arm = testing::spatial_arm("arm", 0, 0);
  const Eigen::VectorXd q = arm.rest_configuration;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fk_frames(arm.chain, q));
  }
}
BENCHMARK(BM_ForwardKinematics);

static void BM_FrameKinematics(benchmark::State& state) {
  const ManipulatorSpec arm = testing::spatial_arm("arm", 0, 0);
  const Eigen::VectorXd q = arm.rest_configuration;
  const Eigen::VectorXd qd = Eigen::VectorXd::Constant(6, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_kinematics(arm.chain, q, qd));
  }
}
BENCHMARK(BM_FrameKinematics);

static void BM_Assemble(benchmark::State& state) {
  const Scenario sc = testing::line_scenario(static_cast<int>(state.range(0)));
  const VariableLayout l = VariableLayout::build(sc);
  const ResidualSet set = build_residual_blocks(sc, l);
  const Eigen::VectorXd x = initialize(sc, l);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(set, x, l.total()));
  }
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(3)->Arg(5);

static void BM_GaussNewtonStep(benchmark::State& state) {
  const Scenario sc = testing::line_scenario(static_cast<int>(state.range(0)));
  const VariableLayout l = VariableLayout::build(sc);
  const ResidualSet set = build_residual_blocks(sc, l);
  const AssembleResult sys = assemble(set, initialize(sc, l), l.total());
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss_newton_step(sys.residual, sys.jacobian, 1e-4));
  }
}
BENCHMARK(BM_GaussNewtonStep)->Arg(1)->Arg(3)->Arg(5);

static void BM_SolveTransportToy(benchmark::State& state) {
  Scenario sc = testing::pick_and_place_scenario();
  sc.solver.max_iterations = 25;
  const VariableLayout l = VariableLayout::build(sc);
  const ResidualSet set = build_residual_blocks(sc, l);
  const Eigen::VectorXd x = initialize(sc, l);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(set, x, sc.solver));
  }
}
BENCHMARK(BM_SolveTransportToy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
