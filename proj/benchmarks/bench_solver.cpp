#include <benchmark/benchmark.h>

#include "msts/dynamics.hpp"
#include "msts/oracle.hpp"
#include "support.hpp"

namespace {

void BM_CrowSolve100tc(benchmark::State& state) {
  const auto s = msts_test::crow_reference();
  msts::IntegrateOptions opts;
  opts.t_end = 100.0 * s.t_c;
  opts.output_stride = s.t_c;
  for (auto _ : state) {
    auto traj = msts::integrate(s.structure, s.basis, s.pump, opts);
    benchmark::DoNotOptimize(traj.samples.back().r(0));
  }
}
BENCHMARK(BM_CrowSolve100tc)->Unit(benchmark::kMillisecond);

void BM_MstsRhs(benchmark::State& state) {
  const auto s = msts_test::crow_reference();
  const msts::DerivedRates rates = msts::derived_rates(s.structure, s.basis);
  msts::MstsState st;
  st.t = 1.0 * s.t_c;
  st.r = Eigen::VectorXd::Constant(4, 0.8);
  st.phi = Eigen::VectorXd::Constant(4, -0.3);
  st.n = Eigen::VectorXd::Constant(4, 0.4);
  for (auto _ : state) {
    auto d = msts::rhs(st.t, st, rates, s.basis, s.pump);
    benchmark::DoNotOptimize(d.dr(0));
  }
}
BENCHMARK(BM_MstsRhs);

void BM_Takagi8(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXcd g = msts_test::random_symmetric(8, rng);
  for (auto _ : state) {
    auto b = msts::takagi_factorize(g);
    benchmark::DoNotOptimize(b.lambda_abs(0));
  }
}
BENCHMARK(BM_Takagi8);

void BM_FockTwoModeStep(benchmark::State& state) {
  // cost of a short Fock-space integration at the contrasted scale
  msts::QuasimodeSet qs;
  qs.omega.resize(2);
  qs.omega << 1.7, 2.3;
  qs.gamma.resize(2);
  qs.gamma << 0.02, 0.11;
  Eigen::MatrixXcd g(2, 2);
  g << 0.0, 1.0, 1.0, 0.0;
  msts::PumpModel pump;
  pump.omega_p = 2.0;
  pump.alpha_sq = 0.045;
  msts::oracle::FockConfig cfg{2, 20};
  for (auto _ : state) {
    auto out = msts::oracle::evolve_fock(qs, g, pump, cfg, {0.05}, 1e-7, 1e-10);
    benchmark::DoNotOptimize(out.number.back()(0, 0));
  }
}
BENCHMARK(BM_FockTwoModeStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
