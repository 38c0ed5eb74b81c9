// Microbenchmarks for the closed-form evaluators (which carry a
// sub-millisecond latency requirement), the root finders, the matrix
// exponential, and the Monte Carlo kernels (throughput in paths/second).

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ruinalloc/allocation_engine.hpp"
#include "ruinalloc/levy_analytics.hpp"
#include "ruinalloc/model.hpp"
#include "ruinalloc/phase_type.hpp"
#include "ruinalloc/ruin_engine.hpp"
#include "ruinalloc/simulator.hpp"

using namespace ruinalloc;

namespace {

BrownianModel brownian_book() {
  BrownianModel m;
  m.drift = Eigen::Vector2d(-2.0, -1.0);
  m.cov.resize(2, 2);
  m.cov << 1.0, 0.5, 0.5, 1.0;
  return m;
}

CompoundPoissonExpModel cp_book(int d = 2) {
  CompoundPoissonExpModel m;
  if (d == 2) {
    m.premium = Eigen::Vector2d(1.0, 1.0);
    m.intensity = Eigen::Vector2d(0.85, 0.95);
  } else {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> prem(0.8, 1.2);
    std::uniform_real_distribution<double> inten(0.2, 0.6);
    m.premium.resize(d);
    m.intensity.resize(d);
    for (int i = 0; i < d; ++i) {
      m.premium[i] = prem(rng);
      m.intensity[i] = inten(rng);
    }
    const double load = 0.75 * m.premium.sum() / m.intensity.sum();
    m.intensity *= load;
  }
  m.claim_rate = 1.0;
  return m;
}

void bm_ruin_prob_finite(benchmark::State& state) {
  const RiskModel model(brownian_book());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ruin_prob(model, {2.0, Horizon::finite(1.0)}).probability);
  }
}
BENCHMARK(bm_ruin_prob_finite);

void bm_dynamic_var_finite(benchmark::State& state) {
  const RiskModel model(brownian_book());
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamic_var(model, 0.1, Horizon::finite(1.0)));
  }
}
BENCHMARK(bm_dynamic_var_finite);

void bm_allocate_asymptotic(benchmark::State& state) {
  const RiskModel model(brownian_book());
  for (auto _ : state) {
    benchmark::DoNotOptimize(allocate_asymptotic(model).fractions.sum());
  }
}
BENCHMARK(bm_allocate_asymptotic);

void bm_allocate_time_of_ruin_finite(benchmark::State& state) {
  const RiskModel model(brownian_book());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        allocate_time_of_ruin(model, 1.12, Horizon::finite(1.0))
            .fractions.sum());
  }
}
BENCHMARK(bm_allocate_time_of_ruin_finite);

void bm_allocate_sup_location_finite(benchmark::State& state) {
  const RiskModel model(brownian_book());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        allocate_sup_location(model, 1.12, Horizon::finite(1.0))
            .fractions.sum());
  }
}
BENCHMARK(bm_allocate_sup_location_finite);

void bm_cramer_root_cp(benchmark::State& state) {
  const RiskModel model(cp_book());
  for (auto _ : state) {
    benchmark::DoNotOptimize(cramer_root(model));
  }
}
BENCHMARK(bm_cramer_root_cp);

void bm_matrix_exp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = unit(rng) / d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(matrix_exp(a).sum());
  }
}
BENCHMARK(bm_matrix_exp)->Arg(4)->Arg(16)->Arg(64);

void bm_phase_type_ruin(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const CompoundPoissonExpModel model = cp_book(d);
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(d, 1.0);
  weights[0] = 1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phase_type_ruin(model, weights, 5.0).probability);
  }
}
BENCHMARK(bm_phase_type_ruin)->Arg(2)->Arg(8)->Arg(32);

void bm_simulate_brownian_ruin(benchmark::State& state) {
  const RiskModel model(brownian_book());
  SimConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 1;
  cfg.steps_per_unit_time = 500;
  cfg.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ruin_prob(model, 1.0, 1.0, cfg).value);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(cfg.paths) * 500);
}
BENCHMARK(bm_simulate_brownian_ruin)->Unit(benchmark::kMillisecond);

void bm_simulate_cp_ruin(benchmark::State& state) {
  const RiskModel model(cp_book());
  SimConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 1;
  cfg.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ruin_prob(model, 5.0, 50.0, cfg).value);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(cfg.paths));
}
BENCHMARK(bm_simulate_cp_ruin)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
