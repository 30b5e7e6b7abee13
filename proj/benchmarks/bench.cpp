#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "cotenqu/training.hpp"

namespace {

using namespace cotenqu;

void BM_Apply1q(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  StateVector s(n);
  const GateMatrix g = gate_matrix(GateKind::RY, 0.3);
  std::size_t q = 0;
  for (auto _ : state) {
    apply_1q(s, g, q);
    q = (q + 1) % n;
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.dimension()));
}
BENCHMARK(BM_Apply1q)->Arg(5)->Arg(12)->Arg(20);

void BM_Apply2q(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  StateVector s(n);
  const GateMatrix g = gate_matrix(GateKind::CRY, 0.3);
  std::size_t q = 0;
  for (auto _ : state) {
    apply_2q(s, g, q, (q + 3) % n);
    q = (q + 1) % n;
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.dimension()));
}
BENCHMARK(BM_Apply2q)->Arg(5)->Arg(12)->Arg(20);

void BM_Cswap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  StateVector s(n);
  for (auto _ : state) {
    apply_cswap(s, 0, 1, n - 1);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
}
BENCHMARK(BM_Cswap)->Arg(5)->Arg(12)->Arg(20);

void BM_SwapTest(benchmark::State& state) {
  const CircuitSpec spec{static_cast<std::size_t>(state.range(0)),
                         {LayerKind::kSingle, LayerKind::kDual, LayerKind::kEntangle}};
  const std::vector<double> params(parameter_count(spec), 0.4);
  const std::vector<double> angles(spec.feature_dimension(), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(swap_test_angles(spec, params, angles));
}
BENCHMARK(BM_SwapTest)->Arg(2)->Arg(3);

MappedInput random_input(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return feature_map(x);
}

void BM_MpsForward(benchmark::State& state) {
  const auto chi = static_cast<std::size_t>(state.range(0));
  const MpsModel m = MpsModel::near_identity(784, chi, 4, 1);
  const MappedInput in = random_input(784);
  for (auto _ : state) benchmark::DoNotOptimize(mps_forward_scaled(m, in));
}
BENCHMARK(BM_MpsForward)->Arg(2)->Arg(4)->Arg(8);

void BM_MpsBackward(benchmark::State& state) {
  const auto chi = static_cast<std::size_t>(state.range(0));
  const MpsModel m = MpsModel::near_identity(784, chi, 4, 1);
  const MappedInput in = random_input(784);
  const std::vector<double> up{0.1, -0.2, 0.3, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(mps_backward(m, in, up));
}
BENCHMARK(BM_MpsBackward)->Arg(2)->Arg(4)->Arg(8);

void BM_TrainStep(benchmark::State& state) {
  const std::size_t classes = static_cast<std::size_t>(state.range(0));
  const CircuitSpec spec{classes == 2 ? 2u : 3u, {LayerKind::kSingle, LayerKind::kDual, LayerKind::kEntangle}};
  ModelState model = ModelState::initialize(784, 4, spec, classes, 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Sample> one{{std::vector<double>(784), 1}};
  for (double& v : one[0].features) v = u(rng);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(model, one, {}, cfg));
}
BENCHMARK(BM_TrainStep)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
