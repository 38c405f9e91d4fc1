#include <benchmark/benchmark.h>

#include "coil/datagen.hpp"
#include "coil/evaluator.hpp"
#include "coil/latent.hpp"
#include "coil/scheduler.hpp"
#include "coil/vae.hpp"

using namespace coil;

namespace {

FleetSchedule random_schedule(int rb, Rng& rng) {
  FleetSchedule s;
  for (int i = 0; i < rb; ++i) s.entries.push_back({rng.uniform_int(0, 66), rng.uniform_int(0, 66)});
  return correct_schedule(s);
}

void BM_Allocate(benchmark::State& state) {
  ProblemConfig config;
  config.rq = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto req = generate_requests(config, rng);
  const auto s = random_schedule(config.rb, rng);
  for (auto _ : state) benchmark::DoNotOptimize(allocate(req, s));
}
BENCHMARK(BM_Allocate)->Arg(120)->Arg(240);

void BM_BuildTimeline(benchmark::State& state) {
  Rng rng(2);
  const auto s = random_schedule(30, rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_timeline(s));
}
BENCHMARK(BM_BuildTimeline);

void BM_Evaluate(benchmark::State& state) {
  ProblemConfig config;
  Rng rng(3);
  const auto req = generate_requests(config, rng);
  const auto s = random_schedule(config.rb, rng);
  const auto mode = state.range(0) == 0 ? EvalMode::kWorstCase : EvalMode::kPostSchedule;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(req, s, config, mode));
}
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1);

void BM_DatagenFitness(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> genome(60);
  for (double& g : genome) g = rng.uniform_int(0, 66);
  for (auto _ : state) benchmark::DoNotOptimize(datagen_fitness(genome, 10));
}
BENCHMARK(BM_DatagenFitness);

void BM_Express(benchmark::State& state) {
  Rng rng(5);
  const auto model = init_model(VaeArchitecture{60, 128, 60}, rng);
  std::vector<double> z(60);
  for (double& v : z) v = rng.uniform(-2.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(express(z, model));
}
BENCHMARK(BM_Express);

void BM_LossAndGradient(benchmark::State& state) {
  Rng rng(6);
  const VaeArchitecture arch{60, 128, 60};
  const auto model = init_model(arch, rng);
  const auto n = state.range(0);
  const Eigen::MatrixXd batch = Eigen::MatrixXd::Random(60, n).cwiseAbs();
  const Eigen::MatrixXd noise = Eigen::MatrixXd::Random(60, n);
  VaeGradients grads;
  for (auto _ : state) benchmark::DoNotOptimize(loss_with_noise(model, batch, noise, {}, &grads));
}
BENCHMARK(BM_LossAndGradient)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
