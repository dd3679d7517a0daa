#include <benchmark/benchmark.h>

#include "trymove/engine.hpp"
#include "trymove/nn/model.hpp"
#include "trymove/puzzle.hpp"
#include "trymove/scoring.hpp"

using namespace trymove;

static void BM_GeneratePuzzle(benchmark::State& state) {
  const auto cfg = config_for(static_cast<Level>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_puzzle(cfg.grid_size, cfg.requested_pieces, seed++, cfg.fake_count));
  }
  state.SetLabel(std::string(to_string(cfg.level)));
}
BENCHMARK(BM_GeneratePuzzle)->DenseRange(0, 3);

static void BM_SolveAndReplay(benchmark::State& state) {
  const auto cfg = config_for(Level::difficult);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto script = solve(cfg, seed);
    benchmark::DoNotOptimize(replay(cfg, seed++, script));
  }
}
BENCHMARK(BM_SolveAndReplay);

static void BM_Forward(benchmark::State& state) {
  const auto model = nn::make_default_model();
  const auto input = nn::frame_input(nn::synth_frames(GestureClass::g5, 1, 1)[0]);
  for (auto _ : state) benchmark::DoNotOptimize(model.network.probabilities(input));
}
BENCHMARK(BM_Forward);

static void BM_Backward(benchmark::State& state) {
  const auto model = nn::make_default_model();
  const auto input = nn::frame_input(nn::synth_frames(GestureClass::g5, 1, 1)[0]);
  auto grads = model.network.zero_gradients();
  for (auto _ : state) benchmark::DoNotOptimize(model.network.accumulate_gradients(input, 4, grads));
}
BENCHMARK(BM_Backward);

static void BM_FinalScore(benchmark::State& state) {
  const auto cfg = config_for(Level::difficult);
  const GestureCounts counts{10, 10, 15, 15, 16, 22, 2, 13, 10, 3, 13, 2, 15, 7, 2, 0};
  for (auto _ : state) benchmark::DoNotOptimize(final_score(246, cfg, counts));
}
BENCHMARK(BM_FinalScore);
BENCHMARK_MAIN();
