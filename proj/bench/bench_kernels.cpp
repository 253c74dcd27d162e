// Serial reference path vs OpenMP path for the per-sample kernels.
// Arg 0 is serial, arg 1 parallel.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "windeval/dataset.hpp"
#include "windeval/harness.hpp"
#include "windeval/resample.hpp"
#include "windeval/synth.hpp"

using namespace windeval;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

SynthConfig bench_cfg(std::size_t count) {
  SynthConfig c;
  c.rows = c.cols = 64;
  c.count = count;
  c.seed = 7;
  return c;
}

void BM_Synth(benchmark::State& state) {
  const SynthConfig cfg = bench_cfg(64);
  for (auto _ : state) benchmark::DoNotOptimize(synth_grf(cfg, exec_of(state)));
}

void BM_Bicubic(benchmark::State& state) {
  const FieldSeries lr = resample(synth_grf(bench_cfg(128)), ResampleOp::decimate, ResampleFactor(4));
  for (auto _ : state) benchmark::DoNotOptimize(resample(lr, ResampleOp::bicubic, ResampleFactor(4), exec_of(state)));
}

void BM_Evaluate(benchmark::State& state) {
  static const std::filesystem::path root = [] {
    const auto dir = std::filesystem::temp_directory_path() / "windeval_bench";
    std::filesystem::remove_all(dir);
    const TaskData t = build_task(synth_grf(bench_cfg(128)), TaskKind::super_resolution);
    write_dataset(dir / "hr", t.hr);
    write_dataset(dir / "bicubic", resample(t.lr, ResampleOp::bicubic, ResampleFactor(4)));
    return dir;
  }();
  EvalConfig cfg;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate({{"bicubic", {root / "bicubic"}}}, root / "hr", cfg));
}

}  // namespace

BENCHMARK(BM_Synth)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bicubic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
