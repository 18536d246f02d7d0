// Parallel kernels against their serial references. The pairs are required
// to agree bit for bit (the tests check that); this target measures what the
// OpenMP versions buy on top.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <numeric>
#include <vector>

#include "turaco/mlp.hpp"
#include "turaco/parser.hpp"
#include "turaco/rng.hpp"
#include "turaco/sample.hpp"

namespace {

const char* kLuminanceSrc = R"(fun (sunPosition, emission) {
  if (sunPosition < 0) { ambient = 0; } else { ambient = sunPosition; }
  if (sunPosition < 0.1) { emission *= 0.1; } else { emission *= sunPosition; }
  return ambient + emission;
})";

const char* kLuminanceCfg = R"({
  "inputs": [
    {"name": "sunPosition", "low": -1, "high": 1},
    {"name": "emission", "low": -1, "high": 1}
  ]
})";

struct GradFixture {
  turaco::Mlp m;
  std::vector<turaco::Real> X, Y, grad;
  std::vector<std::uint32_t> idx;

  GradFixture(int in, int hidden, int out, int batch) {
    turaco::Rng rng(7);
    m = turaco::init_mlp(in, hidden, out, rng);
    X.resize(static_cast<std::size_t>(batch) * in);
    Y.resize(static_cast<std::size_t>(batch) * out);
    for (auto& v : X) v = rng.uniform(-1.0, 1.0);
    for (auto& v : Y) v = rng.uniform(-1.0, 1.0);
    idx.resize(batch);
    std::iota(idx.begin(), idx.end(), 0);
  }
};

void BM_grad_parallel(benchmark::State& state) {
  GradFixture f(2, 256, 1, 128);
  for (auto _ : state)
    benchmark::DoNotOptimize(turaco::mlp_batch_grad(f.m, f.X, f.Y, f.idx, f.grad));
}
BENCHMARK(BM_grad_parallel);

void BM_grad_serial(benchmark::State& state) {
  GradFixture f(2, 256, 1, 128);
  for (auto _ : state)
    benchmark::DoNotOptimize(turaco::mlp_batch_grad_serial(f.m, f.X, f.Y, f.idx, f.grad));
}
BENCHMARK(BM_grad_serial);

void BM_frequencies_parallel(benchmark::State& state) {
  turaco::Program p = turaco::parse(kLuminanceSrc);
  turaco::SampleConfig c = turaco::parse_config(kLuminanceCfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(turaco::estimate_frequencies(p, c, 20000, 42));
}
BENCHMARK(BM_frequencies_parallel);

void BM_frequencies_serial(benchmark::State& state) {
  turaco::Program p = turaco::parse(kLuminanceSrc);
  turaco::SampleConfig c = turaco::parse_config(kLuminanceCfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(turaco::estimate_frequencies_serial(p, c, 20000, 42));
}
BENCHMARK(BM_frequencies_serial);

}  // namespace

BENCHMARK_MAIN();
