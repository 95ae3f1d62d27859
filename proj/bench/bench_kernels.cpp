// Serial reference vs OpenMP paths: the simplex tensor sum and the envelope
// scan. Both produce bitwise identical results; only the wall time differs.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "heatkern/envelope.hpp"
#include "heatkern/simplex.hpp"

namespace {

using namespace heatkern;

const simplex::SimplexWeight& simplex_weight() {
  static const simplex::SimplexWeight w({1.0, 0.5, 0.5}, 2);
  return w;
}

void BM_SimplexKernelSerial(benchmark::State& state) {
  const double t = 0.01;
  const simplex::SimplexHeatKernel k(simplex_weight(), t, simplex::choose_truncation(simplex_weight(), t, 1e-12));
  const simplex::SimplexPoint x({0.2, 0.3});
  const simplex::SimplexPoint y({0.25, 0.35});
  for (auto _ : state) benchmark::DoNotOptimize(k.evaluate_serial(x, y));
  state.counters["nodes"] = static_cast<double>(std::pow(k.cutoff() + 2, 3));
}
BENCHMARK(BM_SimplexKernelSerial)->Unit(benchmark::kMillisecond);

void BM_SimplexKernelParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const double t = 0.01;
  const simplex::SimplexHeatKernel k(simplex_weight(), t, simplex::choose_truncation(simplex_weight(), t, 1e-12));
  const simplex::SimplexPoint x({0.2, 0.3});
  const simplex::SimplexPoint y({0.25, 0.35});
  for (auto _ : state) benchmark::DoNotOptimize(k(x, y));
}
BENCHMARK(BM_SimplexKernelParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EnvelopeScanBall(benchmark::State& state) {
  const AnyWeight w = ball::BallWeight(1.0, 2);
  envelope::SamplerConfig sampler;
  sampler.pairs_per_t = 400;
  const std::vector<double> t_list{0.01, 0.1, 1.0};
  for (auto _ : state) {
    auto set = envelope::sample_envelope(w, t_list, sampler, 1e-12, kDefaultTMin, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(set.retained.data());
  }
}
BENCHMARK(BM_EnvelopeScanBall)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EnvelopeScanSimplex(benchmark::State& state) {
  const AnyWeight w = simplex::SimplexWeight({1.0, 0.5, 0.0}, 2);
  envelope::SamplerConfig sampler;
  sampler.pairs_per_t = 100;
  const std::vector<double> t_list{0.03, 0.3};
  for (auto _ : state) {
    auto set = envelope::sample_envelope(w, t_list, sampler, 1e-12, kDefaultTMin, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(set.retained.data());
  }
}
BENCHMARK(BM_EnvelopeScanSimplex)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
