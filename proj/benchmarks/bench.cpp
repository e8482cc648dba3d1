#include <benchmark/benchmark.h>

#include <random>

#include "fuzzynet/extraction.hpp"
#include "fuzzynet/training.hpp"

using namespace fuzzynet;

namespace {

Dataset blobs(std::size_t rows, std::size_t width, std::size_t classes) {
  Dataset d;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.3);
  d.features = Matrix(rows, width);
  for (std::size_t c = 0; c < classes; ++c) d.class_names.push_back("c" + std::to_string(c));
  for (std::size_t j = 0; j < width; ++j) d.feature_names.push_back(std::to_string(j));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t label = r % classes;
    for (std::size_t j = 0; j < width; ++j) d.features(r, j) = (j % classes == label ? 1.0 : 0.0) + noise(rng);
    d.labels.push_back(label);
  }
  return d;
}

Network fuzzy_net(std::size_t width, std::size_t hidden) {
  Rng rng(3);
  return Network::make_fuzzy({Vector(width, -1.0), Vector(width, 1.0)}, 3, hidden, 2, 0.001, rng);
}

}  // namespace

static void BM_FuzzyOp(benchmark::State& state) {
  double x = 0.3, y = -0.7, a = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(x);
    benchmark::DoNotOptimize(fuzzy(x, y, a));
  }
}
BENCHMARK(BM_FuzzyOp);

static void BM_Forward(benchmark::State& state) {
  const std::size_t width = static_cast<std::size_t>(state.range(0));
  const Network net = fuzzy_net(width, 16);
  const Vector x(width, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(net.scores(x));
}
BENCHMARK(BM_Forward)->Arg(9)->Arg(40);

static void BM_ForwardBackward(benchmark::State& state) {
  const std::size_t width = static_cast<std::size_t>(state.range(0));
  const Network net = fuzzy_net(width, 16);
  const Vector x(width, 0.25);
  const Vector target = encode_targets(1, 3);
  Gradients grads = net.zero_gradients();
  for (auto _ : state) {
    Trace trace;
    const Vector out = net.forward(x, trace);
    Vector blame(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) blame[k] = out[k] - target[k];
    net.backward(trace, blame, grads);
    benchmark::DoNotOptimize(grads);
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(9)->Arg(40);

static void BM_TrainEpoch(benchmark::State& state) {
  const Dataset data = blobs(500, 9, 3);
  TrainConfig config;
  config.seed = 7;
  Network net = initial_network(fit_normalizer(data), 3, config);
  Rng rng(11);
  for (auto _ : state) benchmark::DoNotOptimize(train_epoch(net, data, config, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.rows()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

static void BM_Extract(benchmark::State& state) {
  const Network snapped = snap_network(fuzzy_net(9, 16));
  for (auto _ : state) benchmark::DoNotOptimize(extract(snapped));
}
BENCHMARK(BM_Extract)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
