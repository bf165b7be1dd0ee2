// Serial reference kernels vs their OpenMP counterparts on a synthetic corpus.
// Thread count follows ARTIFACT_AUDIT_THREADS.

#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "artifact_audit/artifacts.h"
#include "artifact_audit/classifier.h"
#include "artifact_audit/diagnostics.h"
#include "artifact_audit/features.h"

namespace {

using namespace artifact_audit;

const Dataset& corpus() {
  static const Dataset d = [] {
    Dataset out;
    out.name = "synthetic";
    std::mt19937 gen(1);
    std::vector<std::string> words;
    for (int i = 0; i < 20000; ++i) words.push_back("w" + std::to_string(i));
    auto sentence = [&](int len) {
      std::string s;
      for (int i = 0; i < len; ++i) {
        s += words[gen() % (i % 2 ? 500 : words.size())];
        s += ' ';
      }
      return s;
    };
    for (int i = 0; i < 50000; ++i) {
      Example ex;
      ex.id = std::to_string(i);
      ex.premise = sentence(12 + static_cast<int>(gen() % 8));
      ex.hypothesis = sentence(4 + static_cast<int>(gen() % 10));
      ex.label = static_cast<Label>(gen() % 3);
      out.examples.push_back(std::move(ex));
    }
    return out;
  }();
  return d;
}

const Model& model() {
  static const Model m = [] {
    TrainConfig cfg;
    cfg.features.n_buckets = 200000;
    cfg.features.use_char_4grams = true;
    cfg.epochs = 1;
    return train(corpus(), cfg);
  }();
  return m;
}

void BM_FeaturizeSerial(benchmark::State& state) {
  const auto& m = model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurizeAllSerial(corpus(), m.vocab, m.config.features));
  }
}
void BM_FeaturizeParallel(benchmark::State& state) {
  const auto& m = model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(featurizeAll(corpus(), m.vocab, m.config.features));
  }
}

void BM_PredictSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(predictAllSerial(model(), corpus()));
}
void BM_PredictParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(predictAll(model(), corpus()));
}

void BM_PmiSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmiTableSerial(corpus(), 100.0));
}
void BM_PmiParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pmiTable(corpus(), 100.0));
}

void BM_ContainmentSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(containmentStatsSerial(corpus()));
}
void BM_ContainmentParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(containmentStats(corpus()));
}

void BM_LengthSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lengthStatsSerial(corpus()));
}
void BM_LengthParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lengthStats(corpus()));
}

BENCHMARK(BM_FeaturizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeaturizeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PmiSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PmiParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContainmentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ContainmentParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LengthSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LengthParallel)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  artifact_audit::applyThreadLimit();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
