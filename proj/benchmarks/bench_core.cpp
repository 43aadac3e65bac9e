#include <benchmark/benchmark.h>

#include "facetlab/corpus.hpp"
#include "facetlab/grammar.hpp"
#include "facetlab/neural.hpp"
#include "facetlab/ppmi.hpp"
#include "facetlab/probe.hpp"
#include "facetlab/rng.hpp"

using namespace facetlab;

static void BM_SampleSentences(benchmark::State& state) {
  Pcfg g = build_ambiguity_grammar(AmbiguityParams::from_alpha(1.5));
  RngStream rng(1);
  for (auto _ : state) {
    auto s = sample_sentence(g, rng);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(BM_SampleSentences);

static void BM_GenerateCorpus(benchmark::State& state) {
  Pcfg g = build_conflation_grammar();
  for (auto _ : state) {
    RngStream rng(1);
    Corpus c = generate_corpus(g, state.range(0), rng);
    benchmark::DoNotOptimize(c.sentences.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateCorpus)->Arg(10000);

static void BM_PpmiTrain(benchmark::State& state) {
  Pcfg g = build_ambiguity_grammar(AmbiguityParams::from_alpha(1.5));
  RngStream rng(1);
  Corpus c = generate_corpus(g, 100000, rng);
  for (auto _ : state) {
    EmbeddingSet e = train_ppmi(c);
    benchmark::DoNotOptimize(e.data.data());
  }
}
BENCHMARK(BM_PpmiTrain);

// One epoch of negative-sampling training per iteration, per model kind.
static void BM_TrainEpoch(benchmark::State& state) {
  Pcfg g = build_conflation_grammar();
  RngStream rng(1);
  Corpus c = generate_corpus(g, 20000, rng);
  TrainConfig cfg;
  cfg.kind = static_cast<ModelKind>(state.range(0));
  cfg.dim = 100;
  cfg.epochs = 1;
  cfg.seed = 7;
  cfg.track_loss = false;
  for (auto _ : state) {
    EmbeddingPair p = train(c, cfg);
    benchmark::DoNotOptimize(p.input.data());
  }
  state.SetItemsProcessed(state.iterations() * events_per_epoch(cfg.kind, c));
}
BENCHMARK(BM_TrainEpoch)
    ->DenseRange(0, 4)
    ->Unit(benchmark::kMillisecond);

static void BM_ProbeFit(benchmark::State& state) {
  RngStream rng(3);
  const int n = 60, d = 100;
  std::vector<double> x(n * d);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 2 ? 1 : -1;
    for (int j = 0; j < d; ++j)
      x[i * d + j] = uniform_double(rng) + 0.3 * y[i];
  }
  for (auto _ : state) {
    LinearProbe p;
    p.fit(DataView{x.data(), n, d}, y, ProbeConfig{});
    benchmark::DoNotOptimize(p.weights().data());
  }
}
BENCHMARK(BM_ProbeFit);

BENCHMARK_MAIN();
