/*
 * Copyright 2026 The cstk Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Throughput of the hot paths: corpus generation, tree/forest training,
// per-frame prediction and track heat aggregation.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "cstk/dataset.h"
#include "cstk/eval.h"
#include "cstk/heat.h"
#include "cstk/synth.h"
#include "cstk/tree.h"

namespace {

const cstk::Corpus& corpus() {
  static const cstk::Corpus c = cstk::generate_corpus({20, 0, 3993, 0}, 7);
  return c;
}

const cstk::Dataset& race_binary() {
  static const cstk::Dataset d =
      cstk::build_dataset(corpus().sessions, cstk::Scenario::kA, cstk::LabelScheme::kBinary);
  return d;
}

void BM_GenerateCorpus(benchmark::State& state) {
  const std::size_t sessions = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto c = cstk::generate_corpus({sessions, 0, sessions * 200, 0}, 7);
    benchmark::DoNotOptimize(c.sessions.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(sessions) * 200);
}
BENCHMARK(BM_GenerateCorpus)->Arg(5)->Arg(20);

void BM_TrainTree(benchmark::State& state) {
  cstk::TrainConfig config;
  for (auto _ : state) {
    auto model = cstk::train_tree(race_binary(), config);
    benchmark::DoNotOptimize(model.nodes.data());
  }
}
BENCHMARK(BM_TrainTree)->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
  cstk::TrainConfig config;
  config.n_trees = static_cast<int>(state.range(0));
  config.seed = 7;
  for (auto _ : state) {
    auto model = cstk::train_forest(race_binary(), config);
    benchmark::DoNotOptimize(model.trees.data());
  }
}
BENCHMARK(BM_TrainForest)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PredictForest(benchmark::State& state) {
  cstk::TrainConfig config;
  config.n_trees = 100;
  config.seed = 7;
  const cstk::Model model = cstk::train_forest(race_binary(), config);
  const auto& rows = race_binary().rows;
  std::size_t i = 0;
  for (auto _ : state) {
    auto dist = cstk::predict_distribution(model, rows[i].values);
    benchmark::DoNotOptimize(dist.data());
    i = (i + 1) % rows.size();
  }
}
BENCHMARK(BM_PredictForest);

void BM_CrossValidateTree(benchmark::State& state) {
  const auto spec = cstk::parse_learner("tree");
  for (auto _ : state) {
    auto report = cstk::cross_validate(spec, race_binary(), 10, 7);
    benchmark::DoNotOptimize(report.accuracy);
  }
}
BENCHMARK(BM_CrossValidateTree)->Unit(benchmark::kMillisecond);

void BM_HeatAggregate(benchmark::State& state) {
  for (auto _ : state) {
    auto grid = cstk::aggregate_track_heat(corpus().sessions);
    benchmark::DoNotOptimize(grid.total());
  }
}
BENCHMARK(BM_HeatAggregate);

}  // namespace

BENCHMARK_MAIN();
