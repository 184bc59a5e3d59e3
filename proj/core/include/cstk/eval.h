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

#ifndef CSTK_EVAL_H_
#define CSTK_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cstk/attributes.h"
#include "cstk/dataset.h"
#include "cstk/metrics.h"
#include "cstk/session.h"
#include "cstk/tree.h"

namespace cstk {

enum class LearnerKind { kStump, kTree, kRepTree, kForest };

std::string_view to_string(LearnerKind kind);

// A named learner together with its hyperparameters. The seed in `config`
// is replaced by the caller-supplied seed whenever a learner is trained.
struct LearnerSpec {
  std::string name;
  LearnerKind kind = LearnerKind::kTree;
  TrainConfig config;

  bool operator==(const LearnerSpec&) const = default;
};

// Built-in learners: "stump", "tree" (gini, unpruned), "reptree"
// (information gain, reduced-error pruning on a 20% holdout) and "forest"
// (100 gini trees, mtry 6). Throws LookupError for any other name.
LearnerSpec parse_learner(std::string_view name);

// Learner used for attribute ranking when none is named: a gini tree of
// depth 4 with at least 50 rows per leaf. Full-set scoring rewards
// memorization, so an unconstrained learner ranks every attribute near zero.
LearnerSpec default_ranking_learner();

// Comma-separated list of built-in names; duplicates are rejected.
std::vector<LearnerSpec> parse_learner_list(std::string_view names);

Model train_learner(const LearnerSpec& spec, const FeatureMatrix& data,
                    std::span<const std::uint32_t> rows, std::uint64_t seed);
Model train_learner(const LearnerSpec& spec, const Dataset& dataset,
                    std::uint64_t seed);

struct FoldResult {
  std::size_t fold = 0;
  double accuracy = 0.0;
  double kappa = 0.0;
  ConfusionMatrix cm;

  bool operator==(const FoldResult&) const = default;
};

struct EvalReport {
  std::string learner;
  Scenario scenario = Scenario::kC;
  LabelScheme scheme = LabelScheme::kBinary;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double kappa = 0.0;
  std::vector<FoldResult> per_fold;
  ConfusionMatrix aggregate_cm;

  bool operator==(const EvalReport&) const = default;
};

// Receives the train and test row indices of each fold before training.
using FoldObserver = std::function<void(std::size_t fold,
                                        std::span<const std::size_t> train,
                                        std::span<const std::size_t> test)>;

// Stratified k-fold cross-validation. Fold f trains with seed
// mix_seed(seed, f). Throws what stratified_kfold or training throws.
EvalReport cross_validate(const LearnerSpec& spec, const Dataset& dataset,
                          std::size_t k, std::uint64_t seed,
                          const FoldObserver& observer = {});

struct ExperimentGrid {
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::vector<std::string> learners;
  // Scenario-major, then scheme, then learner in `learners` order.
  std::vector<EvalReport> reports;

  // nullptr when the cell is absent.
  const EvalReport* find(Scenario scenario, LabelScheme scheme,
                         std::string_view learner) const;
  bool operator==(const ExperimentGrid&) const = default;
};

// Seed of one grid cell, a hash of the grid seed and the cell coordinates.
std::uint64_t cell_seed(std::uint64_t seed, Scenario scenario,
                        LabelScheme scheme, std::string_view learner);

// Every scenario x scheme x learner cell. Throws std::invalid_argument when
// the sessions do not cover both games.
ExperimentGrid run_experiment_grid(std::span<const SessionRecord> sessions,
                                   std::span<const LearnerSpec> learners,
                                   std::size_t k, std::uint64_t seed);

struct RankingEntry {
  std::string attribute;
  double accuracy_without = 0.0;
  double impact = 0.0;  // baseline - accuracy_without

  bool operator==(const RankingEntry&) const = default;
};

struct AttributeRanking {
  std::string learner;
  double baseline_accuracy = 0.0;
  std::vector<RankingEntry> entries;  // impact descending, ties in schema order

  // 1-based rank of `attribute`; throws LookupError when absent.
  std::size_t rank_of(std::string_view attribute) const;
  bool operator==(const AttributeRanking&) const = default;
};

// Leave-one-attribute-out ranking with full-set training: the learner is
// trained and scored on the whole dataset, then once per attribute with that
// attribute withheld from splitting.
AttributeRanking rank_attributes(const LearnerSpec& spec, const Dataset& dataset,
                                 std::uint64_t seed);

// JSON documents; field names are listed in docs/report-schema.md.
std::string to_json(const EvalReport& report);
std::string to_json(const ExperimentGrid& grid);
std::string to_json(const AttributeRanking& ranking);
EvalReport eval_report_from_json(std::string_view text);
ExperimentGrid experiment_grid_from_json(std::string_view text);
AttributeRanking ranking_from_json(std::string_view text);

}  // namespace cstk

#endif  // CSTK_EVAL_H_
