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

#ifndef CSTK_DATASET_H_
#define CSTK_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cstk/attributes.h"
#include "cstk/session.h"

namespace cstk {

// One labeled row. `values` follows the owning dataset's schema, which is
// the 34-entry registry unless extra columns were appended for experiments.
struct FeatureVector {
  std::vector<double> values;
  int label = 0;
  std::string session_id;
  double frame_timestamp = 0.0;

  bool operator==(const FeatureVector&) const = default;
};

struct Dataset {
  LabelScheme scheme = LabelScheme::kBinary;
  Scenario scenario = Scenario::kC;
  std::vector<std::string> schema = registry_names();
  std::vector<FeatureVector> rows;
  std::vector<std::string> provenance;  // contributing session ids, in order

  std::size_t num_classes() const { return class_count(scheme); }
  std::size_t num_attributes() const { return schema.size(); }
  std::uint64_t checksum() const { return schema_checksum(schema); }

  bool operator==(const Dataset&) const = default;
};

// The 34 registry values of one frame in its session context. Categoricals
// and booleans are integer coded (gender 0/1/2, posture and eye 0/1).
std::vector<double> encode_features(const SessionRecord& session,
                                    const TelemetryFrame& frame);

// Per-frame levels with the most recent report carried forward; frames
// before the first report are level 0.
std::vector<DiscomfortLevel> propagate_reports(const SessionRecord& session);

// One row per frame of every session. Throws std::invalid_argument naming
// the session when a session has no report at all, or when a session's game
// is not part of `scenario`.
Dataset assemble_features(std::span<const SessionRecord> sessions,
                          LabelScheme scheme,
                          Scenario scenario = Scenario::kC);

// Sessions belonging to `scenario`, order preserved.
std::vector<SessionRecord> filter_scenario(
    std::span<const SessionRecord> sessions, Scenario scenario);

// filter_scenario followed by assemble_features.
Dataset build_dataset(std::span<const SessionRecord> sessions,
                      Scenario scenario, LabelScheme scheme);

struct ClassDistribution {
  std::vector<std::size_t> counts;
  std::vector<double> proportions;
};

// Throws std::invalid_argument on an empty dataset.
ClassDistribution class_distribution(const Dataset& dataset);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // row index -> fold id

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;

  bool operator==(const FoldPlan&) const = default;
};

// Stratified fold assignment with no minimum-size precondition. Rows of
// each class are shuffled (seeded) and dealt round-robin; the dealing
// position carries over from one class to the next in label order so fold
// sizes stay balanced overall.
FoldPlan assign_stratified_folds(std::span<const int> labels,
                                 std::size_t num_classes, std::size_t k,
                                 std::uint64_t seed);

// Throws std::invalid_argument if k < 2 or a class present in the data has
// fewer than k rows.
FoldPlan stratified_kfold(const Dataset& dataset, std::size_t k,
                          std::uint64_t seed);

// Copy of `dataset` restricted to `rows`, in the given order.
Dataset select_rows(const Dataset& dataset, std::span<const std::size_t> rows);

// Appends a column of seeded U(0,1) values that carries no label signal.
Dataset append_noise_attribute(const Dataset& dataset, std::string name,
                               std::uint64_t seed);

}  // namespace cstk

#endif  // CSTK_DATASET_H_
