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

#include "cstk/dataset.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cstk/random.h"

namespace cstk {

std::vector<double> encode_features(const SessionRecord& s,
                                    const TelemetryFrame& f) {
  const auto b = [](bool v) { return v ? 1.0 : 0.0; };
  std::vector<double> v;
  v.reserve(kNumAttributes);
  const UserProfile& p = s.profile;
  v.push_back(static_cast<double>(p.gender));
  v.push_back(p.age);
  v.push_back(p.vr_experience);
  v.push_back(b(p.flicker_sensitivity));
  v.push_back(b(p.pre_symptoms));
  v.push_back(b(p.wears_glasses));
  v.push_back(b(p.vision_impairment));
  v.push_back(static_cast<double>(p.posture));
  v.push_back(static_cast<double>(p.dominant_eye));
  for (const auto& item : s.pre_questionnaire.items) v.push_back(item.score);
  v.push_back(f.timestamp);
  v.push_back(f.speed);
  v.push_back(f.acceleration);
  v.push_back(f.rotation_x);
  v.push_back(f.rotation_y);
  v.push_back(f.rotation_z);
  v.push_back(f.position_x);
  v.push_back(f.position_y);
  v.push_back(f.position_z);
  v.push_back(f.region_of_interest);
  v.push_back(f.fov_size);
  v.push_back(f.frame_rate);
  const GameConfig& c = s.config;
  v.push_back(b(c.static_rest_frame));
  v.push_back(b(c.haptic_feedback));
  v.push_back(c.camera_control_level);
  v.push_back(b(c.dof_simulation));
  v.push_back(b(c.auto_camera));
  if (v.size() != kNumAttributes) {
    throw std::invalid_argument("session " + s.session_id +
                                ": pre_questionnaire must have 8 items");
  }
  return v;
}

std::vector<DiscomfortLevel> propagate_reports(const SessionRecord& session) {
  std::vector<DiscomfortLevel> levels;
  levels.reserve(session.frames.size());
  DiscomfortLevel current = DiscomfortLevel::kNone;
  for (const auto& frame : session.frames) {
    if (frame.reported_discomfort) current = *frame.reported_discomfort;
    levels.push_back(current);
  }
  return levels;
}

Dataset assemble_features(std::span<const SessionRecord> sessions,
                          LabelScheme scheme, Scenario scenario) {
  Dataset dataset;
  dataset.scheme = scheme;
  dataset.scenario = scenario;
  for (const auto& session : sessions) {
    if (!scenario_includes(scenario, session.game)) {
      throw std::invalid_argument("session " + session.session_id + " (" +
                                  std::string(to_string(session.game)) +
                                  ") is not part of scenario " +
                                  std::string(to_string(scenario)));
    }
    const bool any_report = std::any_of(
        session.frames.begin(), session.frames.end(),
        [](const TelemetryFrame& f) { return f.reported_discomfort.has_value(); });
    if (!any_report) {
      throw std::invalid_argument("session " + session.session_id +
                                  " has no discomfort report");
    }
    const auto levels = propagate_reports(session);
    for (std::size_t i = 0; i < session.frames.size(); ++i) {
      const auto& frame = session.frames[i];
      dataset.rows.push_back({encode_features(session, frame),
                              collapse_label(levels[i], scheme),
                              session.session_id, frame.timestamp});
    }
    dataset.provenance.push_back(session.session_id);
  }
  return dataset;
}

std::vector<SessionRecord> filter_scenario(
    std::span<const SessionRecord> sessions, Scenario scenario) {
  std::vector<SessionRecord> out;
  for (const auto& s : sessions) {
    if (scenario_includes(scenario, s.game)) out.push_back(s);
  }
  return out;
}

Dataset build_dataset(std::span<const SessionRecord> sessions,
                      Scenario scenario, LabelScheme scheme) {
  const auto selected = filter_scenario(sessions, scenario);
  return assemble_features(selected, scheme, scenario);
}

ClassDistribution class_distribution(const Dataset& dataset) {
  if (dataset.rows.empty()) {
    throw std::invalid_argument("class distribution of an empty dataset");
  }
  ClassDistribution dist;
  dist.counts.assign(dataset.num_classes(), 0);
  for (const auto& row : dataset.rows) ++dist.counts.at(row.label);
  const double n = static_cast<double>(dataset.rows.size());
  for (const auto c : dist.counts) dist.proportions.push_back(c / n);
  return dist;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) rows.push_back(i);
  }
  return rows;
}

FoldPlan assign_stratified_folds(std::span<const int> labels,
                                 std::size_t num_classes, std::size_t k,
                                 std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);

  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class.at(static_cast<std::size_t>(labels[i])).push_back(i);
  }
  std::size_t dealt = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& rows = by_class[c];
    Rng rng(mix_seed(seed, c));
    rng.shuffle(std::span<std::size_t>(rows));
    for (const auto row : rows) plan.assignments[row] = dealt++ % k;
  }
  return plan;
}

FoldPlan stratified_kfold(const Dataset& dataset, std::size_t k,
                          std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  std::vector<int> labels;
  labels.reserve(dataset.rows.size());
  std::vector<std::size_t> counts(dataset.num_classes(), 0);
  for (const auto& row : dataset.rows) {
    labels.push_back(row.label);
    ++counts.at(row.label);
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0 && counts[c] < k) {
      throw std::invalid_argument("class " + std::to_string(c) + " has " +
                                  std::to_string(counts[c]) +
                                  " rows, fewer than k=" + std::to_string(k));
    }
  }
  return assign_stratified_folds(labels, dataset.num_classes(), k, seed);
}

Dataset select_rows(const Dataset& dataset, std::span<const std::size_t> rows) {
  Dataset out;
  out.scheme = dataset.scheme;
  out.scenario = dataset.scenario;
  out.schema = dataset.schema;
  out.provenance = dataset.provenance;
  out.rows.reserve(rows.size());
  for (const auto r : rows) out.rows.push_back(dataset.rows.at(r));
  return out;
}

Dataset append_noise_attribute(const Dataset& dataset, std::string name,
                               std::uint64_t seed) {
  Dataset out = dataset;
  out.schema.push_back(std::move(name));
  Rng rng(seed);
  for (auto& row : out.rows) row.values.push_back(rng.uniform01());
  return out;
}

}  // namespace cstk
