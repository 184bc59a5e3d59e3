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

#include "cstk/advisor.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "cstk/attributes.h"
#include "cstk/dataset.h"
#include "cstk/errors.h"

namespace cstk {
namespace {

constexpr std::array<Cause, kNumCauses> kCauses = {
    Cause::kLocomotion,      Cause::kAcceleration, Cause::kFieldOfView,
    Cause::kDepthOfField,    Cause::kDegreeOfControl, Cause::kExposure,
    Cause::kLatency,         Cause::kStaticRestFrame, Cause::kCameraRotation,
    Cause::kPosturalInstability,
};

constexpr std::array<std::string_view, kNumCauses> kCauseNames = {
    "Locomotion", "Acceleration",    "FieldOfView",     "DepthOfField",   "DegreeOfControl",
    "Exposure",   "Latency",         "StaticRestFrame", "CameraRotation", "PosturalInstability",
};

struct StrategyRow {
  Strategy strategy;
  std::string_view name;
  std::initializer_list<int> causes;
};

const std::array<StrategyRow, kNumStrategies>& rows() {
  static const std::array<StrategyRow, kNumStrategies> table = {{
      {Strategy::kTeleporting, "Teleporting", {1}},
      {Strategy::kTunneling, "Tunneling", {1}},
      {Strategy::kMotionWalk, "MotionWalk", {1}},
      {Strategy::kHapticFeedback, "HapticFeedback", {2}},
      {Strategy::kAccelerationChanges, "AccelerationChanges", {2}},
      {Strategy::kHeadlock, "Headlock", {5}},
      {Strategy::kHolosphere, "Holosphere", {1}},
      {Strategy::kTrajectoryVisualization, "TrajectoryVisualization", {1}},
      {Strategy::kRotationalBlur, "RotationalBlur", {1, 9}},
      {Strategy::kDoFSimulation, "DoFSimulation", {4}},
      {Strategy::kLatencyCameraWarping, "LatencyCameraWarping", {7}},
      {Strategy::kCabinStaticFrame, "CabinStaticFrame", {8}},
      {Strategy::kSlowmotion, "Slowmotion", {2, 9}},
      {Strategy::kDynamicFoV, "DynamicFoV", {3}},
      {Strategy::kDynamicVignetting, "DynamicVignetting", {1, 3}},
      {Strategy::kAmplifiedMovements, "AmplifiedMovements", {9}},
      {Strategy::kBlur, "Blur", {1, 2, 3, 4, 9}},
      {Strategy::kInterval, "Interval", {6}},
      {Strategy::kPhysiologicalSignalsObservation, "PhysiologicalSignalsObservation", {10}},
  }};
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string describe(const RankingEntry& entry, std::size_t rank, const FrameStats& stats) {
  std::string note = fmt::format("rank {}, impact {:.4f}", rank, entry.impact);
  if (const auto it = stats.find(entry.attribute); it != stats.end()) {
    note += fmt::format("; session mean {:.4g} (min {:.4g}, max {:.4g})", it->second.mean,
                        it->second.min, it->second.max);
  }
  return note;
}

}  // namespace

std::span<const Cause, kNumCauses> all_causes() { return kCauses; }

std::span<const Strategy, kNumStrategies> all_strategies() {
  static const auto strategies = [] {
    std::array<Strategy, kNumStrategies> out{};
    for (std::size_t i = 0; i < kNumStrategies; ++i) out[i] = rows()[i].strategy;
    return out;
  }();
  return strategies;
}

int cause_id(Cause cause) { return static_cast<int>(cause); }

Cause cause_from_id(int id) {
  if (id < 1 || id > static_cast<int>(kNumCauses)) {
    throw LookupError("cause id " + std::to_string(id) + " outside 1..10");
  }
  return static_cast<Cause>(id);
}

std::string_view to_string(Cause cause) { return kCauseNames[cause_id(cause) - 1]; }

std::string_view to_string(Strategy strategy) {
  return rows()[static_cast<std::size_t>(strategy)].name;
}

Cause parse_cause(std::string_view name) {
  for (std::size_t i = 0; i < kNumCauses; ++i) {
    if (kCauseNames[i] == name) return kCauses[i];
  }
  throw LookupError("unknown cause '" + std::string(name) + "'");
}

Strategy parse_strategy(std::string_view name) {
  for (const auto& row : rows()) {
    if (row.name == name) return row.strategy;
  }
  throw LookupError("unknown strategy '" + std::string(name) + "'");
}

std::size_t CauseStrategyMatrix::true_cells() const {
  std::size_t n = 0;
  for (const auto& row : cells_) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  return n;
}

const CauseStrategyMatrix& builtin_matrix() {
  static const CauseStrategyMatrix matrix = [] {
    CauseStrategyMatrix m;
    for (const auto& row : rows()) {
      for (const int c : row.causes) m.set(row.strategy, cause_from_id(c), true);
    }
    return m;
  }();
  return matrix;
}

std::vector<Strategy> strategies_for(Cause cause, const CauseStrategyMatrix& matrix) {
  std::vector<Strategy> out;
  for (const auto s : all_strategies()) {
    if (matrix.cell(s, cause)) out.push_back(s);
  }
  return out;
}

std::string matrix_to_csv(const CauseStrategyMatrix& matrix) {
  std::string out = "strategy";
  for (const auto c : kCauses) out += fmt::format(",{}", to_string(c));
  out += '\n';
  for (const auto s : all_strategies()) {
    out += to_string(s);
    for (const auto c : kCauses) out += matrix.cell(s, c) ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

CauseMapping CauseMapping::defaults() {
  CauseMapping m;
  m.set("timestamp", Cause::kExposure);
  m.set("speed", Cause::kLocomotion);
  m.set("position_x", Cause::kLocomotion);
  m.set("position_y", Cause::kLocomotion);
  m.set("position_z", Cause::kLocomotion);
  m.set("acceleration", Cause::kAcceleration);
  m.set("rotation_x", Cause::kCameraRotation);
  m.set("rotation_y", Cause::kCameraRotation);
  m.set("rotation_z", Cause::kCameraRotation);
  m.set("fov_size", Cause::kFieldOfView);
  m.set("frame_rate", Cause::kLatency);
  m.set("dof_simulation", Cause::kDepthOfField);
  m.set("static_rest_frame", Cause::kStaticRestFrame);
  m.set("camera_control_level", Cause::kDegreeOfControl);
  m.set("auto_camera", Cause::kDegreeOfControl);
  m.set("posture", Cause::kPosturalInstability);
  return m;
}

CauseMapping CauseMapping::parse(std::istream& in) {
  CauseMapping m;
  std::string raw;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t, std::less<>> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'attribute = cause'", line_no);
    const auto attribute = trim(line.substr(0, eq));
    const auto cause = trim(line.substr(eq + 1));
    try {
      attribute_index(attribute);
    } catch (const LookupError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (const auto [it, fresh] = seen.emplace(std::string(attribute), line_no); !fresh) {
      throw ParseError(fmt::format("attribute '{}' already mapped on line {}", attribute,
                                   it->second),
                       line_no);
    }
    if (cause == "none") {
      m.set(attribute, std::nullopt);
      continue;
    }
    try {
      m.set(attribute, parse_cause(cause));
    } catch (const LookupError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return m;
}

CauseMapping CauseMapping::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mapping file '" + path + "'");
  return parse(in);
}

std::optional<Cause> CauseMapping::cause_of(std::string_view attribute) const {
  const auto it = table_.find(attribute);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

void CauseMapping::set(std::string_view attribute, std::optional<Cause> cause) {
  if (cause) {
    table_.insert_or_assign(std::string(attribute), *cause);
  } else if (const auto it = table_.find(attribute); it != table_.end()) {
    table_.erase(it);
  }
}

std::string CauseMapping::to_config() const {
  std::string out;
  for (const auto& info : registry()) {
    const auto cause = cause_of(info.name);
    out += fmt::format("{} = {}\n", info.name, cause ? to_string(*cause) : "none");
  }
  return out;
}

FrameStats frame_statistics(const SessionRecord& session) {
  if (session.frames.empty()) {
    throw std::invalid_argument("session '" + session.session_id + "' has no frames");
  }
  const auto reg = registry();
  std::vector<AttributeStats> acc(kNumAttributes);
  for (std::size_t i = 0; i < session.frames.size(); ++i) {
    const auto values = encode_features(session, session.frames[i]);
    for (std::size_t a = 0; a < kNumAttributes; ++a) {
      auto& s = acc[a];
      if (i == 0) {
        s = {values[a], values[a], values[a]};
      } else {
        s.mean += values[a];
        s.min = std::min(s.min, values[a]);
        s.max = std::max(s.max, values[a]);
      }
    }
  }
  FrameStats stats;
  for (std::size_t a = 0; a < kNumAttributes; ++a) {
    acc[a].mean /= static_cast<double>(session.frames.size());
    stats.emplace(std::string(reg[a].name), acc[a]);
  }
  return stats;
}

CauseInference infer_causes(const AttributeRanking& ranking, const FrameStats& stats,
                            std::size_t top_n, const CauseMapping& mapping) {
  if (top_n == 0) throw std::invalid_argument("top_n must be at least 1");
  CauseInference result;
  if (top_n > ranking.entries.size()) {
    result.warnings.push_back(fmt::format("top_n {} clamped to the {} ranked attributes", top_n,
                                          ranking.entries.size()));
    top_n = ranking.entries.size();
  }
  for (std::size_t i = 0; i < top_n; ++i) {
    const auto& entry = ranking.entries[i];
    Evidence evidence{entry.attribute, describe(entry, i + 1, stats)};
    const auto cause = mapping.cause_of(entry.attribute);
    if (!cause) {
      result.unmapped.push_back(std::move(evidence));
      continue;
    }
    const auto it = std::find_if(result.causes.begin(), result.causes.end(),
                                 [&](const CauseEvidence& c) { return c.cause == *cause; });
    if (it == result.causes.end()) {
      result.causes.push_back({*cause, {std::move(evidence)}});
    } else {
      it->evidence.push_back(std::move(evidence));
    }
  }
  return result;
}

double discomfort_probability(std::span<const double> prediction) {
  if (prediction.size() != 2 && prediction.size() != 4) {
    throw std::invalid_argument("prediction must have 2 or 4 class probabilities");
  }
  double total = 0.0;
  for (const double p : prediction) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("probabilities do not sum to 1");
  return 1.0 - prediction[0];
}

std::vector<Suggestion> advise(std::span<const double> prediction,
                               std::span<const CauseEvidence> causes, double threshold,
                               const CauseStrategyMatrix& matrix) {
  std::vector<Suggestion> out;
  if (discomfort_probability(prediction) <= threshold) return out;
  for (const auto& c : causes) {
    out.push_back({c.cause, strategies_for(c.cause, matrix), c.evidence});
  }
  return out;
}

}  // namespace cstk
