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

#include "cstk/attributes.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "cstk/errors.h"
#include "cstk/random.h"

namespace cstk {
namespace {

using G = AttributeGroup;
using K = AttributeKind;

constexpr std::array<AttributeInfo, kNumAttributes> kRegistry = {{
    {"gender", G::kProfile, K::kCategorical},
    {"age", G::kProfile, K::kNumeric},
    {"vr_experience", G::kProfile, K::kOrdinal},
    {"flicker_sensitivity", G::kProfile, K::kBoolean},
    {"pre_symptoms", G::kProfile, K::kBoolean},
    {"wears_glasses", G::kProfile, K::kBoolean},
    {"vision_impairment", G::kProfile, K::kBoolean},
    {"posture", G::kProfile, K::kCategorical},
    {"dominant_eye", G::kProfile, K::kCategorical},
    {"vrsq_general_discomfort", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_fatigue", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_eyestrain", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_difficulty_focusing", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_headache", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_fullness_of_head", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_blurred_vision", G::kQuestionnaire, K::kOrdinal},
    {"vrsq_dizziness", G::kQuestionnaire, K::kOrdinal},
    {"timestamp", G::kGame, K::kNumeric},
    {"speed", G::kGame, K::kNumeric},
    {"acceleration", G::kGame, K::kNumeric},
    {"rotation_x", G::kGame, K::kNumeric},
    {"rotation_y", G::kGame, K::kNumeric},
    {"rotation_z", G::kGame, K::kNumeric},
    {"position_x", G::kGame, K::kNumeric},
    {"position_y", G::kGame, K::kNumeric},
    {"position_z", G::kGame, K::kNumeric},
    {"region_of_interest", G::kGame, K::kCategorical},
    {"fov_size", G::kGame, K::kNumeric},
    {"frame_rate", G::kGame, K::kNumeric},
    {"static_rest_frame", G::kConfig, K::kBoolean},
    {"haptic_feedback", G::kConfig, K::kBoolean},
    {"camera_control_level", G::kConfig, K::kOrdinal},
    {"dof_simulation", G::kConfig, K::kBoolean},
    {"auto_camera", G::kConfig, K::kBoolean},
}};

constexpr std::array<std::string_view, kNumVrsqItems> kVrsqSymptoms = {
    "general_discomfort", "fatigue",        "eyestrain",      "difficulty_focusing",
    "headache",           "fullness_of_head", "blurred_vision", "dizziness",
};

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::span<const AttributeInfo, kNumAttributes> registry() { return kRegistry; }

std::span<const std::string_view, kNumVrsqItems> vrsq_symptoms() {
  return kVrsqSymptoms;
}

std::size_t attribute_index(std::string_view name) {
  std::size_t nearest = 0;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < kRegistry.size(); ++i) {
    if (kRegistry[i].name == name) return i;
    const std::size_t d = edit_distance(name, kRegistry[i].name);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  throw LookupError("unknown attribute '" + std::string(name) +
                    "' (did you mean '" + std::string(kRegistry[nearest].name) +
                    "'?)");
}

std::uint64_t schema_checksum(std::span<const std::string> names) {
  std::uint64_t h = fnv1a64("cstk-schema");
  for (const auto& name : names) {
    h = fnv1a64(name, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  names.reserve(kRegistry.size());
  for (const auto& entry : kRegistry) names.emplace_back(entry.name);
  return names;
}

std::uint64_t registry_checksum() {
  static const std::uint64_t checksum = schema_checksum(registry_names());
  return checksum;
}

std::string_view to_string(AttributeGroup group) {
  switch (group) {
    case G::kProfile: return "profile";
    case G::kQuestionnaire: return "questionnaire";
    case G::kGame: return "game";
    case G::kConfig: return "config";
  }
  return "?";
}

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case K::kNumeric: return "numeric";
    case K::kOrdinal: return "ordinal";
    case K::kBoolean: return "boolean";
    case K::kCategorical: return "categorical";
  }
  return "?";
}

DiscomfortLevel discomfort_from_int(int value) {
  if (value < 0 || value > 3) {
    throw std::invalid_argument("discomfort level " + std::to_string(value) +
                                " outside 0..3");
  }
  return static_cast<DiscomfortLevel>(value);
}

bool scenario_includes(Scenario scenario, Game game) {
  switch (scenario) {
    case Scenario::kA: return game == Game::kRace;
    case Scenario::kB: return game == Game::kFlight;
    case Scenario::kC: return true;
  }
  return false;
}

std::string_view to_string(LabelScheme scheme) {
  return scheme == LabelScheme::kBinary ? "binary" : "quarterly";
}

std::string_view to_string(Game game) {
  return game == Game::kRace ? "race" : "flight";
}

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kA: return "A";
    case Scenario::kB: return "B";
    case Scenario::kC: return "C";
  }
  return "?";
}

LabelScheme parse_scheme(std::string_view text) {
  if (text == "binary") return LabelScheme::kBinary;
  if (text == "quarterly") return LabelScheme::kQuarterly;
  throw LookupError("unknown label scheme '" + std::string(text) +
                    "' (expected binary or quarterly)");
}

Game parse_game(std::string_view text) {
  if (text == "race") return Game::kRace;
  if (text == "flight") return Game::kFlight;
  throw LookupError("unknown game '" + std::string(text) +
                    "' (expected race or flight)");
}

Scenario parse_scenario(std::string_view text) {
  if (text == "A" || text == "a") return Scenario::kA;
  if (text == "B" || text == "b") return Scenario::kB;
  if (text == "C" || text == "c") return Scenario::kC;
  throw LookupError("unknown scenario '" + std::string(text) +
                    "' (expected A, B or C)");
}

}  // namespace cstk
