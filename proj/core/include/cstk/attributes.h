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

#ifndef CSTK_ATTRIBUTES_H_
#define CSTK_ATTRIBUTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cstk {

inline constexpr std::size_t kNumAttributes = 34;
inline constexpr std::size_t kNumVrsqItems = 8;

enum class AttributeGroup { kProfile, kQuestionnaire, kGame, kConfig };
enum class AttributeKind { kNumeric, kOrdinal, kBoolean, kCategorical };

struct AttributeInfo {
  std::string_view name;
  AttributeGroup group;
  AttributeKind kind;
};

// The fixed attribute registry: 9 profile, 8 pre-session VRSQ item scores,
// 12 per-frame game fields and 5 game configuration flags, in that order.
// The discomfort report is the class and never appears here.
std::span<const AttributeInfo, kNumAttributes> registry();

// Registry position of `name`. Throws LookupError naming the closest
// registered attribute when `name` is unknown.
std::size_t attribute_index(std::string_view name);

// Checksum over a list of attribute names; models record it so that a model
// is never applied to rows laid out differently.
std::uint64_t schema_checksum(std::span<const std::string> names);
std::uint64_t registry_checksum();

// Registry names as owned strings (the default dataset schema).
std::vector<std::string> registry_names();

// Canonical VRSQ symptom identifiers, in questionnaire order.
std::span<const std::string_view, kNumVrsqItems> vrsq_symptoms();

std::string_view to_string(AttributeGroup group);
std::string_view to_string(AttributeKind kind);

// ---------------------------------------------------------------------------
// Labels and scenarios.

enum class LabelScheme { kBinary, kQuarterly };

inline constexpr std::size_t class_count(LabelScheme scheme) {
  return scheme == LabelScheme::kBinary ? 2 : 4;
}

enum class DiscomfortLevel : std::uint8_t {
  kNone = 0,
  kSlight = 1,
  kModerate = 2,
  kSevere = 3,
};

// Maps a reported level onto the class index of `scheme`: identity for
// quarterly, none/discomfort for binary.
inline constexpr int collapse_label(DiscomfortLevel level, LabelScheme scheme) {
  const int raw = static_cast<int>(level);
  if (scheme == LabelScheme::kQuarterly) return raw;
  return raw == 0 ? 0 : 1;
}

// Throws std::invalid_argument when `value` is outside 0..3.
DiscomfortLevel discomfort_from_int(int value);

enum class Game { kRace, kFlight };

// A: race sessions only, B: flight only, C: both.
enum class Scenario { kA, kB, kC };

inline constexpr std::array<Scenario, 3> kAllScenarios = {
    Scenario::kA, Scenario::kB, Scenario::kC};
inline constexpr std::array<LabelScheme, 2> kAllSchemes = {
    LabelScheme::kBinary, LabelScheme::kQuarterly};

bool scenario_includes(Scenario scenario, Game game);

std::string_view to_string(LabelScheme scheme);
std::string_view to_string(Game game);
std::string_view to_string(Scenario scenario);
LabelScheme parse_scheme(std::string_view text);
Game parse_game(std::string_view text);
Scenario parse_scenario(std::string_view text);

}  // namespace cstk

#endif  // CSTK_ATTRIBUTES_H_
