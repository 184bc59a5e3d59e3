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

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "cstk/attributes.h"
#include "cstk/errors.h"
#include "cstk/session.h"
#include "fixtures.h"

namespace cstk {
namespace {

TEST(Registry, HasThirtyFourUniqueAttributesInFourGroups) {
  const auto reg = registry();
  ASSERT_EQ(reg.size(), 34u);
  std::set<std::string_view> names;
  std::size_t per_group[4] = {};
  for (const auto& a : reg) {
    names.insert(a.name);
    ++per_group[static_cast<int>(a.group)];
  }
  EXPECT_EQ(names.size(), 34u);
  EXPECT_EQ(per_group[0], 9u);   // profile
  EXPECT_EQ(per_group[1], 8u);   // questionnaire
  EXPECT_EQ(per_group[2], 12u);  // game
  EXPECT_EQ(per_group[3], 5u);   // config
}

TEST(Registry, GroupsAreContiguousInOrder) {
  const auto reg = registry();
  for (std::size_t i = 1; i < reg.size(); ++i) {
    EXPECT_LE(static_cast<int>(reg[i - 1].group), static_cast<int>(reg[i].group)) << i;
  }
}

TEST(Registry, AttributeIndexLookups) {
  EXPECT_EQ(attribute_index("gender"), 0u);
  EXPECT_EQ(attribute_index("age"), 1u);
  std::size_t first_game = 0;
  while (registry()[first_game].group != AttributeGroup::kGame) ++first_game;
  EXPECT_EQ(attribute_index("timestamp"), first_game);
  EXPECT_EQ(first_game, 17u);
}

TEST(Registry, UnknownNameSuggestsNearest) {
  try {
    attribute_index("timestamq");
    FAIL() << "expected LookupError";
  } catch (const LookupError& e) {
    EXPECT_NE(std::string(e.what()).find("timestamp"), std::string::npos) << e.what();
  }
  EXPECT_THROW(attribute_index("no_such"), LookupError);
}

TEST(Registry, ChecksumTracksNamesAndOrder) {
  auto names = registry_names();
  EXPECT_EQ(schema_checksum(names), registry_checksum());
  std::swap(names[0], names[1]);
  EXPECT_NE(schema_checksum(names), registry_checksum());
  names = registry_names();
  names.pop_back();
  EXPECT_NE(schema_checksum(names), registry_checksum());
}

TEST(Labels, CollapseLabel) {
  EXPECT_EQ(collapse_label(DiscomfortLevel::kModerate, LabelScheme::kBinary), 1);
  EXPECT_EQ(collapse_label(DiscomfortLevel::kNone, LabelScheme::kBinary), 0);
  EXPECT_EQ(collapse_label(DiscomfortLevel::kSevere, LabelScheme::kQuarterly), 3);
  EXPECT_EQ(collapse_label(DiscomfortLevel::kSlight, LabelScheme::kBinary), 1);
  for (int l = 0; l < 4; ++l) {
    EXPECT_EQ(collapse_label(discomfort_from_int(l), LabelScheme::kQuarterly), l);
  }
  EXPECT_THROW(discomfort_from_int(4), std::invalid_argument);
}

TEST(Labels, EnumRoundTrips) {
  for (auto s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
  for (auto s : kAllScenarios) EXPECT_EQ(parse_scenario(to_string(s)), s);
  EXPECT_EQ(parse_game("race"), Game::kRace);
  EXPECT_EQ(parse_game("flight"), Game::kFlight);
  EXPECT_TRUE(scenario_includes(Scenario::kA, Game::kRace));
  EXPECT_FALSE(scenario_includes(Scenario::kA, Game::kFlight));
  EXPECT_TRUE(scenario_includes(Scenario::kC, Game::kFlight));
}

TEST(Validate, WellFormedSessionIsOk) {
  const auto s = testing::make_session("ok", Game::kRace, 2);
  EXPECT_TRUE(validate_session(s).ok());
}

TEST(Validate, TimestampRegression) {
  auto s = testing::make_session("bad", Game::kRace, 2);
  s.frames[0].timestamp = 1.0;
  s.frames[1].timestamp = 0.5;
  const auto report = validate_session(s);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations[0].message, "timestamp order");
  ASSERT_TRUE(report.violations[0].frame_index.has_value());
  EXPECT_EQ(*report.violations[0].frame_index, 1u);
}

TEST(Validate, FovOutOfRange) {
  auto s = testing::make_session("fov", Game::kRace, 2);
  s.frames[1].fov_size = 200.0;
  const auto report = validate_session(s);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations[0].message, "fov_size range");
  EXPECT_EQ(report.violations[0].field, "fov_size");
}

TEST(Validate, FrameLevelChecksSeePrevious) {
  const auto a = testing::frame_at(2.0);
  const auto b = testing::frame_at(2.0);
  EXPECT_FALSE(validate_frame(b, &a, 1).empty());
  EXPECT_TRUE(validate_frame(b, nullptr, 0).empty());
}

}  // namespace
}  // namespace cstk
