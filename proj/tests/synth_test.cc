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

#include <cmath>
#include <sstream>

#include "cstk/dataset.h"
#include "cstk/session_io.h"
#include "cstk/synth.h"

namespace cstk {
namespace {

UserProfile neutral_profile() {
  UserProfile p;
  p.vr_experience = 3;  // experienced, no symptoms: susceptibility 0
  return p;
}

TEST(Risk, AllTermsZero) {
  SimParams params;
  EXPECT_DOUBLE_EQ(profile_score(neutral_profile()), 0.0);
  EXPECT_EQ(risk_score(0.0, 0.0, 0.0, 0.0, params), 0.0);
}

TEST(Risk, AllTermsSaturate) {
  SimParams params;
  EXPECT_DOUBLE_EQ(risk_score(params.duration_s, params.omega_ref * 3, -params.accel_ref * 2, 1.0, params),
                   1.0);
}

TEST(Risk, HandEvaluatedMidpoint) {
  SimParams params;
  params.weights = {0.4, 0.3, 0.2, 0.1};
  // 0.4 * 0.5 + 0.3 * 0.5 = 0.35
  EXPECT_NEAR(risk_score(params.duration_s / 2, params.omega_ref / 2, 0.0, 0.0, params), 0.35, 1e-12);
}

TEST(Risk, ThresholdMap) {
  const std::array<double, 3> t{0.25, 0.5, 0.75};
  EXPECT_EQ(risk_level(0.0, t), DiscomfortLevel::kNone);
  EXPECT_EQ(risk_level(0.2499, t), DiscomfortLevel::kNone);
  EXPECT_EQ(risk_level(0.25, t), DiscomfortLevel::kSlight);
  EXPECT_EQ(risk_level(0.5, t), DiscomfortLevel::kModerate);
  EXPECT_EQ(risk_level(0.75, t), DiscomfortLevel::kSevere);
  EXPECT_EQ(risk_level(1.0, t), DiscomfortLevel::kSevere);
}

TEST(Risk, ProfileScore) {
  UserProfile p;
  p.vr_experience = 0;
  p.pre_symptoms = true;
  p.flicker_sensitivity = true;
  EXPECT_DOUBLE_EQ(profile_score(p), 1.0);
  p.vr_experience = 3;
  p.flicker_sensitivity = false;
  EXPECT_NEAR(profile_score(p), 1.0 / 3.0, 1e-15);
}

TEST(Params, Validation) {
  SimParams p;
  p.weights = {0.5, 0.5, 0.5, 0.0};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SimParams{};
  p.thresholds = {0.5, 0.25, 0.75};
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(SimParams{}.validate());
}

TEST(Path, DegeneratePathRejected) {
  EXPECT_THROW(path_from_waypoints({{0, 0, 0}, {1, 0, 0}}, false), std::invalid_argument);
  SimParams params;
  params.track.waypoints.resize(2);
  EXPECT_THROW(generate_session(Game::kRace, 1, {}, {}, params), std::invalid_argument);
}

TEST(Path, BuilderCurvature) {
  const Path p = PathBuilder(1.0).straight(10).arc(20.0, 90).build(false);
  bool saw_straight = false, saw_curve = false;
  for (double k : p.curvature) {
    if (std::abs(k) < 1e-12) saw_straight = true;
    if (std::abs(std::abs(k) - 1.0 / 20.0) < 1e-6) saw_curve = true;
  }
  EXPECT_TRUE(saw_straight);
  EXPECT_TRUE(saw_curve);
  EXPECT_NEAR(p.length(), 10.0 + 20.0 * M_PI / 2.0, 0.5);
}

TEST(Generate, SameSeedIsByteIdentical) {
  SimParams params;
  const auto a = generate_session(Game::kRace, 42, {}, default_config(Game::kRace), params);
  const auto b = generate_session(Game::kRace, 42, {}, default_config(Game::kRace), params);
  EXPECT_EQ(session_to_json(a.session), session_to_json(b.session));
  EXPECT_EQ(a.trace.risk, b.trace.risk);
  const auto c = generate_session(Game::kRace, 43, {}, default_config(Game::kRace), params);
  EXPECT_NE(session_to_json(a.session), session_to_json(c.session));
}

TEST(Generate, SessionsAreValidAndFirstFrameReported) {
  for (auto game : {Game::kRace, Game::kFlight}) {
    const auto g = generate_session(game, 5, {}, default_config(game), SimParams{});
    EXPECT_TRUE(validate_session(g.session).ok());
    EXPECT_TRUE(g.session.frames.front().reported_discomfort.has_value());
    EXPECT_EQ(g.trace.level.size(), g.session.frames.size());
  }
}

TEST(Generate, TimeOnlyRiskGivesNonDecreasingReports) {
  SimParams params;
  params.weights = {1.0, 0.0, 0.0, 0.0};
  params.report_prob = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = generate_session(Game::kRace, seed, {}, {}, params);
    int last = 0;
    for (const auto& f : g.session.frames) {
      ASSERT_TRUE(f.reported_discomfort.has_value());
      const int level = static_cast<int>(*f.reported_discomfort);
      EXPECT_GE(level, last);
      last = level;
    }
    EXPECT_GT(last, 0);
  }
}

TEST(Generate, StraightTrackWithRotationOnlyWeightsStaysAtNone) {
  SimParams params;
  params.track = PathBuilder(2.0).straight(2000.0).build(false);
  params.weights = {0.0, 1.0, 0.0, 0.0};
  params.report_prob = 1.0;
  const auto g = generate_session(Game::kRace, 3, {}, {}, params);
  for (const auto level : g.trace.level) EXPECT_EQ(level, DiscomfortLevel::kNone);
}

TEST(Corpus, DefaultSizesMatchTargets) {
  const Corpus c = generate_corpus({}, 7);
  ASSERT_EQ(c.sessions.size(), 47u);
  ASSERT_EQ(c.traces.size(), 47u);
  const auto a = build_dataset(c.sessions, Scenario::kA, LabelScheme::kBinary);
  EXPECT_GE(a.rows.size(), 3913u);
  EXPECT_LE(a.rows.size(), 4073u);
  EXPECT_EQ(a.rows.size(), 3993u);
  const auto all = build_dataset(c.sessions, Scenario::kC, LabelScheme::kBinary);
  EXPECT_NEAR(static_cast<double>(all.rows.size()), 9390.0, 9390.0 * 0.02);
  EXPECT_EQ(class_distribution(a).counts[0] + class_distribution(a).counts[1], 3993u);
}

TEST(Corpus, EveryQuarterlyClassCoversTenFolds) {
  const Corpus c = generate_corpus({}, 7);
  for (auto sc : kAllScenarios) {
    const auto d = build_dataset(c.sessions, sc, LabelScheme::kQuarterly);
    for (auto n : class_distribution(d).counts) EXPECT_GE(n, 10u) << to_string(sc);
  }
}

TEST(Corpus, SameSeedIdenticalDifferentSeedDiffers) {
  const Corpus a = generate_corpus({3, 2, 300, 200}, 11);
  const Corpus b = generate_corpus({3, 2, 300, 200}, 11);
  EXPECT_EQ(a.sessions, b.sessions);
  const Corpus c = generate_corpus({3, 2, 300, 200}, 12);
  EXPECT_NE(a.sessions, c.sessions);
}

TEST(Corpus, TraceCsvShape) {
  const Corpus c = generate_corpus({1, 1, 10, 10}, 1);
  std::ostringstream out;
  write_trace_csv(out, c.sessions, c.traces);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "session_id,timestamp,risk,latent_level");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 20u);
}

}  // namespace
}  // namespace cstk
