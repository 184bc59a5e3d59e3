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

#include <fstream>
#include <sstream>

#include "cstk/advisor.h"
#include "cstk/errors.h"
#include "fixtures.h"

namespace cstk {
namespace {

using S = Strategy;
using C = Cause;

AttributeRanking ranking_of(std::vector<std::string> names) {
  AttributeRanking r;
  r.learner = "tree";
  r.baseline_accuracy = 0.9;
  double impact = 0.1;
  for (auto& n : names) {
    r.entries.push_back({n, 0.9 - impact, impact});
    impact /= 2;
  }
  return r;
}

TEST(Matrix, RowTranscription) {
  // One line per strategy row: the causes (1..10) it addresses.
  const std::vector<std::pair<S, std::vector<int>>> rows = {
      {S::kTeleporting, {1}},
      {S::kTunneling, {1}},
      {S::kMotionWalk, {1}},
      {S::kHapticFeedback, {2}},
      {S::kAccelerationChanges, {2}},
      {S::kHeadlock, {5}},
      {S::kHolosphere, {1}},
      {S::kTrajectoryVisualization, {1}},
      {S::kRotationalBlur, {1, 9}},
      {S::kDoFSimulation, {4}},
      {S::kLatencyCameraWarping, {7}},
      {S::kCabinStaticFrame, {8}},
      {S::kSlowmotion, {2, 9}},
      {S::kDynamicFoV, {3}},
      {S::kDynamicVignetting, {1, 3}},
      {S::kAmplifiedMovements, {9}},
      {S::kBlur, {1, 2, 3, 4, 9}},
      {S::kInterval, {6}},
      {S::kPhysiologicalSignalsObservation, {10}},
  };
  ASSERT_EQ(rows.size(), kNumStrategies);
  const auto& m = builtin_matrix();
  std::size_t cells = 0;
  for (const auto& [strategy, causes] : rows) {
    for (int id = 1; id <= 10; ++id) {
      const bool expected = std::find(causes.begin(), causes.end(), id) != causes.end();
      EXPECT_EQ(m.cell(strategy, cause_from_id(id)), expected)
          << to_string(strategy) << " x " << id;
      cells += expected;
    }
  }
  EXPECT_EQ(cells, 26u);
  EXPECT_EQ(m.true_cells(), 26u);
}

TEST(Matrix, NamedCells) {
  const auto& m = builtin_matrix();
  EXPECT_TRUE(m.cell(S::kBlur, C::kCameraRotation));
  EXPECT_TRUE(m.cell(S::kInterval, C::kExposure));
  for (auto c : all_causes()) {
    if (c != C::kExposure) EXPECT_FALSE(m.cell(S::kInterval, c));
  }
}

TEST(Matrix, StrategiesForColumns) {
  EXPECT_EQ(strategies_for(C::kLocomotion),
            (std::vector<S>{S::kTeleporting, S::kTunneling, S::kMotionWalk, S::kHolosphere,
                            S::kTrajectoryVisualization, S::kRotationalBlur, S::kDynamicVignetting,
                            S::kBlur}));
  EXPECT_EQ(strategies_for(C::kDepthOfField), (std::vector<S>{S::kDoFSimulation, S::kBlur}));
  EXPECT_EQ(strategies_for(C::kPosturalInstability),
            (std::vector<S>{S::kPhysiologicalSignalsObservation}));
  for (auto c : all_causes()) EXPECT_FALSE(strategies_for(c).empty()) << to_string(c);
}

TEST(Matrix, CsvExportShape) {
  const std::string csv = matrix_to_csv(builtin_matrix());
  std::istringstream in(csv);
  std::string line;
  std::size_t lines = 0, ones = 0;
  while (std::getline(in, line)) {
    ++lines;
    ones += std::count(line.begin(), line.end(), '1');
  }
  EXPECT_EQ(lines, 20u);
  EXPECT_EQ(ones, 26u);
}

TEST(Names, RoundTrip) {
  for (auto c : all_causes()) {
    EXPECT_EQ(parse_cause(to_string(c)), c);
    EXPECT_EQ(cause_from_id(cause_id(c)), c);
  }
  for (auto s : all_strategies()) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_cause("Vertigo"), LookupError);
  EXPECT_THROW(cause_from_id(11), std::invalid_argument);
}

TEST(Mapping, DefaultTable) {
  const auto m = CauseMapping::defaults();
  EXPECT_EQ(m.cause_of("timestamp"), C::kExposure);
  EXPECT_EQ(m.cause_of("speed"), C::kLocomotion);
  EXPECT_EQ(m.cause_of("position_y"), C::kLocomotion);
  EXPECT_EQ(m.cause_of("acceleration"), C::kAcceleration);
  EXPECT_EQ(m.cause_of("rotation_z"), C::kCameraRotation);
  EXPECT_EQ(m.cause_of("fov_size"), C::kFieldOfView);
  EXPECT_EQ(m.cause_of("frame_rate"), C::kLatency);
  EXPECT_EQ(m.cause_of("dof_simulation"), C::kDepthOfField);
  EXPECT_EQ(m.cause_of("static_rest_frame"), C::kStaticRestFrame);
  EXPECT_EQ(m.cause_of("camera_control_level"), C::kDegreeOfControl);
  EXPECT_EQ(m.cause_of("auto_camera"), C::kDegreeOfControl);
  EXPECT_EQ(m.cause_of("posture"), C::kPosturalInstability);
  EXPECT_FALSE(m.cause_of("age").has_value());
  EXPECT_FALSE(m.cause_of("vrsq_dizziness").has_value());
}

TEST(Mapping, DefaultConfigMatchesGolden) {
  std::ifstream golden(testing::data_path("mapping_default.cfg"), std::ios::binary);
  std::ostringstream expected;
  expected << golden.rdbuf();
  EXPECT_EQ(CauseMapping::defaults().to_config(), expected.str());
  EXPECT_EQ(CauseMapping::parse_file(testing::data_path("mapping_default.cfg")), CauseMapping::defaults());
}

TEST(Mapping, ConfigRoundTripAndErrors) {
  const auto m = CauseMapping::defaults();
  std::istringstream in(m.to_config());
  EXPECT_EQ(CauseMapping::parse(in), m);

  std::istringstream custom("# test\ntimestamp = Latency\nage=none\n");
  const auto c = CauseMapping::parse(custom);
  EXPECT_EQ(c.cause_of("timestamp"), C::kLatency);
  EXPECT_FALSE(c.cause_of("speed").has_value());

  std::istringstream dup("timestamp = Latency\ntimestamp = Exposure\n");
  EXPECT_THROW(CauseMapping::parse(dup), ParseError);
  std::istringstream unknown("warp_factor = Latency\n");
  EXPECT_THROW(CauseMapping::parse(unknown), ParseError);
  std::istringstream bad_cause("speed = Vertigo\n");
  try {
    CauseMapping::parse(bad_cause);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Infer, TimestampLedRankingStartsWithExposure) {
  const auto r = infer_causes(ranking_of({"timestamp", "age", "speed"}), {}, 3);
  ASSERT_FALSE(r.causes.empty());
  EXPECT_EQ(r.causes[0].cause, C::kExposure);
  EXPECT_EQ(r.causes[0].evidence[0].attribute, "timestamp");
}

TEST(Infer, RotationThenAcceleration) {
  const auto r = infer_causes(ranking_of({"rotation_z", "acceleration", "rotation_x"}), {}, 3);
  ASSERT_EQ(r.causes.size(), 2u);
  EXPECT_EQ(r.causes[0].cause, C::kCameraRotation);
  EXPECT_EQ(r.causes[1].cause, C::kAcceleration);
  EXPECT_EQ(r.causes[0].evidence.size(), 2u);  // rotation_z and rotation_x
}

TEST(Infer, ProfileOnlyTopKeepsEvidence) {
  const auto r = infer_causes(ranking_of({"gender", "age", "wears_glasses", "timestamp"}), {}, 3);
  EXPECT_TRUE(r.causes.empty());
  EXPECT_EQ(r.unmapped.size(), 3u);
}

TEST(Infer, TopNClampedWithWarningAndZeroRejected) {
  const auto r = infer_causes(ranking_of({"speed", "fov_size"}), {}, 50);
  EXPECT_EQ(r.causes.size(), 2u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_THROW(infer_causes(ranking_of({"speed"}), {}, 0), std::invalid_argument);
}

TEST(Infer, FrameStatisticsAppearInNotes) {
  const auto session = testing::make_session("s", Game::kRace, 4);
  const FrameStats stats = frame_statistics(session);
  EXPECT_DOUBLE_EQ(stats.at("timestamp").mean, 2.5);
  EXPECT_DOUBLE_EQ(stats.at("timestamp").max, 4.0);
  const auto r = infer_causes(ranking_of({"timestamp"}), stats, 1);
  EXPECT_NE(r.causes[0].evidence[0].note.find("mean 2.5"), std::string::npos)
      << r.causes[0].evidence[0].note;
}

TEST(Advise, BelowThresholdGivesNothing) {
  std::vector<CauseEvidence> causes{{C::kExposure, {{"timestamp", ""}}}};
  EXPECT_TRUE(advise(std::vector<double>{0.9, 0.1}, causes).empty());
}

TEST(Advise, ExposureSuggestsInterval) {
  std::vector<CauseEvidence> causes{{C::kExposure, {{"timestamp", "rank 1"}}}};
  const auto s = advise(std::vector<double>{0.2, 0.8}, causes);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].cause, C::kExposure);
  EXPECT_EQ(s[0].strategies, (std::vector<S>{S::kInterval}));
  EXPECT_EQ(s[0].evidence[0].attribute, "timestamp");
}

TEST(Advise, QuarterlyCameraRotation) {
  std::vector<CauseEvidence> causes{{C::kCameraRotation, {{"rotation_z", ""}}}};
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  EXPECT_NEAR(discomfort_probability(p), 0.9, 1e-12);
  const auto s = advise(p, causes);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].strategies,
            (std::vector<S>{S::kRotationalBlur, S::kSlowmotion, S::kAmplifiedMovements, S::kBlur}));
}

TEST(Advise, RejectsInvalidDistributions) {
  EXPECT_THROW(discomfort_probability(std::vector<double>{0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(discomfort_probability(std::vector<double>{1.0, 0.0, 0.0}), std::invalid_argument);
}

}  // namespace
}  // namespace cstk
