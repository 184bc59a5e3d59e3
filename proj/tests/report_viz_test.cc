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
#include <iterator>
#include <regex>
#include <sstream>

#include "cstk/heat.h"
#include "cstk/session_io.h"
#include "cstk/synth.h"
#include "cstk/tables.h"
#include "fixtures.h"

namespace cstk {
namespace {

using testing::make_session;

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<const HeatCell*> nonzero(const HeatGrid& g) {
  std::vector<const HeatCell*> out;
  for (std::size_t iz = 0; iz < g.nz(); ++iz) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      if (g.cell(ix, iz).total() > 0) out.push_back(&g.cell(ix, iz));
    }
  }
  return out;
}

TEST(Heat, SingleSevereFrame) {
  const std::vector s{make_session("one", Game::kRace, 1, {{0, 3}})};
  const auto g = aggregate_track_heat(s, 8, 8);
  const auto cells = nonzero(g);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_DOUBLE_EQ(cells[0]->mean(), 3.0);
}

TEST(Heat, MeanOfTwoFramesInOneCell) {
  HeatGrid g({0, 0, 10, 10}, 2, 2);
  g.add(1.0, 1.0, DiscomfortLevel::kNone);
  g.add(2.0, 2.0, DiscomfortLevel::kModerate);
  EXPECT_DOUBLE_EQ(g.cell(0, 0).mean(), 1.0);
  EXPECT_EQ(g.total(), 2u);
}

TEST(Heat, LocateClampsToEdges) {
  HeatGrid g({0, 0, 10, 10}, 4, 4);
  EXPECT_EQ(g.locate(10.0, 10.0), std::make_pair(std::size_t{3}, std::size_t{3}));
  EXPECT_EQ(g.locate(-5.0, 0.0), std::make_pair(std::size_t{0}, std::size_t{0}));
  EXPECT_EQ(g.center(0, 0), std::make_pair(1.25, 1.25));
}

TEST(Heat, NoLabeledFramesIsAnError) {
  const std::vector s{make_session("silent", Game::kRace, 3, {})};
  EXPECT_THROW(aggregate_track_heat(s), std::invalid_argument);
}

TEST(Heat, CarryForwardLabelsAreUsed) {
  const std::vector s{make_session("cf", Game::kRace, 3, {{1, 2}})};
  const auto g = aggregate_track_heat(s, 1, 1);
  EXPECT_EQ(g.cell(0, 0).counts, (std::array<std::uint64_t, 4>{1, 0, 2, 0}));
}

TEST(Facet, GenderPartitionsTheGrid) {
  const Corpus c = generate_corpus({12, 0, 1200, 0}, 4);
  const auto all = aggregate_track_heat(c.sessions, 16, 16);
  const auto parts = facet_by(c.sessions, "gender", 16, 16);
  ASSERT_GE(parts.size(), 2u);
  ASSERT_LE(parts.size(), 3u);
  for (std::size_t iz = 0; iz < 16; ++iz) {
    for (std::size_t ix = 0; ix < 16; ++ix) {
      std::array<std::uint64_t, 4> sum{};
      for (const auto& [key, g] : parts) {
        EXPECT_EQ(g.bounds(), all.bounds());
        for (int l = 0; l < 4; ++l) sum[l] += g.cell(ix, iz).counts[l];
      }
      EXPECT_EQ(sum, all.cell(ix, iz).counts);
    }
  }
}

TEST(Facet, AllSittingGivesOneGrid) {
  auto s = std::vector{make_session("a", Game::kRace, 3), make_session("b", Game::kRace, 3)};
  const auto parts = facet_by(s, "posture", 4, 4);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts.begin()->first, "sitting");
  EXPECT_THROW(facet_by(s, "speed", 4, 4), std::invalid_argument);
}

TEST(Facet, SevenFemaleEightMaleSizedSplit) {
  // 7 female sessions totalling 1772 frames and 8 male sessions totalling 2221.
  std::vector<SessionRecord> sessions;
  const auto add = [&](Gender g, std::size_t count, std::size_t rows, std::uint64_t salt) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t frames = rows / count + (i < rows % count ? 1 : 0);
      SimParams p;
      p.frame_interval_s = p.duration_s / static_cast<double>(frames);
      UserProfile profile;
      profile.gender = g;
      auto gen = generate_session(Game::kRace, mix_seed(salt, i), profile, default_config(Game::kRace), p);
      ASSERT_EQ(gen.session.frames.size(), frames);
      sessions.push_back(std::move(gen.session));
    }
  };
  add(Gender::kFemale, 7, 1772, 1);
  add(Gender::kMale, 8, 2221, 2);
  const auto parts = facet_by(sessions, "gender");
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts.at("female").total(), 1772u);
  EXPECT_EQ(parts.at("male").total(), 2221u);
}

TEST(Export, OneCellCsvAndStableOutput) {
  HeatGrid g({0, 0, 4, 4}, 4, 4);
  g.add(1.5, 2.5, DiscomfortLevel::kSlight);
  const std::string csv = export_heat_csv(g);
  EXPECT_EQ(csv,
            "ix,iz,center_x,center_z,count_0,count_1,count_2,count_3,mean\n"
            "1,2,1.5,2.5,0,1,0,0,1\n");
  EXPECT_EQ(export_heat_csv(g), csv);
  EXPECT_EQ(export_heat_svg(g), export_heat_svg(g));
}

TEST(Export, FullTwoByTwoSvgHasFourRects) {
  HeatGrid g({0, 0, 2, 2}, 2, 2);
  g.add(0.5, 0.5, DiscomfortLevel::kNone);
  g.add(1.5, 0.5, DiscomfortLevel::kSlight);
  g.add(0.5, 1.5, DiscomfortLevel::kModerate);
  g.add(1.5, 1.5, DiscomfortLevel::kSevere);
  const std::string svg = export_heat_svg(g);
  EXPECT_EQ(count_of(svg, "<rect"), 4u);
  EXPECT_NE(svg.find("#1a9850"), std::string::npos);
  EXPECT_NE(svg.find("#d73027"), std::string::npos);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Golden files checked by hand: bounds x [0,20], z [0,5]; the third frame
// clamps into cell (1,1) and the unreported second frame carries level 0.
TEST(Export, GoldenSessionMatchesFiles) {
  const auto sessions = parse_sessions_file(testing::data_path("session_3frames.jsonl"));
  const auto g = aggregate_track_heat(sessions, 2, 2);
  EXPECT_EQ(export_heat_csv(g), slurp(testing::data_path("heat_2x2.csv")));
  EXPECT_EQ(export_heat_svg(g), slurp(testing::data_path("heat_2x2.svg")));
}

TEST(Export, CsvParsesBack) {
  const Corpus c = generate_corpus({3, 0, 300, 0}, 5);
  const auto g = aggregate_track_heat(c.sessions, 12, 10);
  EXPECT_EQ(parse_heat_csv(export_heat_csv(g), g.bounds(), 12, 10), g);
  EXPECT_THROW(parse_heat_csv("ix,iz\n", g.bounds(), 12, 10), std::exception);
}

TEST(Palette, Interpolation) {
  EXPECT_EQ(heat_color(0.0), "#1a9850");
  EXPECT_EQ(heat_color(3.0), "#d73027");
  EXPECT_EQ(heat_color(1.0), "#fee08b");
  EXPECT_EQ(heat_color(5.0), "#d73027");
}

TEST(Tables, Formatting) {
  EXPECT_EQ(format_accuracy(0.9404), "94.0%");
  EXPECT_EQ(format_accuracy(0.62), "62.0%");
  EXPECT_EQ(format_accuracy(1.0), "100.0%");
  EXPECT_EQ(format_kappa(0.8805), "0.8805");
  EXPECT_EQ(format_kappa(-0.05), "-0.0500");
}

ExperimentGrid filled_grid(std::vector<std::string> learners) {
  ExperimentGrid grid;
  grid.k = 10;
  grid.learners = learners;
  double acc = 0.5;
  for (auto sc : kAllScenarios) {
    for (auto scheme : kAllSchemes) {
      for (const auto& l : learners) {
        EvalReport r;
        r.learner = l;
        r.scenario = sc;
        r.scheme = scheme;
        r.accuracy = (acc += 0.01);
        r.kappa = acc - 0.1;
        grid.reports.push_back(r);
      }
    }
  }
  return grid;
}

TEST(Tables, FourLearnersFourRowsPerTable) {
  const auto grid = filled_grid({"stump", "tree", "reptree", "forest"});
  const std::string table = emit_grid_table(grid, LabelScheme::kBinary);
  std::istringstream in(table);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    for (const char* l : {"stump ", "tree ", "reptree ", "forest "}) rows += line.rfind(l, 0) == 0;
  }
  EXPECT_EQ(rows, 4u);
  EXPECT_NE(table.find("Scenario C"), std::string::npos);
  EXPECT_EQ(count_of(emit_grid_tables(grid), "%"), 24u);
}

TEST(Tables, IncompleteGridListsMissingCells) {
  auto grid = filled_grid({"tree"});
  grid.reports.pop_back();
  try {
    emit_grid_table(grid, LabelScheme::kBinary);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("tree"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("C"), std::string::npos) << e.what();
  }
}

TEST(Tables, RankingTable) {
  AttributeRanking r;
  r.learner = "tree";
  r.baseline_accuracy = 0.9;
  r.entries = {{"timestamp", 0.8, 0.1}, {"age", 0.9, 0.0}};
  const auto t = emit_ranking_table(r);
  EXPECT_NE(t.find("   1  timestamp"), std::string::npos) << t;
  EXPECT_NE(t.find("0.1000"), std::string::npos);
}

}  // namespace
}  // namespace cstk
