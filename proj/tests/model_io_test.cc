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

#include "cstk/errors.h"
#include "cstk/model_io.h"
#include "cstk/synth.h"
#include "fixtures.h"

namespace cstk {
namespace {

const Dataset& small_race() {
  static const Dataset d = [] {
    const Corpus c = generate_corpus({4, 0, 600, 0}, 9);
    return build_dataset(c.sessions, Scenario::kA, LabelScheme::kBinary);
  }();
  return d;
}

SavedModel train_saved(const std::string& learner, bool with_ranking) {
  LearnerSpec spec = parse_learner(learner);
  spec.config.n_trees = 7;
  SavedModel saved{spec, train_learner(spec, small_race(), 3), std::nullopt};
  if (with_ranking) saved.ranking = rank_attributes(default_ranking_learner(), small_race(), 3);
  return saved;
}

TEST(ModelIo, RoundTripIsByteStable) {
  for (const char* name : {"stump", "tree", "reptree", "forest"}) {
    const SavedModel saved = train_saved(name, std::string(name) == "forest");
    const std::string text = save_model_string(saved);
    std::istringstream in(text);
    const SavedModel back = load_model(in);
    EXPECT_EQ(back, saved) << name;
    EXPECT_EQ(save_model_string(back), text) << name;
  }
}

TEST(ModelIo, PredictionsSurviveRoundTrip) {
  const SavedModel saved = train_saved("forest", false);
  std::istringstream in(save_model_string(saved));
  const SavedModel back = load_model(in);
  for (const auto& row : small_race().rows) {
    EXPECT_EQ(predict_distribution(back.model, row.values), predict_distribution(saved.model, row.values));
  }
}

TEST(ModelIo, GoldenStumpFile) {
  // A stump on one separating attribute, frozen byte-for-byte.
  Dataset d;
  for (int i = 0; i < 6; ++i) {
    FeatureVector fv;
    fv.values.assign(kNumAttributes, 0.0);
    fv.values[17] = i;
    fv.label = i >= 3 ? 1 : 0;
    d.rows.push_back(fv);
  }
  const LearnerSpec spec = parse_learner("stump");
  const SavedModel saved{spec, train_learner(spec, d, 0), std::nullopt};
  std::ifstream golden(testing::data_path("model_stump.txt"), std::ios::binary);
  std::ostringstream expected;
  expected << golden.rdbuf();
  EXPECT_EQ(save_model_string(saved), expected.str());
}

TEST(ModelIo, ErrorsCarryLineNumbers) {
  std::string text = save_model_string(train_saved("tree", false));
  {
    std::istringstream in("cstk-model 2\n");
    EXPECT_THROW(load_model(in), ParseError);
  }
  {
    std::string bad = text;
    bad.replace(bad.find("registry_checksum"), 17, "registry_checksux");
    std::istringstream in(bad);
    try {
      load_model(in);
      FAIL();
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 3u) << e.what();
    }
  }
  {
    std::istringstream in(text.substr(0, text.size() / 2));
    EXPECT_THROW(load_model(in), ParseError);
  }
}

TEST(ModelIo, MissingFile) {
  EXPECT_THROW(load_model_file("/nonexistent/model.txt"), std::runtime_error);
}

}  // namespace
}  // namespace cstk
