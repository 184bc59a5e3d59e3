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
#include <numeric>

#include "cstk/errors.h"
#include "cstk/random.h"
#include "cstk/tree.h"

namespace cstk {
namespace {

// Rows with 34 zero-valued attributes; `fill` sets the informative ones.
template <typename Fill>
Dataset synthetic(std::size_t n, LabelScheme scheme, Fill fill) {
  Dataset d;
  d.scheme = scheme;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector fv;
    fv.values.assign(kNumAttributes, 0.0);
    fv.label = fill(i, fv.values);
    fv.session_id = "s";
    fv.frame_timestamp = static_cast<double>(i);
    d.rows.push_back(std::move(fv));
  }
  return d;
}

double training_accuracy(const Model& model, const Dataset& d) {
  const auto labels = predict_labels(model, d);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hit += labels[i] == d.rows[i].label;
  return static_cast<double>(hit) / static_cast<double>(labels.size());
}

TEST(Impurity, GiniValues) {
  EXPECT_DOUBLE_EQ(gini_impurity(std::vector<std::uint32_t>{10, 10}), 0.5);
  EXPECT_DOUBLE_EQ(gini_impurity(std::vector<std::uint32_t>{7, 0}), 0.0);
  EXPECT_NEAR(gini_impurity(std::vector<std::uint32_t>{7, 3}), 0.42, 1e-15);
  EXPECT_THROW(gini_impurity(std::vector<std::uint32_t>{0, 0}), std::invalid_argument);
}

TEST(Impurity, InfoGainSimpleCases) {
  const std::vector<std::uint32_t> p{5, 5};
  EXPECT_DOUBLE_EQ(info_gain(p, std::vector<std::uint32_t>{5, 0}, std::vector<std::uint32_t>{0, 5}), 1.0);
  EXPECT_NEAR(info_gain(p, std::vector<std::uint32_t>{3, 3}, std::vector<std::uint32_t>{2, 2}), 0.0, 1e-15);
  EXPECT_THROW(info_gain(p, std::vector<std::uint32_t>{0, 0}, p), std::invalid_argument);
}

TEST(Impurity, InfoGainAgainstBruteForceEntropy) {
  // Independent evaluation: sum of -p log2 p over the raw counts.
  const auto h = [](std::initializer_list<double> c) {
    double n = 0, s = 0;
    for (double x : c) n += x;
    for (double x : c) {
      if (x > 0) s -= x / n * std::log2(x / n);
    }
    return s;
  };
  const double oracle = h({8, 4}) - (7.0 / 12.0 * h({6, 1}) + 5.0 / 12.0 * h({2, 3}));
  EXPECT_NEAR(oracle, 0.16859063219201986, 1e-15);
  const double got = info_gain(std::vector<std::uint32_t>{8, 4}, std::vector<std::uint32_t>{6, 1},
                               std::vector<std::uint32_t>{2, 3});
  EXPECT_NEAR(got, 0.16859063219201986, 1e-12);
  EXPECT_NEAR(entropy(std::vector<std::uint32_t>{8, 4}), h({8, 4}), 1e-15);
}

TEST(BestSplit, MidpointThreshold) {
  const double v[] = {1, 2, 3, 4};
  const int l[] = {0, 0, 1, 1};
  const auto d = synthetic(4, LabelScheme::kBinary, [&](std::size_t i, std::vector<double>& x) {
    x[0] = v[i];
    return l[i];
  });
  const FeatureMatrix m(d);
  const std::vector<std::uint32_t> rows{0, 1, 2, 3};
  const std::vector<std::size_t> cand{0};
  const auto split = best_split(m, rows, cand, SplitCriterion::kGini);
  ASSERT_TRUE(split.has_value());
  EXPECT_EQ(split->attribute, 0u);
  EXPECT_DOUBLE_EQ(split->threshold, 2.5);
  EXPECT_DOUBLE_EQ(split->score, 0.5);
}

TEST(BestSplit, NoneForPureOrConstant) {
  const auto pure = synthetic(6, LabelScheme::kBinary, [](std::size_t i, std::vector<double>& x) {
    x[0] = static_cast<double>(i);
    return 1;
  });
  const std::vector<std::uint32_t> rows{0, 1, 2, 3, 4, 5};
  const std::vector<std::size_t> cand{0};
  EXPECT_FALSE(best_split(FeatureMatrix(pure), rows, cand, SplitCriterion::kGini));
  const auto flat = synthetic(6, LabelScheme::kBinary, [](std::size_t i, std::vector<double>& x) {
    x[0] = 3.0;
    return static_cast<int>(i % 2);
  });
  EXPECT_FALSE(best_split(FeatureMatrix(flat), rows, cand, SplitCriterion::kInfoGain));
}

TEST(BestSplit, TieGoesToLowerAttribute) {
  const auto d = synthetic(4, LabelScheme::kBinary, [](std::size_t i, std::vector<double>& x) {
    x[3] = x[7] = static_cast<double>(i);
    return i < 2 ? 0 : 1;
  });
  const std::vector<std::uint32_t> rows{0, 1, 2, 3};
  const std::vector<std::size_t> cand{7, 3};
  const auto split = best_split(FeatureMatrix(d), rows, cand, SplitCriterion::kGini);
  ASSERT_TRUE(split);
  EXPECT_EQ(split->attribute, 3u);
}

TEST(Stump, XorGivesMajorityBaseline) {
  const auto d = synthetic(400, LabelScheme::kBinary, [](std::size_t i, std::vector<double>& x) {
    const int a = static_cast<int>(i % 2), b = static_cast<int>((i / 2) % 2);
    x[0] = a;
    x[1] = b;
    return a ^ b;
  });
  TrainConfig c;
  c.max_depth = 1;
  const TreeModel stump = train_stump(d, c);
  EXPECT_NEAR(training_accuracy(stump, d), 0.5, 1e-12);
}

TEST(Stump, SeparableOnOneAttribute) {
  const auto d = synthetic(50, LabelScheme::kBinary, [](std::size_t i, std::vector<double>& x) {
    x[5] = static_cast<double>(i);
    return i >= 20 ? 1 : 0;
  });
  const TreeModel stump = train_stump(d, {});
  EXPECT_EQ(stump.depth(), 1);
  EXPECT_DOUBLE_EQ(training_accuracy(stump, d), 1.0);
  EXPECT_EQ(stump.nodes[0].attribute, 5);
  EXPECT_DOUBLE_EQ(stump.nodes[0].threshold, 19.5);
}

TEST(Stump, OneClassIsDegenerateLeaf) {
  const auto d = synthetic(10, LabelScheme::kQuarterly, [](std::size_t i, std::vector<double>& x) {
    x[0] = static_cast<double>(i);
    return 2;
  });
  const TreeModel m = train_stump(d, {});
  EXPECT_TRUE(m.degenerate);
  ASSERT_EQ(m.nodes.size(), 1u);
  EXPECT_EQ(predict_label(m, d.rows[0].values), 2);
}

Dataset planted_rule(std::size_t n, std::uint64_t seed, double noise) {
  Rng rng(seed);
  return synthetic(n, LabelScheme::kBinary, [&](std::size_t, std::vector<double>& x) {
    x[18] = rng.uniform01();
    x[22] = rng.uniform01();
    int label = (x[18] > 0.6 && x[22] > 0.3) ? 1 : 0;
    if (rng.bernoulli(noise)) label = 1 - label;
    return label;
  });
}

TEST(Tree, PureDatasetSingleLeaf) {
  const auto d = synthetic(8, LabelScheme::kBinary, [](std::size_t i, std::vector<double>& x) {
    x[1] = static_cast<double>(i);
    return 0;
  });
  EXPECT_EQ(train_tree(d, {}).nodes.size(), 1u);
}

TEST(Tree, PlantedTwoAttributeRule) {
  const auto d = planted_rule(500, 1, 0.0);
  const TreeModel t = train_tree(d, {});
  EXPECT_DOUBLE_EQ(training_accuracy(t, d), 1.0);
  EXPECT_LE(t.depth(), 2);
}

TEST(Tree, PruningNeverGrowsTheTree) {
  const auto d = planted_rule(600, 2, 0.3);
  TrainConfig c;
  c.seed = 4;
  const TreeModel full = train_tree(d, c);
  c.prune_fraction = 0.2;
  const TreeModel pruned = train_tree(d, c);
  EXPECT_LE(pruned.nodes.size(), full.nodes.size());
  EXPECT_LT(pruned.nodes.size(), full.nodes.size() / 2);
}

TEST(Tree, StructuralInvariants) {
  const auto d = planted_rule(300, 3, 0.2);
  TrainConfig c;
  c.min_leaf = 5;
  c.max_depth = 6;
  const TreeModel t = train_tree(d, c);
  EXPECT_LE(t.depth(), 6);
  std::size_t leaves = 0, rows = 0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& node = t.nodes[i];
    if (node.is_leaf()) {
      const auto n = std::accumulate(node.class_counts.begin(), node.class_counts.end(), 0u);
      ++leaves;
      rows += n;
      EXPECT_GE(n, 5u);
    } else {
      // Pre-order layout: the left child follows its parent directly.
      EXPECT_EQ(node.left, static_cast<int>(i) + 1);
      EXPECT_GT(node.right, node.left);
      EXPECT_LT(node.right, static_cast<int>(t.nodes.size()));
      EXPECT_TRUE(node.class_counts.empty());
    }
  }
  EXPECT_EQ(leaves, t.leaf_count());
  EXPECT_EQ(rows, 300u);
}

TEST(Forest, SingleFullTreeMatchesTree) {
  const auto d = planted_rule(300, 5, 0.15);
  TrainConfig c;
  c.n_trees = 1;
  c.bootstrap = false;
  c.mtry = 34;
  const ForestModel f = train_forest(d, c);
  const TreeModel t = train_tree(d, c);
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(kNumAttributes, 0.0);
    x[18] = rng.uniform01();
    x[22] = rng.uniform01();
    EXPECT_EQ(predict_label(f, x), predict_label(t, x));
    EXPECT_EQ(predict_distribution(f, x), predict_distribution(t, x));
  }
}

TEST(Forest, DeterministicForSeed) {
  const auto d = planted_rule(300, 6, 0.1);
  TrainConfig c;
  c.n_trees = 15;
  c.seed = 21;
  EXPECT_EQ(train_forest(d, c), train_forest(d, c));
  TrainConfig other = c;
  other.seed = 22;
  EXPECT_NE(train_forest(d, c), train_forest(d, other));
}

TEST(Forest, DistributionsSumToOne) {
  const auto d = planted_rule(300, 7, 0.2);
  TrainConfig c;
  c.n_trees = 25;
  c.seed = 1;
  const ForestModel f = train_forest(d, c);
  for (const auto& row : d.rows) {
    const auto p = predict_distribution(f, row.values);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(Forest, ExcludedAttributeIsNeverUsed) {
  const auto d = planted_rule(300, 8, 0.0);
  TrainConfig c;
  c.n_trees = 10;
  c.excluded_attributes = {18};
  for (const auto& tree : train_forest(d, c).trees) {
    for (const auto& node : tree.nodes) EXPECT_NE(node.attribute, 18);
  }
}

TreeModel leaf(std::vector<std::uint32_t> counts) {
  TreeModel m;
  m.scheme = counts.size() == 2 ? LabelScheme::kBinary : LabelScheme::kQuarterly;
  m.registry_checksum = registry_checksum();
  TreeNode n;
  n.class_counts = std::move(counts);
  m.nodes.push_back(n);
  return m;
}

TEST(Predict, LeafNormalization) {
  const std::vector<double> x(kNumAttributes, 0.0);
  EXPECT_EQ(predict_distribution(leaf({3, 1}), x), (std::vector<double>{0.75, 0.25}));
}

TEST(Predict, TwoTreeTieGoesToClassZero) {
  ForestModel f;
  f.trees = {leaf({4, 0}), leaf({0, 9})};
  const std::vector<double> x(kNumAttributes, 0.0);
  EXPECT_EQ(predict_distribution(f, x), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(predict_label(f, x), 0);
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
}

TEST(Predict, WrongWidthAndSchemaRejected) {
  const std::vector<double> x(33, 0.0);
  EXPECT_THROW(predict_distribution(leaf({1, 1}), x), std::invalid_argument);
  Dataset d = planted_rule(10, 1, 0.0);
  d.schema.back() = "renamed";
  const Model m = leaf({1, 1});
  EXPECT_THROW(predict_labels(m, d), SchemaMismatch);
}

TEST(Config, Validation) {
  TrainConfig c;
  c.max_depth = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.prune_fraction = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(parse_criterion("gini"), SplitCriterion::kGini);
  EXPECT_EQ(parse_criterion(to_string(SplitCriterion::kInfoGain)), SplitCriterion::kInfoGain);
}

}  // namespace
}  // namespace cstk
