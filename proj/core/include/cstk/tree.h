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

#ifndef CSTK_TREE_H_
#define CSTK_TREE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cstk/attributes.h"
#include "cstk/dataset.h"

namespace cstk {

enum class SplitCriterion { kGini, kInfoGain };

std::string_view to_string(SplitCriterion criterion);
SplitCriterion parse_criterion(std::string_view text);

struct TrainConfig {
  SplitCriterion criterion = SplitCriterion::kGini;
  int max_depth = 32;
  int min_leaf = 1;
  int n_trees = 100;
  int mtry = 0;  // 0 selects ceil(sqrt(attribute count))
  bool bootstrap = true;
  std::uint64_t seed = 0;
  double prune_fraction = 0.0;  // holdout share for reduced-error pruning
  // Attributes the learner may not split on (leave-one-out ranking).
  std::vector<std::size_t> excluded_attributes;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// Column-major numeric view of a dataset used during training.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(const Dataset& dataset);

  std::size_t rows() const { return labels_.size(); }
  std::size_t attributes() const { return num_attributes_; }
  std::size_t num_classes() const { return num_classes_; }
  LabelScheme scheme() const { return scheme_; }
  std::uint64_t checksum() const { return checksum_; }

  double value(std::size_t row, std::size_t attribute) const {
    return values_[attribute * labels_.size() + row];
  }
  std::span<const double> column(std::size_t attribute) const {
    return {values_.data() + attribute * labels_.size(), labels_.size()};
  }
  int label(std::size_t row) const { return labels_[row]; }
  std::span<const int> labels() const { return labels_; }

 private:
  std::vector<double> values_;
  std::vector<int> labels_;
  std::size_t num_attributes_ = 0;
  std::size_t num_classes_ = 0;
  LabelScheme scheme_ = LabelScheme::kBinary;
  std::uint64_t checksum_ = 0;
};

// Internal nodes route `value <= threshold` left. Leaves carry the training
// class counts that reached them; internal nodes have empty class_counts.
struct TreeNode {
  int attribute = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint32_t> class_counts;

  bool is_leaf() const { return attribute < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // pre-order, root first
  LabelScheme scheme = LabelScheme::kBinary;
  std::uint64_t registry_checksum = 0;
  std::size_t num_attributes = kNumAttributes;
  bool degenerate = false;  // trained on single-class data

  int depth() const;
  std::size_t leaf_count() const;
  bool operator==(const TreeModel&) const = default;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  int mtry = 0;
  std::uint64_t seed = 0;
  LabelScheme scheme = LabelScheme::kBinary;

  bool operator==(const ForestModel&) const = default;
};

using Model = std::variant<TreeModel, ForestModel>;

// ---------------------------------------------------------------------------
// Split criteria.

// 1 - sum p_c^2. Throws std::invalid_argument when the counts sum to zero.
double gini_impurity(std::span<const std::uint32_t> counts);
// Shannon entropy in bits. Throws std::invalid_argument on zero total.
double entropy(std::span<const std::uint32_t> counts);
// H(parent) - weighted child entropies. Throws std::invalid_argument if a
// child is empty or the children do not sum to the parent.
double info_gain(std::span<const std::uint32_t> parent,
                 std::span<const std::uint32_t> left,
                 std::span<const std::uint32_t> right);

struct Split {
  std::size_t attribute = 0;
  double threshold = 0.0;
  double score = 0.0;  // impurity decrease
};

// Best threshold split of `rows` over `candidates`: thresholds are midpoints
// between consecutive distinct values; returns nullopt when no split gives a
// strict impurity decrease with both children holding >= min_leaf rows.
// Ties go to the lower attribute index, then the lower threshold.
std::optional<Split> best_split(const FeatureMatrix& data,
                                std::span<const std::uint32_t> rows,
                                std::span<const std::size_t> candidates,
                                SplitCriterion criterion, int min_leaf = 1);

// ---------------------------------------------------------------------------
// Learners. Each throws std::invalid_argument on an empty dataset or an
// invalid config.

// Depth-1 tree over every attribute.
TreeModel train_stump(const Dataset& dataset, const TrainConfig& config);

// Greedy tree; with prune_fraction > 0 it grows on the remaining share and
// applies bottom-up reduced-error pruning against the held-out share.
TreeModel train_tree(const Dataset& dataset, const TrainConfig& config);
TreeModel train_tree(const FeatureMatrix& data,
                     std::span<const std::uint32_t> rows,
                     const TrainConfig& config);

// Bagged trees with per-node attribute subsampling. Trees are trained on
// independent per-tree seeds; the result does not depend on thread count.
ForestModel train_forest(const Dataset& dataset, const TrainConfig& config);
ForestModel train_forest(const FeatureMatrix& data,
                         std::span<const std::uint32_t> rows,
                         const TrainConfig& config);

// ---------------------------------------------------------------------------
// Prediction. The span overloads check only the value count; the Dataset
// overloads also check the schema checksum and throw SchemaMismatch.

std::vector<double> predict_distribution(const TreeModel& model,
                                         std::span<const double> values);
std::vector<double> predict_distribution(const ForestModel& model,
                                         std::span<const double> values);
std::vector<double> predict_distribution(const Model& model,
                                         std::span<const double> values);

// Tree: argmax of the leaf distribution. Forest: majority vote of the
// trees. Ties go to the lower class index.
int predict_label(const TreeModel& model, std::span<const double> values);
int predict_label(const ForestModel& model, std::span<const double> values);
int predict_label(const Model& model, std::span<const double> values);

std::vector<int> predict_labels(const Model& model, const Dataset& dataset);

LabelScheme model_scheme(const Model& model);
std::uint64_t model_checksum(const Model& model);
std::size_t model_attribute_count(const Model& model);

// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> values);

}  // namespace cstk

#endif  // CSTK_TREE_H_
