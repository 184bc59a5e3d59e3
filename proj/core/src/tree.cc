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

#include "cstk/tree.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "cstk/errors.h"
#include "cstk/random.h"

namespace cstk {
namespace {

// Accepted splits must beat the parent by more than rounding noise.
constexpr double kMinDecrease = 1e-12;

double impurity(std::span<const std::uint32_t> counts, std::uint64_t total,
                SplitCriterion criterion) {
  const double n = static_cast<double>(total);
  double acc = 0.0;
  if (criterion == SplitCriterion::kGini) {
    for (const auto c : counts) {
      const double p = c / n;
      acc += p * p;
    }
    return 1.0 - acc;
  }
  for (const auto c : counts) {
    if (c == 0) continue;
    const double p = c / n;
    acc -= p * std::log2(p);
  }
  return acc;
}

std::uint64_t sum(std::span<const std::uint32_t> counts) {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::size_t majority(std::span<const std::uint32_t> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

struct SortItem {
  double value;
  std::uint32_t label;
};

// Threshold scoring for one node. Attributes may be offered in any order:
// ties still resolve to the lower attribute index, then the lower threshold.
class NodeScorer {
 public:
  NodeScorer(std::size_t num_classes, SplitCriterion criterion, int min_leaf)
      : k_(num_classes), criterion_(criterion), min_leaf_(min_leaf) {}

  // Starts a node from its class counts. Returns false when no split can
  // help (pure or fewer than two rows).
  bool begin(std::vector<std::uint32_t> parent) {
    parent_ = std::move(parent);
    n_ = sum(parent_);
    best_.reset();
    if (n_ < 2) return false;
    parent_impurity_ = impurity(parent_, n_, criterion_);
    return parent_impurity_ > 0.0;
  }

  // Scans the node's rows sorted by `attribute`: value(i) and label(i) give
  // the i-th row in ascending value order.
  template <typename Value, typename Label>
  void scan(std::size_t attribute, Value value, Label label) {
    left_.assign(k_, 0);
    right_.resize(k_);
    const std::size_t n = n_;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left_[label(i)];
      const double lo = value(i);
      const double hi = value(i + 1);
      if (lo == hi) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf_) ||
          n_right < static_cast<std::size_t>(min_leaf_)) {
        continue;
      }
      for (std::size_t c = 0; c < k_; ++c) right_[c] = parent_[c] - left_[c];
      const double weighted =
          (static_cast<double>(n_left) * impurity(left_, n_left, criterion_) +
           static_cast<double>(n_right) * impurity(right_, n_right, criterion_)) /
          static_cast<double>(n);
      const double score = parent_impurity_ - weighted;
      if (score <= kMinDecrease) continue;
      const bool better =
          !best_ || score > best_->score + kMinDecrease ||
          (score >= best_->score - kMinDecrease && attribute < best_->attribute);
      if (better) {
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best_ = Split{attribute, threshold, score};
      }
    }
  }

  const std::optional<Split>& best() const { return best_; }

 private:
  std::size_t k_;
  SplitCriterion criterion_;
  int min_leaf_;
  std::uint64_t n_ = 0;
  double parent_impurity_ = 0.0;
  std::optional<Split> best_;
  std::vector<std::uint32_t> parent_, left_, right_;
};

// Grows one tree over a row sample (duplicates allowed). Each attribute
// keeps the sample sorted by its values; a node is the same index range in
// every order, and splitting partitions each order stably, so no node ever
// sorts.
class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& data, const TrainConfig& config, int mtry,
             Rng* rng)
      : data_(data),
        config_(config),
        mtry_(mtry),
        rng_(rng),
        scorer_(data.num_classes(), config.criterion, config.min_leaf),
        excluded_(data.attributes(), false) {
    for (const auto a : config.excluded_attributes) {
      if (a < excluded_.size()) excluded_[a] = true;
    }
    for (std::size_t a = 0; a < data.attributes(); ++a) {
      if (!excluded_[a]) allowed_.push_back(a);
    }
    pool_.resize(data.attributes());
  }

  // Nodes in pre-order; node_counts receives the training counts of every
  // node (internal ones included) for pruning.
  // `presorted` holds, per attribute, the distinct training rows ordered by
  // value (see presort); every row of `sample` must appear in it.
  std::vector<TreeNode> grow(const std::vector<std::uint32_t>& sample,
                             const std::vector<std::uint32_t>& presorted,
                             std::vector<std::vector<std::uint32_t>>* node_counts) {
    m_ = sample.size();
    const std::size_t attrs = data_.attributes();
    labels_.resize(m_);
    for (std::size_t p = 0; p < m_; ++p) labels_[p] = static_cast<std::uint32_t>(data_.label(sample[p]));
    values_.resize(attrs * m_);
    for (std::size_t a = 0; a < attrs; ++a) {
      const auto column = data_.column(a);
      double* vals = values_.data() + a * m_;
      for (std::size_t p = 0; p < m_; ++p) vals[p] = column[sample[p]];
    }

    // Sample positions grouped by dataset row (counting sort), then each
    // attribute order expands the presorted rows into their positions.
    const std::size_t n_rows = data_.rows();
    first_.assign(n_rows + 1, 0);
    for (const auto r : sample) ++first_[r + 1];
    for (std::size_t r = 0; r < n_rows; ++r) first_[r + 1] += first_[r];
    by_row_.resize(m_);
    fill_.assign(first_.begin(), first_.end() - 1);
    for (std::size_t p = 0; p < m_; ++p) by_row_[fill_[sample[p]]++] = static_cast<std::uint32_t>(p);

    const std::size_t distinct = presorted.size() / attrs;
    order_.resize(attrs * m_);
    for (std::size_t a = 0; a < attrs; ++a) {
      std::uint32_t* ord = order_.data() + a * m_;
      std::size_t out = 0;
      for (std::size_t i = 0; i < distinct; ++i) {
        const auto r = presorted[a * distinct + i];
        for (auto q = first_[r]; q < first_[r + 1]; ++q) ord[out++] = by_row_[q];
      }
    }
    goes_left_.resize(m_);
    scratch_.resize(m_);

    nodes_.clear();
    counts_.clear();
    build(0, m_, 0);
    if (node_counts != nullptr) *node_counts = std::move(counts_);
    return std::move(nodes_);
  }

 private:
  const double* values(std::size_t a) const { return values_.data() + a * m_; }
  std::uint32_t* order(std::size_t a) { return order_.data() + a * m_; }

  bool is_constant(std::size_t a, std::size_t begin, std::size_t end) {
    const std::uint32_t* ord = order(a);
    return values(a)[ord[begin]] == values(a)[ord[end - 1]];
  }

  // Returns false when the attribute is constant over the node.
  bool evaluate(std::size_t a, std::size_t begin, std::size_t end) {
    if (is_constant(a, begin, end)) return false;
    const std::uint32_t* ord = order(a) + begin;
    const double* vals = values(a);
    const std::uint32_t* labels = labels_.data();
    scorer_.scan(
        a, [&](std::size_t i) { return vals[ord[i]]; },
        [&](std::size_t i) { return labels[ord[i]]; });
    return true;
  }

  std::optional<Split> search(std::vector<std::uint32_t> counts, std::size_t begin,
                              std::size_t end) {
    if (!scorer_.begin(std::move(counts))) return std::nullopt;
    if (rng_ == nullptr) {
      for (const auto a : allowed_) evaluate(a, begin, end);
      return scorer_.best();
    }
    // Attributes are drawn one at a time (partial Fisher-Yates over every
    // index) until mtry attributes that vary over the node have been seen and
    // a useful split exists. Withheld attributes take their turn in the draw
    // without being scored, so withholding one that never wins a split
    // leaves the tree unchanged.
    const std::size_t total = pool_.size();
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
    std::size_t varying = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (varying >= static_cast<std::size_t>(mtry_) && scorer_.best()) break;
      const std::size_t j = i + rng_->uniform_int(total - i);
      std::swap(pool_[i], pool_[j]);
      const std::size_t a = pool_[i];
      const bool varies = excluded_[a] ? !is_constant(a, begin, end) : evaluate(a, begin, end);
      if (varies) ++varying;
    }
    return scorer_.best();
  }

  // Stable partition of [begin, end) in every order by goes_left_.
  std::size_t partition(std::size_t begin, std::size_t end) {
    std::size_t n_left = 0;
    for (std::size_t a = 0; a < data_.attributes(); ++a) {
      std::uint32_t* ord = order(a);
      std::size_t l = begin;
      std::size_t r = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint32_t p = ord[i];
        if (goes_left_[p]) {
          ord[l++] = p;
        } else {
          scratch_[r++] = p;
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r), ord + l);
      n_left = l - begin;
    }
    return begin + n_left;
  }

  int build(std::size_t begin, std::size_t end, int depth) {
    const std::size_t k = data_.num_classes();
    std::vector<std::uint32_t> counts(k, 0);
    const std::uint32_t* any_order = order(0);
    for (std::size_t i = begin; i < end; ++i) ++counts[labels_[any_order[i]]];

    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{});
    counts_.push_back(counts);

    const std::size_t n = end - begin;
    std::optional<Split> split;
    if (depth < config_.max_depth && n >= 2 * static_cast<std::size_t>(config_.min_leaf)) {
      split = search(counts, begin, end);
    }
    if (!split) {
      nodes_[index].class_counts = std::move(counts);
      return index;
    }

    const double* vals = values(split->attribute);
    const std::uint32_t* ord = order(0);
    for (std::size_t i = begin; i < end; ++i) {
      goes_left_[ord[i]] = vals[ord[i]] <= split->threshold;
    }
    const std::size_t mid = partition(begin, end);

    nodes_[index].attribute = static_cast<int>(split->attribute);
    nodes_[index].threshold = split->threshold;
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  const FeatureMatrix& data_;
  const TrainConfig& config_;
  int mtry_;
  Rng* rng_;
  NodeScorer scorer_;
  std::vector<bool> excluded_;
  std::vector<std::size_t> allowed_;
  std::vector<std::size_t> pool_;
  std::size_t m_ = 0;
  std::vector<std::uint32_t> labels_;   // by sample position
  std::vector<double> values_;          // attribute-major, by sample position
  std::vector<std::uint32_t> order_;    // attribute-major sorted positions
  std::vector<char> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::uint32_t> first_, fill_, by_row_;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<std::uint32_t>> counts_;
};

// Distinct `rows`, sorted by value, for every attribute (attribute-major).
std::vector<std::uint32_t> presort(const FeatureMatrix& data,
                                   std::span<const std::uint32_t> rows) {
  std::vector<std::uint32_t> distinct(rows.begin(), rows.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t n = distinct.size();
  std::vector<std::uint32_t> out(data.attributes() * n);
  for (std::size_t a = 0; a < data.attributes(); ++a) {
    const auto column = data.column(a);
    auto first = out.begin() + static_cast<std::ptrdiff_t>(a * n);
    std::copy(distinct.begin(), distinct.end(), first);
    std::stable_sort(first, first + static_cast<std::ptrdiff_t>(n),
                     [&](std::uint32_t x, std::uint32_t y) { return column[x] < column[y]; });
  }
  return out;
}

int leaf_for(const std::vector<TreeNode>& nodes, std::span<const double> values) {
  int i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& node = nodes[i];
    i = values[node.attribute] <= node.threshold ? node.left : node.right;
  }
  return i;
}

// Bottom-up reduced-error pruning. Returns holdout errors of the (possibly
// collapsed) subtree at `index`.
std::size_t prune_node(std::vector<TreeNode>& nodes,
                       const std::vector<std::vector<std::uint32_t>>& counts,
                       const FeatureMatrix& data, std::vector<std::uint32_t>& holdout,
                       std::size_t begin, std::size_t end, int index) {
  TreeNode& node = nodes[index];
  const std::size_t as_leaf_label = majority(counts[index]);
  std::size_t leaf_errors = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (static_cast<std::size_t>(data.label(holdout[i])) != as_leaf_label) ++leaf_errors;
  }
  if (node.is_leaf()) return leaf_errors;

  const auto column = data.column(node.attribute);
  const double threshold = node.threshold;
  const auto mid = std::stable_partition(
      holdout.begin() + static_cast<std::ptrdiff_t>(begin),
      holdout.begin() + static_cast<std::ptrdiff_t>(end),
      [&](std::uint32_t r) { return column[r] <= threshold; });
  const std::size_t split_at = static_cast<std::size_t>(mid - holdout.begin());
  const int left = node.left;
  const int right = node.right;
  const std::size_t subtree_errors =
      prune_node(nodes, counts, data, holdout, begin, split_at, left) +
      prune_node(nodes, counts, data, holdout, split_at, end, right);
  if (leaf_errors <= subtree_errors) {
    TreeNode& collapsed = nodes[index];
    collapsed.attribute = -1;
    collapsed.threshold = 0.0;
    collapsed.left = collapsed.right = -1;
    collapsed.class_counts = counts[index];
    return leaf_errors;
  }
  return subtree_errors;
}

// Copies the nodes reachable from the root into a fresh pre-order vector.
void compact(const std::vector<TreeNode>& in, int index, std::vector<TreeNode>& out) {
  const int at = static_cast<int>(out.size());
  out.push_back(in[index]);
  if (in[index].is_leaf()) return;
  const int left_at = static_cast<int>(out.size());
  compact(in, in[index].left, out);
  const int right_at = static_cast<int>(out.size());
  compact(in, in[index].right, out);
  out[at].left = left_at;
  out[at].right = right_at;
}

void require_rows(std::span<const std::uint32_t> rows) {
  if (rows.empty()) throw std::invalid_argument("cannot train on an empty dataset");
}

TreeModel make_model(const FeatureMatrix& data, std::vector<TreeNode> nodes,
                     std::span<const std::uint32_t> rows) {
  TreeModel model;
  model.nodes = std::move(nodes);
  model.scheme = data.scheme();
  model.registry_checksum = data.checksum();
  model.num_attributes = data.attributes();
  std::vector<bool> seen(data.num_classes(), false);
  for (const auto r : rows) seen[data.label(r)] = true;
  model.degenerate = std::count(seen.begin(), seen.end(), true) < 2;
  return model;
}

std::vector<std::uint32_t> all_rows(const FeatureMatrix& data) {
  std::vector<std::uint32_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

int resolve_mtry(const TrainConfig& config, std::size_t attributes) {
  if (config.mtry > 0) return std::min<int>(config.mtry, static_cast<int>(attributes));
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(attributes))));
}

void check_values(std::size_t expected, std::span<const double> values) {
  if (values.size() != expected) {
    throw std::invalid_argument("feature vector has " + std::to_string(values.size()) +
                                " values, model expects " + std::to_string(expected));
  }
}

}  // namespace

std::string_view to_string(SplitCriterion criterion) {
  return criterion == SplitCriterion::kGini ? "gini" : "info_gain";
}

SplitCriterion parse_criterion(std::string_view text) {
  if (text == "gini") return SplitCriterion::kGini;
  if (text == "info_gain") return SplitCriterion::kInfoGain;
  throw LookupError("unknown split criterion '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
  if (n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (mtry < 0) throw std::invalid_argument("mtry must be >= 0");
  if (!(prune_fraction >= 0.0 && prune_fraction <= 0.5)) {
    throw std::invalid_argument("prune_fraction must lie in [0, 0.5]");
  }
}

FeatureMatrix::FeatureMatrix(const Dataset& dataset)
    : num_attributes_(dataset.num_attributes()),
      num_classes_(dataset.num_classes()),
      scheme_(dataset.scheme),
      checksum_(dataset.checksum()) {
  const std::size_t n = dataset.rows.size();
  values_.resize(n * num_attributes_);
  labels_.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = dataset.rows[r];
    if (row.values.size() != num_attributes_) {
      throw std::invalid_argument("row " + std::to_string(r) + " has " +
                                  std::to_string(row.values.size()) + " values, schema has " +
                                  std::to_string(num_attributes_));
    }
    if (row.label < 0 || static_cast<std::size_t>(row.label) >= num_classes_) {
      throw std::invalid_argument("row " + std::to_string(r) + " label " +
                                  std::to_string(row.label) + " invalid for scheme");
    }
    for (std::size_t a = 0; a < num_attributes_; ++a) {
      values_[a * n + r] = row.values[a];
    }
    labels_.push_back(row.label);
  }
}

int TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> depth_of(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, depth_of[i]);
    if (!nodes[i].is_leaf()) {
      depth_of[nodes[i].left] = depth_of[i] + 1;
      depth_of[nodes[i].right] = depth_of[i] + 1;
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double gini_impurity(std::span<const std::uint32_t> counts) {
  const auto total = sum(counts);
  if (total == 0) throw std::invalid_argument("gini impurity of an empty node");
  return impurity(counts, total, SplitCriterion::kGini);
}

double entropy(std::span<const std::uint32_t> counts) {
  const auto total = sum(counts);
  if (total == 0) throw std::invalid_argument("entropy of an empty node");
  return impurity(counts, total, SplitCriterion::kInfoGain);
}

double info_gain(std::span<const std::uint32_t> parent,
                 std::span<const std::uint32_t> left,
                 std::span<const std::uint32_t> right) {
  if (parent.size() != left.size() || parent.size() != right.size()) {
    throw std::invalid_argument("class count vectors differ in length");
  }
  for (std::size_t c = 0; c < parent.size(); ++c) {
    if (left[c] + right[c] != parent[c]) {
      throw std::invalid_argument("children do not sum to the parent");
    }
  }
  const auto n_left = sum(left);
  const auto n_right = sum(right);
  if (n_left == 0 || n_right == 0) throw std::invalid_argument("empty child");
  const double n = static_cast<double>(n_left + n_right);
  return entropy(parent) - (n_left / n) * entropy(left) - (n_right / n) * entropy(right);
}

std::optional<Split> best_split(const FeatureMatrix& data,
                                std::span<const std::uint32_t> rows,
                                std::span<const std::size_t> candidates,
                                SplitCriterion criterion, int min_leaf) {
  if (candidates.empty()) return std::nullopt;
  std::vector<std::uint32_t> counts(data.num_classes(), 0);
  for (const auto r : rows) ++counts[data.label(r)];
  NodeScorer scorer(data.num_classes(), criterion, min_leaf);
  if (!scorer.begin(std::move(counts))) return std::nullopt;
  std::vector<SortItem> items(rows.size());
  for (const auto a : candidates) {
    if (a >= data.attributes()) throw std::invalid_argument("candidate attribute out of range");
    const auto column = data.column(a);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      items[i] = {column[rows[i]], static_cast<std::uint32_t>(data.label(rows[i]))};
    }
    std::sort(items.begin(), items.end(),
              [](const SortItem& x, const SortItem& y) { return x.value < y.value; });
    scorer.scan(
        a, [&](std::size_t i) { return items[i].value; },
        [&](std::size_t i) { return items[i].label; });
  }
  return scorer.best();
}

TreeModel train_stump(const Dataset& dataset, const TrainConfig& config) {
  TrainConfig stump = config;
  stump.max_depth = 1;
  stump.prune_fraction = 0.0;
  return train_tree(dataset, stump);
}

TreeModel train_tree(const Dataset& dataset, const TrainConfig& config) {
  const FeatureMatrix data(dataset);
  const auto rows = all_rows(data);
  return train_tree(data, rows, config);
}

TreeModel train_tree(const FeatureMatrix& data, std::span<const std::uint32_t> rows,
                     const TrainConfig& config) {
  config.validate();
  require_rows(rows);
  std::vector<std::uint32_t> grow_rows(rows.begin(), rows.end());
  std::vector<std::uint32_t> holdout;
  if (config.prune_fraction > 0.0) {
    Rng rng(mix_seed(config.seed, 0x9a7e));
    rng.shuffle(std::span(grow_rows));
    const auto n_hold = static_cast<std::size_t>(
        std::llround(config.prune_fraction * static_cast<double>(grow_rows.size())));
    if (n_hold > 0 && n_hold < grow_rows.size()) {
      holdout.assign(grow_rows.begin(), grow_rows.begin() + static_cast<std::ptrdiff_t>(n_hold));
      grow_rows.erase(grow_rows.begin(), grow_rows.begin() + static_cast<std::ptrdiff_t>(n_hold));
      // Growth must not depend on the shuffled order.
      std::sort(grow_rows.begin(), grow_rows.end());
    } else {
      grow_rows.assign(rows.begin(), rows.end());
    }
  }

  TreeGrower grower(data, config, 0, nullptr);
  std::vector<std::vector<std::uint32_t>> counts;
  auto nodes = grower.grow(grow_rows, presort(data, grow_rows),
                           holdout.empty() ? nullptr : &counts);
  if (!holdout.empty()) {
    prune_node(nodes, counts, data, holdout, 0, holdout.size(), 0);
    std::vector<TreeNode> compacted;
    compact(nodes, 0, compacted);
    nodes = std::move(compacted);
  }
  return make_model(data, std::move(nodes), rows);
}

ForestModel train_forest(const Dataset& dataset, const TrainConfig& config) {
  const FeatureMatrix data(dataset);
  const auto rows = all_rows(data);
  return train_forest(data, rows, config);
}

ForestModel train_forest(const FeatureMatrix& data, std::span<const std::uint32_t> rows,
                         const TrainConfig& config) {
  config.validate();
  require_rows(rows);
  ForestModel forest;
  forest.mtry = resolve_mtry(config, data.attributes());
  forest.seed = config.seed;
  forest.scheme = data.scheme();
  forest.trees.resize(static_cast<std::size_t>(config.n_trees));
  const auto presorted = presort(data, rows);

  const auto train_one = [&](std::size_t t) {
    Rng rng(mix_seed(config.seed, t));
    std::vector<std::uint32_t> sample;
    sample.reserve(rows.size());
    if (config.bootstrap) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        sample.push_back(rows[rng.uniform_int(rows.size())]);
      }
    } else {
      sample.assign(rows.begin(), rows.end());
    }
    TreeGrower grower(data, config, forest.mtry, &rng);
    forest.trees[t] = make_model(data, grower.grow(sample, presorted, nullptr), rows);
  };

  const std::size_t workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), forest.trees.size());
  if (workers <= 1) {
    for (std::size_t t = 0; t < forest.trees.size(); ++t) train_one(t);
    return forest;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t t = next++; t < forest.trees.size(); t = next++) train_one(t);
    });
  }
  for (auto& th : pool) th.join();
  return forest;
}

std::vector<double> predict_distribution(const TreeModel& model,
                                         std::span<const double> values) {
  check_values(model.num_attributes, values);
  const auto& counts = model.nodes[leaf_for(model.nodes, values)].class_counts;
  const double total = static_cast<double>(sum(counts));
  std::vector<double> dist(counts.size(), 0.0);
  if (total == 0.0) {
    std::fill(dist.begin(), dist.end(), 1.0 / static_cast<double>(dist.size()));
    return dist;
  }
  for (std::size_t c = 0; c < counts.size(); ++c) dist[c] = counts[c] / total;
  return dist;
}

std::vector<double> predict_distribution(const ForestModel& model,
                                         std::span<const double> values) {
  std::vector<double> mean(class_count(model.scheme), 0.0);
  for (const auto& tree : model.trees) {
    const auto d = predict_distribution(tree, values);
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += d[c];
  }
  for (auto& m : mean) m /= static_cast<double>(model.trees.size());
  return mean;
}

std::vector<double> predict_distribution(const Model& model,
                                         std::span<const double> values) {
  return std::visit([&](const auto& m) { return predict_distribution(m, values); }, model);
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

int predict_label(const TreeModel& model, std::span<const double> values) {
  return static_cast<int>(argmax(predict_distribution(model, values)));
}

int predict_label(const ForestModel& model, std::span<const double> values) {
  std::vector<double> votes(class_count(model.scheme), 0.0);
  for (const auto& tree : model.trees) votes[predict_label(tree, values)] += 1.0;
  return static_cast<int>(argmax(votes));
}

int predict_label(const Model& model, std::span<const double> values) {
  return std::visit([&](const auto& m) { return predict_label(m, values); }, model);
}

LabelScheme model_scheme(const Model& model) {
  return std::visit([](const auto& m) { return m.scheme; }, model);
}

std::uint64_t model_checksum(const Model& model) {
  if (const auto* tree = std::get_if<TreeModel>(&model)) return tree->registry_checksum;
  const auto& forest = std::get<ForestModel>(model);
  return forest.trees.empty() ? 0 : forest.trees.front().registry_checksum;
}

std::size_t model_attribute_count(const Model& model) {
  if (const auto* tree = std::get_if<TreeModel>(&model)) return tree->num_attributes;
  const auto& forest = std::get<ForestModel>(model);
  return forest.trees.empty() ? 0 : forest.trees.front().num_attributes;
}

std::vector<int> predict_labels(const Model& model, const Dataset& dataset) {
  if (dataset.checksum() != model_checksum(model)) {
    throw SchemaMismatch("dataset attribute schema does not match the model");
  }
  if (dataset.scheme != model_scheme(model)) {
    throw SchemaMismatch("dataset label scheme does not match the model");
  }
  std::vector<int> labels;
  labels.reserve(dataset.rows.size());
  for (const auto& row : dataset.rows) labels.push_back(predict_label(model, row.values));
  return labels;
}

}  // namespace cstk
