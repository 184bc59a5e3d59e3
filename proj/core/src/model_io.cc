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

#include "cstk/model_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cstk/errors.h"
#include "cstk/session_io.h"

namespace cstk {
namespace {

constexpr std::string_view kMagic = "cstk-model";

std::string hex(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, 16);
  return std::string(buf, res.ptr);
}

void write_tree(std::ostream& out, const TreeModel& tree) {
  out << "tree nodes " << tree.nodes.size() << " degenerate " << (tree.degenerate ? 1 : 0)
      << '\n';
  for (const auto& node : tree.nodes) {
    if (node.is_leaf()) {
      out << 'L';
      for (const auto c : node.class_counts) out << ' ' << c;
    } else {
      out << "N " << node.attribute << ' ' << format_double(node.threshold);
    }
    out << '\n';
  }
}

// Reads whitespace-separated tokens line by line, tracking line numbers.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next line split into tokens; throws at end of input.
  std::vector<std::string> next() {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError("unexpected end of model file", line_ + 1);
    ++line_;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.empty()) fail("blank line");
    return tokens;
  }

  // Expects `key value` and returns value.
  std::string field(std::string_view key) {
    const auto t = next();
    if (t.size() != 2 || t[0] != key) fail("expected '" + std::string(key) + " <value>'");
    return t[1];
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  template <typename T>
  T number(const std::string& text, int base = 10) const {
    T v{};
    std::from_chars_result res;
    if constexpr (std::is_floating_point_v<T>) {
      res = std::from_chars(text.data(), text.data() + text.size(), v);
    } else {
      res = std::from_chars(text.data(), text.data() + text.size(), v, base);
    }
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      fail("invalid number '" + text + "'");
    }
    return v;
  }

  bool at_end() {
    return in_.peek() == std::char_traits<char>::eof();
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

TreeModel read_tree(Reader& r, LabelScheme scheme, std::uint64_t checksum,
                    std::size_t attributes) {
  const auto head = r.next();
  if (head.size() != 5 || head[0] != "tree" || head[1] != "nodes" || head[3] != "degenerate") {
    r.fail("expected 'tree nodes <n> degenerate <0|1>'");
  }
  TreeModel tree;
  tree.scheme = scheme;
  tree.registry_checksum = checksum;
  tree.num_attributes = attributes;
  const auto n = r.number<std::size_t>(head[2]);
  const auto degenerate = r.number<int>(head[4]);
  if (n == 0) r.fail("tree without nodes");
  if (degenerate != 0 && degenerate != 1) r.fail("degenerate must be 0 or 1");
  tree.degenerate = degenerate == 1;
  tree.nodes.resize(n);

  // Pre-order: an internal node's left child follows it directly; its right
  // child follows the end of the left subtree.
  std::vector<int> open;  // internal nodes still waiting for a right child
  const std::size_t k = class_count(scheme);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = r.next();
    TreeNode& node = tree.nodes[i];
    if (t[0] == "N") {
      if (t.size() != 3) r.fail("internal node needs attribute and threshold");
      node.attribute = r.number<int>(t[1]);
      if (node.attribute < 0 || static_cast<std::size_t>(node.attribute) >= attributes) {
        r.fail("attribute index out of range");
      }
      node.threshold = r.number<double>(t[2]);
      node.left = static_cast<int>(i + 1);
      open.push_back(static_cast<int>(i));
    } else if (t[0] == "L") {
      if (t.size() != k + 1) r.fail("leaf needs " + std::to_string(k) + " class counts");
      for (std::size_t c = 0; c < k; ++c) node.class_counts.push_back(r.number<std::uint32_t>(t[c + 1]));
      if (i + 1 < n) {
        if (open.empty()) r.fail("node records after a complete tree");
        tree.nodes[open.back()].right = static_cast<int>(i + 1);
        open.pop_back();
      }
    } else {
      r.fail("unknown node record '" + t[0] + "'");
    }
  }
  if (!open.empty()) r.fail("tree ends before every internal node has two children");
  return tree;
}

}  // namespace

void save_model(std::ostream& out, const SavedModel& saved) {
  const LabelScheme scheme = model_scheme(saved.model);
  const TrainConfig& c = saved.learner.config;
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "scheme " << to_string(scheme) << '\n';
  out << "registry_checksum " << hex(model_checksum(saved.model)) << '\n';
  out << "attributes " << model_attribute_count(saved.model) << '\n';
  out << "learner " << saved.learner.name << '\n';
  out << "kind " << to_string(saved.learner.kind) << '\n';
  out << "criterion " << to_string(c.criterion) << '\n';
  out << "max_depth " << c.max_depth << '\n';
  out << "min_leaf " << c.min_leaf << '\n';
  out << "n_trees " << c.n_trees << '\n';
  out << "mtry " << c.mtry << '\n';
  out << "bootstrap " << (c.bootstrap ? 1 : 0) << '\n';
  out << "seed " << c.seed << '\n';
  out << "prune_fraction " << format_double(c.prune_fraction) << '\n';
  out << "excluded";
  if (c.excluded_attributes.empty()) out << " -";
  for (const auto a : c.excluded_attributes) out << ' ' << a;
  out << '\n';

  if (const auto* tree = std::get_if<TreeModel>(&saved.model)) {
    out << "model tree\n";
    write_tree(out, *tree);
  } else {
    const auto& forest = std::get<ForestModel>(saved.model);
    out << "model forest trees " << forest.trees.size() << " mtry " << forest.mtry << " seed "
        << forest.seed << '\n';
    for (const auto& t : forest.trees) write_tree(out, t);
  }

  if (saved.ranking) {
    out << "ranking " << saved.ranking->entries.size() << " baseline "
        << format_double(saved.ranking->baseline_accuracy) << " learner "
        << saved.ranking->learner << '\n';
    for (const auto& e : saved.ranking->entries) {
      out << "R " << e.attribute << ' ' << format_double(e.accuracy_without) << ' '
          << format_double(e.impact) << '\n';
    }
  }
  out << "end\n";
}

std::string save_model_string(const SavedModel& saved) {
  std::ostringstream out;
  save_model(out, saved);
  return out.str();
}

SavedModel load_model(std::istream& in) {
  Reader r(in);
  SavedModel saved;
  {
    const auto t = r.next();
    if (t.size() != 2 || t[0] != kMagic) r.fail("not a cstk model file");
    if (r.number<int>(t[1]) != kModelFormatVersion) {
      r.fail("unsupported model format version " + t[1]);
    }
  }
  LabelScheme scheme;
  try {
    scheme = parse_scheme(r.field("scheme"));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  const auto checksum = r.number<std::uint64_t>(r.field("registry_checksum"), 16);
  const auto attributes = r.number<std::size_t>(r.field("attributes"));

  LearnerSpec& spec = saved.learner;
  TrainConfig& c = spec.config;
  spec.name = r.field("learner");
  const auto kind = r.field("kind");
  if (kind == "stump") spec.kind = LearnerKind::kStump;
  else if (kind == "tree") spec.kind = LearnerKind::kTree;
  else if (kind == "reptree") spec.kind = LearnerKind::kRepTree;
  else if (kind == "forest") spec.kind = LearnerKind::kForest;
  else r.fail("unknown learner kind '" + kind + "'");
  try {
    c.criterion = parse_criterion(r.field("criterion"));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  c.max_depth = r.number<int>(r.field("max_depth"));
  c.min_leaf = r.number<int>(r.field("min_leaf"));
  c.n_trees = r.number<int>(r.field("n_trees"));
  c.mtry = r.number<int>(r.field("mtry"));
  c.bootstrap = r.number<int>(r.field("bootstrap")) != 0;
  c.seed = r.number<std::uint64_t>(r.field("seed"));
  c.prune_fraction = r.number<double>(r.field("prune_fraction"));
  {
    const auto t = r.next();
    if (t[0] != "excluded" || t.size() < 2) r.fail("expected 'excluded <indices|->'");
    if (!(t.size() == 2 && t[1] == "-")) {
      for (std::size_t i = 1; i < t.size(); ++i) {
        c.excluded_attributes.push_back(r.number<std::size_t>(t[i]));
      }
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }

  const auto m = r.next();
  if (m.size() == 2 && m[0] == "model" && m[1] == "tree") {
    saved.model = read_tree(r, scheme, checksum, attributes);
  } else if (m.size() == 8 && m[0] == "model" && m[1] == "forest" && m[2] == "trees" &&
             m[4] == "mtry" && m[6] == "seed") {
    ForestModel forest;
    forest.scheme = scheme;
    const auto n = r.number<std::size_t>(m[3]);
    if (n == 0) r.fail("forest without trees");
    forest.mtry = r.number<int>(m[5]);
    forest.seed = r.number<std::uint64_t>(m[7]);
    for (std::size_t i = 0; i < n; ++i) {
      forest.trees.push_back(read_tree(r, scheme, checksum, attributes));
    }
    saved.model = std::move(forest);
  } else {
    r.fail("expected 'model tree' or 'model forest trees <n> mtry <m> seed <s>'");
  }

  auto t = r.next();
  if (t[0] == "ranking") {
    if (t.size() != 6 || t[2] != "baseline" || t[4] != "learner") {
      r.fail("expected 'ranking <n> baseline <acc> learner <name>'");
    }
    AttributeRanking ranking;
    ranking.learner = t[5];
    const auto n = r.number<std::size_t>(t[1]);
    ranking.baseline_accuracy = r.number<double>(t[3]);
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = r.next();
      if (e.size() != 4 || e[0] != "R") r.fail("expected 'R <attribute> <accuracy> <impact>'");
      ranking.entries.push_back({e[1], r.number<double>(e[2]), r.number<double>(e[3])});
    }
    saved.ranking = std::move(ranking);
    t = r.next();
  }
  if (t.size() != 1 || t[0] != "end") r.fail("expected 'end'");
  return saved;
}

SavedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return load_model(in);
}

void save_model_file(const std::string& path, const SavedModel& saved) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  save_model(out, saved);
  if (!out) throw std::runtime_error("failed writing model file '" + path + "'");
}

}  // namespace cstk
