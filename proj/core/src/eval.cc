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

#include "cstk/eval.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cstk/errors.h"
#include "cstk/random.h"
#include "json_codec.h"

namespace cstk {
namespace {

using internal::Json;

std::vector<std::uint32_t> to_u32(std::span<const std::size_t> rows) {
  return {rows.begin(), rows.end()};
}

double score_on(const Model& model, const Dataset& dataset, ConfusionMatrix* cm) {
  std::size_t hits = 0;
  for (const auto& row : dataset.rows) {
    const int predicted = predict_label(model, row.values);
    if (predicted == row.label) ++hits;
    if (cm != nullptr) cm->add(row.label, predicted);
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.rows.size());
}

Json cm_to_json(const ConfusionMatrix& cm) { return cm.rows(); }

ConfusionMatrix cm_from_json(const Json& j) {
  return ConfusionMatrix::from_rows(j.get<std::vector<std::vector<std::uint64_t>>>());
}

Json report_json(const EvalReport& r) {
  Json folds = Json::array();
  for (const auto& f : r.per_fold) {
    folds.push_back({{"fold", f.fold},
                     {"accuracy", f.accuracy},
                     {"kappa", f.kappa},
                     {"confusion_matrix", cm_to_json(f.cm)}});
  }
  return {{"learner", r.learner},
          {"scenario", std::string(to_string(r.scenario))},
          {"scheme", std::string(to_string(r.scheme))},
          {"k", r.k},
          {"seed", r.seed},
          {"accuracy", r.accuracy},
          {"kappa", r.kappa},
          {"per_fold", folds},
          {"aggregate_confusion_matrix", cm_to_json(r.aggregate_cm)}};
}

EvalReport report_from(const Json& j) {
  internal::require_known_keys(j, "eval report",
                               {"learner", "scenario", "scheme", "k", "seed", "accuracy",
                                "kappa", "per_fold", "aggregate_confusion_matrix"});
  EvalReport r;
  r.learner = j.at("learner").get<std::string>();
  r.scenario = parse_scenario(j.at("scenario").get<std::string>());
  r.scheme = parse_scheme(j.at("scheme").get<std::string>());
  r.k = j.at("k").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.accuracy = j.at("accuracy").get<double>();
  r.kappa = j.at("kappa").get<double>();
  for (const auto& f : j.at("per_fold")) {
    r.per_fold.push_back(FoldResult{f.at("fold").get<std::size_t>(),
                                    f.at("accuracy").get<double>(),
                                    f.at("kappa").get<double>(),
                                    cm_from_json(f.at("confusion_matrix"))});
  }
  r.aggregate_cm = cm_from_json(j.at("aggregate_confusion_matrix"));
  return r;
}

template <typename F>
auto parse_document(std::string_view text, const char* what, F&& build) {
  try {
    return build(Json::parse(text));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid ") + what + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kStump: return "stump";
    case LearnerKind::kTree: return "tree";
    case LearnerKind::kRepTree: return "reptree";
    case LearnerKind::kForest: return "forest";
  }
  return "?";
}

LearnerSpec parse_learner(std::string_view name) {
  LearnerSpec spec;
  spec.name = std::string(name);
  if (name == "stump") {
    spec.kind = LearnerKind::kStump;
    spec.config.max_depth = 1;
  } else if (name == "tree") {
    spec.kind = LearnerKind::kTree;
  } else if (name == "reptree") {
    spec.kind = LearnerKind::kRepTree;
    spec.config.criterion = SplitCriterion::kInfoGain;
    spec.config.prune_fraction = 0.2;
  } else if (name == "forest") {
    spec.kind = LearnerKind::kForest;
    spec.config.n_trees = 100;
  } else {
    throw LookupError("unknown learner '" + std::string(name) +
                      "' (expected stump, tree, reptree or forest)");
  }
  return spec;
}

LearnerSpec default_ranking_learner() {
  LearnerSpec spec = parse_learner("tree");
  spec.config.max_depth = 4;
  spec.config.min_leaf = 50;
  return spec;
}

std::vector<LearnerSpec> parse_learner_list(std::string_view names) {
  std::vector<LearnerSpec> out;
  std::set<std::string> seen;
  std::size_t start = 0;
  while (start <= names.size()) {
    const auto comma = names.find(',', start);
    const auto end = comma == std::string_view::npos ? names.size() : comma;
    const auto name = names.substr(start, end - start);
    if (name.empty()) throw std::invalid_argument("empty learner name in list");
    if (!seen.insert(std::string(name)).second) {
      throw std::invalid_argument("learner '" + std::string(name) + "' listed twice");
    }
    out.push_back(parse_learner(name));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Model train_learner(const LearnerSpec& spec, const FeatureMatrix& data,
                    std::span<const std::uint32_t> rows, std::uint64_t seed) {
  TrainConfig config = spec.config;
  config.seed = seed;
  switch (spec.kind) {
    case LearnerKind::kStump:
      config.max_depth = 1;
      config.prune_fraction = 0.0;
      return train_tree(data, rows, config);
    case LearnerKind::kTree:
    case LearnerKind::kRepTree:
      return train_tree(data, rows, config);
    case LearnerKind::kForest:
      return train_forest(data, rows, config);
  }
  throw std::logic_error("unhandled learner kind");
}

Model train_learner(const LearnerSpec& spec, const Dataset& dataset, std::uint64_t seed) {
  const FeatureMatrix data(dataset);
  std::vector<std::uint32_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), 0u);
  return train_learner(spec, data, rows, seed);
}

EvalReport cross_validate(const LearnerSpec& spec, const Dataset& dataset, std::size_t k,
                          std::uint64_t seed, const FoldObserver& observer) {
  const FoldPlan plan = stratified_kfold(dataset, k, seed);
  const FeatureMatrix data(dataset);

  EvalReport report;
  report.learner = spec.name;
  report.scenario = dataset.scenario;
  report.scheme = dataset.scheme;
  report.k = k;
  report.seed = seed;
  report.aggregate_cm = ConfusionMatrix(dataset.num_classes());

  for (std::size_t fold = 0; fold < k; ++fold) {
    const auto train = plan.train_rows(fold);
    const auto test = plan.test_rows(fold);
    if (observer) observer(fold, train, test);
    const auto model = train_learner(spec, data, to_u32(train), mix_seed(seed, fold));
    ConfusionMatrix cm(dataset.num_classes());
    for (const auto r : test) {
      cm.add(dataset.rows[r].label, predict_label(model, dataset.rows[r].values));
    }
    report.aggregate_cm += cm;
    report.per_fold.push_back(FoldResult{fold, accuracy(cm), cohen_kappa(cm), cm});
  }
  report.accuracy = accuracy(report.aggregate_cm);
  report.kappa = cohen_kappa(report.aggregate_cm);
  return report;
}

const EvalReport* ExperimentGrid::find(Scenario scenario, LabelScheme scheme,
                                       std::string_view learner) const {
  for (const auto& r : reports) {
    if (r.scenario == scenario && r.scheme == scheme && r.learner == learner) return &r;
  }
  return nullptr;
}

std::uint64_t cell_seed(std::uint64_t seed, Scenario scenario, LabelScheme scheme,
                        std::string_view learner) {
  std::uint64_t h = mix_seed(seed, static_cast<std::uint64_t>(scenario));
  h = mix_seed(h, static_cast<std::uint64_t>(scheme));
  return mix_seed(h, fnv1a64(learner));
}

ExperimentGrid run_experiment_grid(std::span<const SessionRecord> sessions,
                                   std::span<const LearnerSpec> learners, std::size_t k,
                                   std::uint64_t seed) {
  const bool has_race = std::any_of(sessions.begin(), sessions.end(),
                                    [](const auto& s) { return s.game == Game::kRace; });
  const bool has_flight = std::any_of(sessions.begin(), sessions.end(),
                                      [](const auto& s) { return s.game == Game::kFlight; });
  if (!has_race || !has_flight) {
    throw std::invalid_argument("experiment grid needs sessions from both games");
  }
  if (learners.empty()) throw std::invalid_argument("experiment grid needs a learner");

  ExperimentGrid grid;
  grid.k = k;
  grid.seed = seed;
  for (const auto& l : learners) grid.learners.push_back(l.name);
  for (const auto scenario : kAllScenarios) {
    for (const auto scheme : kAllSchemes) {
      const Dataset dataset = build_dataset(sessions, scenario, scheme);
      for (const auto& spec : learners) {
        grid.reports.push_back(
            cross_validate(spec, dataset, k, cell_seed(seed, scenario, scheme, spec.name)));
      }
    }
  }
  return grid;
}

std::size_t AttributeRanking::rank_of(std::string_view attribute) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].attribute == attribute) return i + 1;
  }
  throw LookupError("attribute '" + std::string(attribute) + "' is not ranked");
}

AttributeRanking rank_attributes(const LearnerSpec& spec, const Dataset& dataset,
                                 std::uint64_t seed) {
  if (dataset.rows.empty()) throw std::invalid_argument("cannot rank on an empty dataset");
  const FeatureMatrix data(dataset);
  std::vector<std::uint32_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), 0u);

  AttributeRanking ranking;
  ranking.learner = spec.name;
  ranking.baseline_accuracy = score_on(train_learner(spec, data, rows, seed), dataset, nullptr);

  for (std::size_t a = 0; a < dataset.num_attributes(); ++a) {
    LearnerSpec without = spec;
    without.config.excluded_attributes = {a};
    const double acc = score_on(train_learner(without, data, rows, seed), dataset, nullptr);
    ranking.entries.push_back({dataset.schema[a], acc, ranking.baseline_accuracy - acc});
  }
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const RankingEntry& x, const RankingEntry& y) { return x.impact > y.impact; });
  return ranking;
}

std::string to_json(const EvalReport& report) { return report_json(report).dump(2); }

std::string to_json(const ExperimentGrid& grid) {
  Json reports = Json::array();
  for (const auto& r : grid.reports) reports.push_back(report_json(r));
  const Json j = {{"k", grid.k},
                  {"seed", grid.seed},
                  {"learners", grid.learners},
                  {"reports", reports}};
  return j.dump(2);
}

std::string to_json(const AttributeRanking& ranking) {
  Json entries = Json::array();
  for (const auto& e : ranking.entries) {
    entries.push_back({{"attribute", e.attribute},
                       {"accuracy_without", e.accuracy_without},
                       {"impact", e.impact}});
  }
  const Json j = {{"learner", ranking.learner},
                  {"baseline_accuracy", ranking.baseline_accuracy},
                  {"entries", entries}};
  return j.dump(2);
}

EvalReport eval_report_from_json(std::string_view text) {
  return parse_document(text, "eval report", [](const Json& j) { return report_from(j); });
}

ExperimentGrid experiment_grid_from_json(std::string_view text) {
  return parse_document(text, "experiment grid", [](const Json& j) {
    internal::require_known_keys(j, "experiment grid", {"k", "seed", "learners", "reports"});
    ExperimentGrid grid;
    grid.k = j.at("k").get<std::size_t>();
    grid.seed = j.at("seed").get<std::uint64_t>();
    grid.learners = j.at("learners").get<std::vector<std::string>>();
    for (const auto& r : j.at("reports")) grid.reports.push_back(report_from(r));
    return grid;
  });
}

AttributeRanking ranking_from_json(std::string_view text) {
  return parse_document(text, "attribute ranking", [](const Json& j) {
    internal::require_known_keys(j, "attribute ranking",
                                 {"learner", "baseline_accuracy", "entries"});
    AttributeRanking ranking;
    ranking.learner = j.at("learner").get<std::string>();
    ranking.baseline_accuracy = j.at("baseline_accuracy").get<double>();
    for (const auto& e : j.at("entries")) {
      ranking.entries.push_back({e.at("attribute").get<std::string>(),
                                 e.at("accuracy_without").get<double>(),
                                 e.at("impact").get<double>()});
    }
    return ranking;
  });
}

}  // namespace cstk
