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

#include "cstk/tables.h"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace cstk {
namespace {

void check_complete(const ExperimentGrid& grid) {
  std::vector<std::string> missing;
  for (const auto scenario : kAllScenarios) {
    for (const auto scheme : kAllSchemes) {
      for (const auto& learner : grid.learners) {
        if (grid.find(scenario, scheme, learner) == nullptr) {
          missing.push_back(fmt::format("{}/{}/{}", to_string(scenario), to_string(scheme),
                                        learner));
        }
      }
    }
  }
  if (grid.learners.empty()) missing.emplace_back("(no learners)");
  if (missing.empty()) return;
  std::string list;
  for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
  throw std::invalid_argument("incomplete experiment grid, missing " + list);
}

}  // namespace

std::string format_accuracy(double accuracy) { return fmt::format("{:.1f}%", accuracy * 100.0); }

std::string format_kappa(double kappa) { return fmt::format("{:.4f}", kappa); }

std::string emit_grid_table(const ExperimentGrid& grid, LabelScheme scheme) {
  check_complete(grid);
  std::size_t name_width = 7;
  for (const auto& l : grid.learners) name_width = std::max(name_width, l.size());

  std::string out = fmt::format("{} classification ({}-fold)\n",
                                scheme == LabelScheme::kBinary ? "Binary" : "Quarterly", grid.k);
  out += fmt::format("{:<{}}", "", name_width);
  for (const auto scenario : kAllScenarios) {
    out += fmt::format(" | {:^17}", fmt::format("Scenario {}", to_string(scenario)));
  }
  out += '\n';
  out += fmt::format("{:<{}}", "Learner", name_width);
  for (std::size_t i = 0; i < kAllScenarios.size(); ++i) {
    out += fmt::format(" | {:>7} {:>9}", "ACC", "KPP");
  }
  out += '\n';
  out += std::string(name_width, '-');
  for (std::size_t i = 0; i < kAllScenarios.size(); ++i) out += "-+------------------";
  out += '\n';
  for (const auto& learner : grid.learners) {
    out += fmt::format("{:<{}}", learner, name_width);
    for (const auto scenario : kAllScenarios) {
      const auto* r = grid.find(scenario, scheme, learner);
      out += fmt::format(" | {:>7} {:>9}", format_accuracy(r->accuracy), format_kappa(r->kappa));
    }
    out += '\n';
  }
  return out;
}

std::string emit_grid_tables(const ExperimentGrid& grid) {
  return emit_grid_table(grid, LabelScheme::kBinary) + "\n" +
         emit_grid_table(grid, LabelScheme::kQuarterly);
}

std::string emit_ranking_table(const AttributeRanking& ranking) {
  std::size_t width = 9;
  for (const auto& e : ranking.entries) width = std::max(width, e.attribute.size());
  std::string out = fmt::format("Leave-one-attribute-out ranking ({}), baseline accuracy {}\n",
                                ranking.learner, format_accuracy(ranking.baseline_accuracy));
  out += fmt::format("{:>4}  {:<{}}  {:>10}  {:>9}\n", "rank", "attribute", width, "acc_without",
                     "impact");
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    out += fmt::format("{:>4}  {:<{}}  {:>10}  {:>9.4f}\n", i + 1, e.attribute, width,
                       format_accuracy(e.accuracy_without), e.impact);
  }
  return out;
}

}  // namespace cstk
