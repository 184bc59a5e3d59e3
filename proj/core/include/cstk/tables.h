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

#ifndef CSTK_TABLES_H_
#define CSTK_TABLES_H_

#include <string>

#include "cstk/attributes.h"
#include "cstk/eval.h"

namespace cstk {

// Accuracy as a percentage with one decimal ("94.0%").
std::string format_accuracy(double accuracy);
// Kappa with four decimals ("0.8805").
std::string format_kappa(double kappa);

// Plain-text table for one scheme: one row per learner, an (ACC, KPP) column
// pair per scenario. Throws std::invalid_argument listing every missing
// cell when the grid is incomplete.
std::string emit_grid_table(const ExperimentGrid& grid, LabelScheme scheme);

// Binary table, blank line, quarterly table.
std::string emit_grid_tables(const ExperimentGrid& grid);

// Ranking as a numbered table.
std::string emit_ranking_table(const AttributeRanking& ranking);

}  // namespace cstk

#endif  // CSTK_TABLES_H_
