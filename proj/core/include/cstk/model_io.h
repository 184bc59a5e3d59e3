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

#ifndef CSTK_MODEL_IO_H_
#define CSTK_MODEL_IO_H_

#include <iosfwd>
#include <optional>
#include <string>

#include "cstk/eval.h"
#include "cstk/tree.h"

namespace cstk {

inline constexpr int kModelFormatVersion = 1;

// A trained model with the learner that produced it and, optionally, the
// attribute ranking computed for it at training time.
struct SavedModel {
  LearnerSpec learner;
  Model model;
  std::optional<AttributeRanking> ranking;

  bool operator==(const SavedModel&) const = default;
};

// Line-oriented text format: header, pre-order node records, optional
// ranking. Saving a loaded model reproduces the input bytes.
void save_model(std::ostream& out, const SavedModel& saved);
std::string save_model_string(const SavedModel& saved);

// Throws ParseError (with the line number) on malformed input.
SavedModel load_model(std::istream& in);
SavedModel load_model_file(const std::string& path);
void save_model_file(const std::string& path, const SavedModel& saved);

}  // namespace cstk

#endif  // CSTK_MODEL_IO_H_
