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

#ifndef CSTK_METRICS_H_
#define CSTK_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cstk {

// k x k counts, rows = actual class, columns = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t k = 2);

  // Throws std::invalid_argument unless `rows` is square and non-empty.
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

  std::size_t k() const { return k_; }
  std::uint64_t at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual * k_ + predicted];
  }
  void add(std::size_t actual, std::size_t predicted, std::uint64_t n = 1);

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t actual) const;
  std::uint64_t column_sum(std::size_t predicted) const;
  std::vector<std::vector<std::uint64_t>> rows() const;

  // Throws std::invalid_argument on a size mismatch.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t k_;
  std::vector<std::uint64_t> counts_;
};

// trace / N. Throws std::invalid_argument when N = 0.
double accuracy(const ConfusionMatrix& cm);

// (p_o - p_e) / (1 - p_e); 0 when p_e = 1. Throws std::invalid_argument
// when N = 0.
double cohen_kappa(const ConfusionMatrix& cm);

}  // namespace cstk

#endif  // CSTK_METRICS_H_
