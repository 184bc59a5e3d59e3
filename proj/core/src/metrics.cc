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

#include "cstk/metrics.h"

#include <numeric>
#include <stdexcept>

namespace cstk {

ConfusionMatrix::ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {
  if (k == 0) throw std::invalid_argument("confusion matrix needs at least one class");
}

ConfusionMatrix ConfusionMatrix::from_rows(
    const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix cm(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a].size() != rows.size()) {
      throw std::invalid_argument("confusion matrix rows must be square");
    }
    for (std::size_t p = 0; p < rows.size(); ++p) cm.add(a, p, rows[a][p]);
  }
  return cm;
}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::uint64_t n) {
  if (actual >= k_ || predicted >= k_) {
    throw std::invalid_argument("class index outside confusion matrix");
  }
  counts_[actual * k_ + predicted] += n;
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < k_; ++c) t += at(c, c);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t actual) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < k_; ++p) s += at(actual, p);
  return s;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t a = 0; a < k_; ++a) s += at(a, predicted);
  return s;
}

std::vector<std::vector<std::uint64_t>> ConfusionMatrix::rows() const {
  std::vector<std::vector<std::uint64_t>> out(k_);
  for (std::size_t a = 0; a < k_; ++a) {
    out[a].assign(counts_.begin() + static_cast<std::ptrdiff_t>(a * k_),
                  counts_.begin() + static_cast<std::ptrdiff_t>((a + 1) * k_));
  }
  return out;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw std::invalid_argument("confusion matrix size mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw std::invalid_argument("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(n);
}

double cohen_kappa(const ConfusionMatrix& cm) {
  const auto n = cm.total();
  if (n == 0) throw std::invalid_argument("kappa of an empty confusion matrix");
  const double total = static_cast<double>(n);
  const double po = static_cast<double>(cm.trace()) / total;
  double pe = 0.0;
  for (std::size_t c = 0; c < cm.k(); ++c) {
    pe += static_cast<double>(cm.row_sum(c)) * static_cast<double>(cm.column_sum(c));
  }
  pe /= total * total;
  if (pe >= 1.0) return 0.0;
  return (po - pe) / (1.0 - pe);
}

}  // namespace cstk
