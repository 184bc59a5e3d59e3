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

#ifndef CSTK_ADVISOR_H_
#define CSTK_ADVISOR_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cstk/eval.h"
#include "cstk/session.h"

namespace cstk {

inline constexpr std::size_t kNumCauses = 10;
inline constexpr std::size_t kNumStrategies = 19;

// Cybersickness causes; the enumerator value is the cause id.
enum class Cause {
  kLocomotion = 1,
  kAcceleration = 2,
  kFieldOfView = 3,
  kDepthOfField = 4,
  kDegreeOfControl = 5,
  kExposure = 6,
  kLatency = 7,
  kStaticRestFrame = 8,
  kCameraRotation = 9,
  kPosturalInstability = 10,
};

// Mitigation strategies in knowledge-base row order.
enum class Strategy {
  kTeleporting,
  kTunneling,
  kMotionWalk,
  kHapticFeedback,
  kAccelerationChanges,
  kHeadlock,
  kHolosphere,
  kTrajectoryVisualization,
  kRotationalBlur,
  kDoFSimulation,
  kLatencyCameraWarping,
  kCabinStaticFrame,
  kSlowmotion,
  kDynamicFoV,
  kDynamicVignetting,
  kAmplifiedMovements,
  kBlur,
  kInterval,
  kPhysiologicalSignalsObservation,
};

std::span<const Cause, kNumCauses> all_causes();
std::span<const Strategy, kNumStrategies> all_strategies();

int cause_id(Cause cause);
// Throws LookupError outside 1..10.
Cause cause_from_id(int id);
std::string_view to_string(Cause cause);
std::string_view to_string(Strategy strategy);
// Throw LookupError on unknown names.
Cause parse_cause(std::string_view name);
Strategy parse_strategy(std::string_view name);

class CauseStrategyMatrix {
 public:
  bool cell(Strategy strategy, Cause cause) const {
    return cells_[static_cast<std::size_t>(strategy)][cause_id(cause) - 1];
  }
  void set(Strategy strategy, Cause cause, bool value) {
    cells_[static_cast<std::size_t>(strategy)][cause_id(cause) - 1] = value;
  }
  std::size_t true_cells() const;

  bool operator==(const CauseStrategyMatrix&) const = default;

 private:
  std::array<std::array<bool, kNumCauses>, kNumStrategies> cells_{};
};

// The compiled-in strategies x causes knowledge base.
const CauseStrategyMatrix& builtin_matrix();

// Strategies addressing `cause`, in row order.
std::vector<Strategy> strategies_for(Cause cause,
                                     const CauseStrategyMatrix& matrix = builtin_matrix());

// CSV with a header of cause names and one 0/1 row per strategy.
std::string matrix_to_csv(const CauseStrategyMatrix& matrix);

// Attribute -> cause table. Attributes without an entry carry evidence only.
class CauseMapping {
 public:
  // The shipped table (see docs/data-format.md).
  static CauseMapping defaults();

  // "attribute = cause" lines; "none" as the cause marks an evidence-only
  // attribute; '#' starts a comment. Attributes are checked against the
  // registry. Throws ParseError with the line number.
  static CauseMapping parse(std::istream& in);
  static CauseMapping parse_file(const std::string& path);

  std::optional<Cause> cause_of(std::string_view attribute) const;
  void set(std::string_view attribute, std::optional<Cause> cause);

  // One line per registry attribute, in registry order.
  std::string to_config() const;

  bool operator==(const CauseMapping&) const = default;

 private:
  std::map<std::string, Cause, std::less<>> table_;
};

struct AttributeStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;

  bool operator==(const AttributeStats&) const = default;
};

// Per-attribute aggregates over the frames seen so far in a session.
using FrameStats = std::map<std::string, AttributeStats, std::less<>>;

// Aggregates of every registry attribute over the session's frames.
// Throws std::invalid_argument when the session has no frames.
FrameStats frame_statistics(const SessionRecord& session);

struct Evidence {
  std::string attribute;
  std::string note;

  bool operator==(const Evidence&) const = default;
};

struct CauseEvidence {
  Cause cause = Cause::kLocomotion;
  std::vector<Evidence> evidence;  // never empty

  bool operator==(const CauseEvidence&) const = default;
};

struct CauseInference {
  std::vector<CauseEvidence> causes;      // first-hit order, no duplicates
  std::vector<Evidence> unmapped;         // top attributes with no cause
  std::vector<std::string> warnings;
};

// Maps the top_n ranked attributes to causes. top_n beyond the ranking size
// is clamped and reported in `warnings`. Throws std::invalid_argument when
// top_n is 0.
CauseInference infer_causes(const AttributeRanking& ranking, const FrameStats& stats,
                            std::size_t top_n,
                            const CauseMapping& mapping = CauseMapping::defaults());

struct Suggestion {
  Cause cause = Cause::kLocomotion;
  std::vector<Strategy> strategies;
  std::vector<Evidence> evidence;

  bool operator==(const Suggestion&) const = default;
};

inline constexpr double kDefaultAdviceThreshold = 0.5;

// 1 - P(class 0). Throws std::invalid_argument unless `prediction` is a
// probability vector over 2 or 4 classes.
double discomfort_probability(std::span<const double> prediction);

// One suggestion per cause when the discomfort probability exceeds
// `threshold`, otherwise none.
std::vector<Suggestion> advise(std::span<const double> prediction,
                               std::span<const CauseEvidence> causes,
                               double threshold = kDefaultAdviceThreshold,
                               const CauseStrategyMatrix& matrix = builtin_matrix());

}  // namespace cstk

#endif  // CSTK_ADVISOR_H_
