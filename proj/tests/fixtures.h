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

// Small hand-built sessions shared by the unit tests.

#ifndef CSTK_TESTS_FIXTURES_H_
#define CSTK_TESTS_FIXTURES_H_

#include <optional>
#include <string>
#include <vector>

#include "cstk/session.h"

namespace cstk::testing {

inline TelemetryFrame frame_at(double t, std::optional<int> report = std::nullopt) {
  TelemetryFrame f;
  f.timestamp = t;
  f.speed = 10.0 + t;
  f.acceleration = 0.5;
  f.position_x = t;
  f.position_z = -t;
  if (report) f.reported_discomfort = discomfort_from_int(*report);
  return f;
}

// Frames at t = 1, 2, ..., n with reports placed at the given frame indices.
inline SessionRecord make_session(std::string id, Game game, std::size_t n,
                                  std::vector<std::pair<std::size_t, int>> reports = {{0, 0}}) {
  SessionRecord s;
  s.session_id = std::move(id);
  s.game = game;
  s.profile.age = 30;
  for (std::size_t i = 0; i < n; ++i) s.frames.push_back(frame_at(static_cast<double>(i + 1)));
  for (const auto& [index, level] : reports) {
    s.frames.at(index).reported_discomfort = discomfort_from_int(level);
  }
  return s;
}

inline std::string data_path(const std::string& name) {
  return std::string(CSTK_TEST_DATA_DIR) + "/" + name;
}

}  // namespace cstk::testing

#endif  // CSTK_TESTS_FIXTURES_H_
