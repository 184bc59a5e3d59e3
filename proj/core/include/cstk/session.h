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

#ifndef CSTK_SESSION_H_
#define CSTK_SESSION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cstk/attributes.h"

namespace cstk {

enum class Gender { kFemale = 0, kMale = 1, kOther = 2 };
enum class Posture { kSitting = 0, kStanding = 1 };
enum class Eye { kLeft = 0, kRight = 1 };

// Answers to the pre-session profile questionnaire.
struct UserProfile {
  Gender gender = Gender::kOther;
  int age = 18;
  int vr_experience = 0;  // 0 (never) .. 3 (frequent)
  bool flicker_sensitivity = false;
  bool pre_symptoms = false;
  bool wears_glasses = false;
  bool vision_impairment = false;
  Posture posture = Posture::kSitting;
  Eye dominant_eye = Eye::kRight;

  bool operator==(const UserProfile&) const = default;
};

enum class QuestionnairePhase { kPre, kPost };

struct VrsqItem {
  std::string symptom;
  int score = 0;  // 0..3

  bool operator==(const VrsqItem&) const = default;
};

struct VrsqReport {
  std::vector<VrsqItem> items;
  QuestionnairePhase phase = QuestionnairePhase::kPre;

  // All eight canonical symptoms scored zero.
  static VrsqReport blank(QuestionnairePhase phase);

  bool operator==(const VrsqReport&) const = default;
};

struct TelemetryFrame {
  double timestamp = 0.0;  // seconds since session start
  double speed = 0.0;
  double acceleration = 0.0;
  double rotation_x = 0.0;  // degrees, [0, 360)
  double rotation_y = 0.0;
  double rotation_z = 0.0;
  double position_x = 0.0;
  double position_y = 0.0;
  double position_z = 0.0;
  int region_of_interest = 0;
  double fov_size = 90.0;  // degrees, (0, 180]
  double frame_rate = 90.0;
  std::optional<DiscomfortLevel> reported_discomfort;

  bool operator==(const TelemetryFrame&) const = default;
};

struct GameConfig {
  bool static_rest_frame = false;
  bool haptic_feedback = false;
  int camera_control_level = 2;  // 0 none, 1 partial, 2 full user control
  bool dof_simulation = false;
  bool auto_camera = false;

  bool operator==(const GameConfig&) const = default;
};

struct SessionRecord {
  std::string session_id;
  Game game = Game::kRace;
  UserProfile profile;
  VrsqReport pre_questionnaire = VrsqReport::blank(QuestionnairePhase::kPre);
  std::optional<VrsqReport> post_questionnaire;
  GameConfig config;
  std::vector<TelemetryFrame> frames;

  bool operator==(const SessionRecord&) const = default;
};

struct Violation {
  std::optional<std::size_t> frame_index;
  std::string field;
  std::string message;

  std::string to_string() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant of a session (ranges, questionnaire
// completeness, frame timestamp order). Violations are returned, not thrown.
ValidationReport validate_session(const SessionRecord& record);

// Frame-only checks shared with the streaming scorer. `previous` is the
// prior frame of the same session, if any.
std::vector<Violation> validate_frame(const TelemetryFrame& frame,
                                      const TelemetryFrame* previous,
                                      std::optional<std::size_t> index);

std::string_view to_string(Gender gender);
std::string_view to_string(Posture posture);
std::string_view to_string(Eye eye);
std::string_view to_string(QuestionnairePhase phase);
Gender parse_gender(std::string_view text);
Posture parse_posture(std::string_view text);
Eye parse_eye(std::string_view text);
QuestionnairePhase parse_phase(std::string_view text);

}  // namespace cstk

#endif  // CSTK_SESSION_H_
