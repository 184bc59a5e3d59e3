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

#include "cstk/session.h"

#include <cmath>

#include "cstk/errors.h"

namespace cstk {
namespace {

void check(std::vector<Violation>& out, bool ok,
           std::optional<std::size_t> frame, const char* field,
           const char* message) {
  if (!ok) out.push_back({frame, field, message});
}

void check_questionnaire(std::vector<Violation>& out, const VrsqReport& report,
                         QuestionnairePhase expected, const char* field) {
  check(out, report.phase == expected, std::nullopt, field,
        "questionnaire phase");
  if (report.items.size() != kNumVrsqItems) {
    out.push_back({std::nullopt, field, "questionnaire completeness"});
    return;
  }
  const auto symptoms = vrsq_symptoms();
  for (std::size_t i = 0; i < kNumVrsqItems; ++i) {
    check(out, report.items[i].symptom == symptoms[i], std::nullopt, field,
          "questionnaire symptom order");
    check(out, report.items[i].score >= 0 && report.items[i].score <= 3,
          std::nullopt, field, "questionnaire score range");
  }
}

}  // namespace

VrsqReport VrsqReport::blank(QuestionnairePhase phase) {
  VrsqReport report;
  report.phase = phase;
  for (const auto symptom : vrsq_symptoms()) {
    report.items.push_back({std::string(symptom), 0});
  }
  return report;
}

std::string Violation::to_string() const {
  std::string out;
  if (frame_index) out = "frame " + std::to_string(*frame_index) + ": ";
  return out + field + ": " + message;
}

std::vector<Violation> validate_frame(const TelemetryFrame& f,
                                      const TelemetryFrame* previous,
                                      std::optional<std::size_t> index) {
  std::vector<Violation> out;
  const auto finite = [](double v) { return std::isfinite(v); };
  const auto angle = [](double v) { return v >= 0.0 && v < 360.0; };
  check(out, finite(f.timestamp) && f.timestamp >= 0.0, index, "timestamp",
        "timestamp range");
  if (previous != nullptr) {
    check(out, f.timestamp > previous->timestamp, index, "timestamp",
          "timestamp order");
  }
  check(out, finite(f.speed), index, "speed", "speed not finite");
  check(out, finite(f.acceleration), index, "acceleration",
        "acceleration not finite");
  check(out, angle(f.rotation_x), index, "rotation_x", "rotation_x range");
  check(out, angle(f.rotation_y), index, "rotation_y", "rotation_y range");
  check(out, angle(f.rotation_z), index, "rotation_z", "rotation_z range");
  check(out, finite(f.position_x), index, "position_x", "position_x not finite");
  check(out, finite(f.position_y), index, "position_y", "position_y not finite");
  check(out, finite(f.position_z), index, "position_z", "position_z not finite");
  check(out, f.region_of_interest >= 0, index, "region_of_interest",
        "region_of_interest range");
  check(out, f.fov_size > 0.0 && f.fov_size <= 180.0, index, "fov_size",
        "fov_size range");
  check(out, finite(f.frame_rate) && f.frame_rate > 0.0, index, "frame_rate",
        "frame_rate range");
  return out;
}

ValidationReport validate_session(const SessionRecord& record) {
  ValidationReport report;
  auto& out = report.violations;

  check(out, !record.session_id.empty(), std::nullopt, "session_id",
        "session_id empty");

  const UserProfile& p = record.profile;
  check(out, p.age >= 13, std::nullopt, "age", "age range");
  check(out, p.vr_experience >= 0 && p.vr_experience <= 3, std::nullopt,
        "vr_experience", "vr_experience range");

  check_questionnaire(out, record.pre_questionnaire, QuestionnairePhase::kPre,
                      "pre_questionnaire");
  if (record.post_questionnaire) {
    check_questionnaire(out, *record.post_questionnaire,
                        QuestionnairePhase::kPost, "post_questionnaire");
  }

  const GameConfig& c = record.config;
  check(out, c.camera_control_level >= 0 && c.camera_control_level <= 2,
        std::nullopt, "camera_control_level", "camera_control_level range");
  check(out, !c.auto_camera || c.camera_control_level < 2, std::nullopt,
        "auto_camera", "auto_camera requires camera_control_level < 2");

  check(out, !record.frames.empty(), std::nullopt, "frames", "no frames");
  for (std::size_t i = 0; i < record.frames.size(); ++i) {
    auto frame_violations = validate_frame(
        record.frames[i], i == 0 ? nullptr : &record.frames[i - 1], i);
    out.insert(out.end(), frame_violations.begin(), frame_violations.end());
  }
  return report;
}

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::kFemale: return "female";
    case Gender::kMale: return "male";
    case Gender::kOther: return "other";
  }
  return "?";
}

std::string_view to_string(Posture posture) {
  return posture == Posture::kSitting ? "sitting" : "standing";
}

std::string_view to_string(Eye eye) {
  return eye == Eye::kLeft ? "left" : "right";
}

std::string_view to_string(QuestionnairePhase phase) {
  return phase == QuestionnairePhase::kPre ? "pre" : "post";
}

Gender parse_gender(std::string_view text) {
  if (text == "female") return Gender::kFemale;
  if (text == "male") return Gender::kMale;
  if (text == "other") return Gender::kOther;
  throw LookupError("unknown gender '" + std::string(text) + "'");
}

Posture parse_posture(std::string_view text) {
  if (text == "sitting") return Posture::kSitting;
  if (text == "standing") return Posture::kStanding;
  throw LookupError("unknown posture '" + std::string(text) + "'");
}

Eye parse_eye(std::string_view text) {
  if (text == "left") return Eye::kLeft;
  if (text == "right") return Eye::kRight;
  throw LookupError("unknown dominant_eye '" + std::string(text) + "'");
}

QuestionnairePhase parse_phase(std::string_view text) {
  if (text == "pre") return QuestionnairePhase::kPre;
  if (text == "post") return QuestionnairePhase::kPost;
  throw LookupError("unknown questionnaire phase '" + std::string(text) + "'");
}

}  // namespace cstk
