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

#include "cstk/session_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cstk/errors.h"
#include "json_codec.h"

namespace cstk {
namespace internal {
namespace {

const Json& field(const Json& j, const char* context, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string(context) + ": missing field '" + key + "'");
  }
  return *it;
}

double get_number(const Json& j, const char* context, const char* key) {
  const Json& v = field(j, context, key);
  if (!v.is_number()) {
    throw ParseError(std::string(context) + ": field '" + key +
                     "' must be a number");
  }
  return v.get<double>();
}

int get_int(const Json& j, const char* context, const char* key) {
  const Json& v = field(j, context, key);
  if (!v.is_number_integer()) {
    throw ParseError(std::string(context) + ": field '" + key +
                     "' must be an integer");
  }
  return v.get<int>();
}

bool get_bool(const Json& j, const char* context, const char* key) {
  const Json& v = field(j, context, key);
  if (!v.is_boolean()) {
    throw ParseError(std::string(context) + ": field '" + key +
                     "' must be true or false");
  }
  return v.get<bool>();
}

std::string get_string(const Json& j, const char* context, const char* key) {
  const Json& v = field(j, context, key);
  if (!v.is_string()) {
    throw ParseError(std::string(context) + ": field '" + key +
                     "' must be a string");
  }
  return v.get<std::string>();
}

void require_object(const Json& j, const char* context) {
  if (!j.is_object()) throw ParseError(std::string(context) + " must be an object");
}

template <typename F>
auto enum_field(const Json& j, const char* context, const char* key, F parse) {
  try {
    return parse(get_string(j, context, key));
  } catch (const LookupError& e) {
    throw ParseError(std::string(context) + ": " + e.what());
  }
}

}  // namespace

void require_known_keys(const Json& object, const char* context,
                        std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) {
      throw ParseError(std::string(context) + ": unknown field '" + key + "'");
    }
  }
}

Json to_json(const UserProfile& p) {
  return Json{{"gender", to_string(p.gender)},
              {"age", p.age},
              {"vr_experience", p.vr_experience},
              {"flicker_sensitivity", p.flicker_sensitivity},
              {"pre_symptoms", p.pre_symptoms},
              {"wears_glasses", p.wears_glasses},
              {"vision_impairment", p.vision_impairment},
              {"posture", to_string(p.posture)},
              {"dominant_eye", to_string(p.dominant_eye)}};
}

Json to_json(const VrsqReport& r) {
  Json items = Json::array();
  for (const auto& item : r.items) {
    items.push_back(Json{{"symptom_name", item.symptom}, {"score", item.score}});
  }
  return Json{{"items", std::move(items)}, {"phase", to_string(r.phase)}};
}

Json to_json(const GameConfig& c) {
  return Json{{"static_rest_frame", c.static_rest_frame},
              {"haptic_feedback", c.haptic_feedback},
              {"camera_control_level", c.camera_control_level},
              {"dof_simulation", c.dof_simulation},
              {"auto_camera", c.auto_camera}};
}

Json to_json(const TelemetryFrame& f) {
  Json j{{"timestamp", f.timestamp},
         {"speed", f.speed},
         {"acceleration", f.acceleration},
         {"rotation_x", f.rotation_x},
         {"rotation_y", f.rotation_y},
         {"rotation_z", f.rotation_z},
         {"position_x", f.position_x},
         {"position_y", f.position_y},
         {"position_z", f.position_z},
         {"region_of_interest", f.region_of_interest},
         {"fov_size", f.fov_size},
         {"frame_rate", f.frame_rate}};
  if (f.reported_discomfort) {
    j["reported_discomfort"] = static_cast<int>(*f.reported_discomfort);
  } else {
    j["reported_discomfort"] = nullptr;
  }
  return j;
}

Json to_json(const SessionRecord& s) {
  Json frames = Json::array();
  for (const auto& f : s.frames) frames.push_back(to_json(f));
  Json j{{"session_id", s.session_id},
         {"game", to_string(s.game)},
         {"profile", to_json(s.profile)},
         {"pre_questionnaire", to_json(s.pre_questionnaire)}};
  j["post_questionnaire"] =
      s.post_questionnaire ? to_json(*s.post_questionnaire) : Json(nullptr);
  j["config"] = to_json(s.config);
  j["frames"] = std::move(frames);
  return j;
}

UserProfile profile_from_json(const Json& j) {
  constexpr const char* ctx = "profile";
  require_object(j, ctx);
  require_known_keys(j, ctx,
                     {"gender", "age", "vr_experience", "flicker_sensitivity",
                      "pre_symptoms", "wears_glasses", "vision_impairment",
                      "posture", "dominant_eye"});
  UserProfile p;
  p.gender = enum_field(j, ctx, "gender", parse_gender);
  p.age = get_int(j, ctx, "age");
  p.vr_experience = get_int(j, ctx, "vr_experience");
  p.flicker_sensitivity = get_bool(j, ctx, "flicker_sensitivity");
  p.pre_symptoms = get_bool(j, ctx, "pre_symptoms");
  p.wears_glasses = get_bool(j, ctx, "wears_glasses");
  p.vision_impairment = get_bool(j, ctx, "vision_impairment");
  p.posture = enum_field(j, ctx, "posture", parse_posture);
  p.dominant_eye = enum_field(j, ctx, "dominant_eye", parse_eye);
  return p;
}

VrsqReport questionnaire_from_json(const Json& j) {
  constexpr const char* ctx = "questionnaire";
  require_object(j, ctx);
  require_known_keys(j, ctx, {"items", "phase"});
  VrsqReport r;
  r.phase = enum_field(j, ctx, "phase", parse_phase);
  const Json& items = field(j, ctx, "items");
  if (!items.is_array()) throw ParseError("questionnaire: 'items' must be an array");
  for (const auto& item : items) {
    require_object(item, "questionnaire item");
    require_known_keys(item, "questionnaire item", {"symptom_name", "score"});
    r.items.push_back({get_string(item, "questionnaire item", "symptom_name"),
                       get_int(item, "questionnaire item", "score")});
  }
  return r;
}

GameConfig config_from_json(const Json& j) {
  constexpr const char* ctx = "config";
  require_object(j, ctx);
  require_known_keys(j, ctx,
                     {"static_rest_frame", "haptic_feedback",
                      "camera_control_level", "dof_simulation", "auto_camera"});
  GameConfig c;
  c.static_rest_frame = get_bool(j, ctx, "static_rest_frame");
  c.haptic_feedback = get_bool(j, ctx, "haptic_feedback");
  c.camera_control_level = get_int(j, ctx, "camera_control_level");
  c.dof_simulation = get_bool(j, ctx, "dof_simulation");
  c.auto_camera = get_bool(j, ctx, "auto_camera");
  return c;
}

TelemetryFrame frame_from_json(const Json& j) {
  constexpr const char* ctx = "frame";
  require_object(j, ctx);
  TelemetryFrame f;
  f.timestamp = get_number(j, ctx, "timestamp");
  f.speed = get_number(j, ctx, "speed");
  f.acceleration = get_number(j, ctx, "acceleration");
  f.rotation_x = get_number(j, ctx, "rotation_x");
  f.rotation_y = get_number(j, ctx, "rotation_y");
  f.rotation_z = get_number(j, ctx, "rotation_z");
  f.position_x = get_number(j, ctx, "position_x");
  f.position_y = get_number(j, ctx, "position_y");
  f.position_z = get_number(j, ctx, "position_z");
  f.region_of_interest = get_int(j, ctx, "region_of_interest");
  f.fov_size = get_number(j, ctx, "fov_size");
  f.frame_rate = get_number(j, ctx, "frame_rate");
  const auto it = j.find("reported_discomfort");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw ParseError("frame: field 'reported_discomfort' must be an integer");
    }
    try {
      f.reported_discomfort = discomfort_from_int(it->get<int>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("frame: reported_discomfort: ") + e.what());
    }
  }
  return f;
}

SessionRecord session_from_json(const Json& j) {
  constexpr const char* ctx = "session";
  require_object(j, ctx);
  require_known_keys(j, ctx,
                     {"session_id", "game", "profile", "pre_questionnaire",
                      "post_questionnaire", "config", "frames"});
  SessionRecord s;
  s.session_id = get_string(j, ctx, "session_id");
  s.game = enum_field(j, ctx, "game", parse_game);
  s.profile = profile_from_json(field(j, ctx, "profile"));
  s.pre_questionnaire = questionnaire_from_json(field(j, ctx, "pre_questionnaire"));
  const auto post = j.find("post_questionnaire");
  if (post != j.end() && !post->is_null()) {
    s.post_questionnaire = questionnaire_from_json(*post);
  }
  s.config = config_from_json(field(j, ctx, "config"));
  const Json& frames = field(j, ctx, "frames");
  if (!frames.is_array()) throw ParseError("session: 'frames' must be an array");
  s.frames.reserve(frames.size());
  for (const auto& frame : frames) {
    require_known_keys(frame, "frame",
                       {"timestamp", "speed", "acceleration", "rotation_x",
                        "rotation_y", "rotation_z", "position_x", "position_y",
                        "position_z", "region_of_interest", "fov_size",
                        "frame_rate", "reported_discomfort"});
    s.frames.push_back(frame_from_json(frame));
  }
  return s;
}

}  // namespace internal

DataFormat parse_format(std::string_view text) {
  if (text == "jsonl") return DataFormat::kJsonl;
  if (text == "csv") return DataFormat::kCsv;
  throw LookupError("unknown format '" + std::string(text) +
                    "' (expected jsonl or csv)");
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string session_to_json(const SessionRecord& session) {
  return internal::to_json(session).dump();
}

SessionRecord session_from_json(std::string_view text) {
  internal::Json j;
  try {
    j = internal::Json::parse(text);
  } catch (const internal::Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return internal::session_from_json(j);
}

std::vector<SessionRecord> parse_sessions(std::istream& in, DataFormat format) {
  if (format == DataFormat::kCsv) {
    throw std::invalid_argument(
        "CSV files hold assembled feature rows; read them with "
        "read_features_csv");
  }
  std::vector<SessionRecord> sessions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    SessionRecord session;
    try {
      session = session_from_json(line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    const auto report = validate_session(session);
    if (!report.ok()) {
      throw ParseError("session " + session.session_id + ": " +
                           report.violations.front().to_string(),
                       line_no);
    }
    sessions.push_back(std::move(session));
  }
  return sessions;
}

std::vector<SessionRecord> parse_sessions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_sessions(in, DataFormat::kJsonl);
}

void write_sessions_jsonl(std::ostream& out,
                          std::span<const SessionRecord> sessions) {
  for (const auto& s : sessions) out << session_to_json(s) << '\n';
}

void write_features_csv(std::ostream& out, const Dataset& dataset) {
  for (const auto& name : dataset.schema) out << name << ',';
  out << "label,session_id,frame_timestamp\n";
  for (const auto& row : dataset.rows) {
    for (const double v : row.values) out << format_double(v) << ',';
    out << row.label << ',' << row.session_id << ','
        << format_double(row.frame_timestamp) << '\n';
  }
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(std::string_view cell, std::size_t line_no,
                    std::string_view column) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ParseError("column " + std::string(column) + ": '" +
                         std::string(cell) + "' is not a number",
                     line_no);
  }
  return v;
}

}  // namespace

Dataset read_features_csv(std::istream& in, LabelScheme scheme) {
  Dataset dataset;
  dataset.scheme = scheme;
  std::string line;
  if (!std::getline(in, line)) return dataset;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv(line);
  const auto names = registry_names();
  const std::size_t expected = names.size() + 3;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const bool ok =
        i < names.size()  ? header[i] == names[i]
        : i == names.size()     ? header[i] == "label"
        : i == names.size() + 1 ? header[i] == "session_id"
        : i == names.size() + 2 ? header[i] == "frame_timestamp"
                                : false;
    if (!ok) {
      throw ParseError("unexpected column '" + std::string(header[i]) +
                           "' at position " + std::to_string(i),
                       1);
    }
  }
  if (header.size() != expected) {
    throw ParseError("header has " + std::to_string(header.size()) +
                         " columns, expected " + std::to_string(expected),
                     1);
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != expected) {
      throw ParseError("row has " + std::to_string(cells.size()) +
                           " cells, expected " + std::to_string(expected),
                       line_no);
    }
    FeatureVector row;
    row.values.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      row.values.push_back(parse_double(cells[i], line_no, names[i]));
    }
    const double label = parse_double(cells[names.size()], line_no, "label");
    if (label != static_cast<int>(label) || label < 0 ||
        label >= static_cast<double>(class_count(scheme))) {
      throw ParseError("label " + std::string(cells[names.size()]) +
                           " invalid for scheme " + std::string(to_string(scheme)),
                       line_no);
    }
    row.label = static_cast<int>(label);
    row.session_id = std::string(cells[names.size() + 1]);
    row.frame_timestamp = parse_double(cells[names.size() + 2], line_no, "frame_timestamp");
    if (dataset.provenance.empty() || dataset.provenance.back() != row.session_id) {
      dataset.provenance.push_back(row.session_id);
    }
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

}  // namespace cstk
