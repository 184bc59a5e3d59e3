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

#include "cstk/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "cstk/session_io.h"

namespace cstk {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSubstep = 0.05;  // seconds of simulated time per step

double wrap_degrees(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return d;
}

double segment_length(const Waypoint& a, const Waypoint& b) {
  return std::hypot(b.x - a.x, b.y - a.y, b.z - a.z);
}

// Arc-length lookup over a Path.
class PathCursor {
 public:
  explicit PathCursor(const Path& path) : path_(path) {
    const std::size_t n = path.segment_count();
    start_.reserve(n + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      start_.push_back(acc);
      acc += segment_length(point(i), point(i + 1));
    }
    start_.push_back(acc);
    length_ = acc;
  }

  double length() const { return length_; }

  // Segment index containing arc position s (wrapped onto the path).
  std::size_t segment_at(double s) const {
    const double u = wrap(s);
    const auto it = std::upper_bound(start_.begin(), start_.end() - 1, u);
    return static_cast<std::size_t>(std::distance(start_.begin(), it)) - 1;
  }

  Waypoint position(double s) const {
    const double u = wrap(s);
    const std::size_t i = segment_at(u);
    const Waypoint& a = point(i);
    const Waypoint& b = point(i + 1);
    const double len = start_[i + 1] - start_[i];
    const double f = len > 0.0 ? (u - start_[i]) / len : 0.0;
    return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.z + f * (b.z - a.z)};
  }

  // Yaw in the (x, z) plane and pitch, both in degrees, of segment i.
  double yaw(std::size_t i) const {
    const Waypoint& a = point(i);
    const Waypoint& b = point(i + 1);
    return std::atan2(b.z - a.z, b.x - a.x) * 180.0 / kPi;
  }
  double pitch(std::size_t i) const {
    const Waypoint& a = point(i);
    const Waypoint& b = point(i + 1);
    return std::atan2(b.y - a.y, std::hypot(b.x - a.x, b.z - a.z)) * 180.0 / kPi;
  }

  double max_curvature(double from, double distance) const {
    double best = 0.0;
    const std::size_t n = path_.segment_count();
    std::size_t i = segment_at(from);
    double covered = start_[i + 1] - wrap(from);
    best = std::abs(path_.curvature[i]);
    while (covered < distance) {
      i = (i + 1) % n;
      best = std::max(best, std::abs(path_.curvature[i]));
      covered += start_[i + 1] - start_[i];
    }
    return best;
  }

 private:
  const Waypoint& point(std::size_t i) const {
    return path_.waypoints[i % path_.waypoints.size()];
  }
  double wrap(double s) const {
    double u = std::fmod(s, length_);
    if (u < 0.0) u += length_;
    return u;
  }

  const Path& path_;
  std::vector<double> start_;
  double length_ = 0.0;
};

}  // namespace

double Path::length() const {
  double total = 0.0;
  for (std::size_t i = 0; i < segment_count(); ++i) {
    total += segment_length(waypoints[i], waypoints[(i + 1) % waypoints.size()]);
  }
  return total;
}

PathBuilder::PathBuilder(double step) : step_(step) {
  if (!(step > 0.0)) throw std::invalid_argument("path step must be positive");
}

PathBuilder& PathBuilder::straight(double length) {
  ++section_;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(length / step_)));
  const double d = length / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_ += d * std::cos(heading_);
    z_ += d * std::sin(heading_);
    points_.push_back({x_, 0.0, z_});
    curvature_.push_back(0.0);
    sections_.push_back(section_);
  }
  return *this;
}

PathBuilder& PathBuilder::arc(double radius, double degrees) {
  ++section_;
  const double sign = degrees >= 0.0 ? 1.0 : -1.0;
  const double turn = std::abs(degrees) * kPi / 180.0;
  const double length = radius * turn;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(length / step_)));
  const double cx = x_ - sign * radius * std::sin(heading_);
  const double cz = z_ + sign * radius * std::cos(heading_);
  for (std::size_t i = 1; i <= n; ++i) {
    const double h = heading_ + sign * turn * static_cast<double>(i) / n;
    const double px = cx + sign * radius * std::sin(h);
    const double pz = cz - sign * radius * std::cos(h);
    points_.push_back({px, 0.0, pz});
    curvature_.push_back(sign / radius);
    sections_.push_back(section_);
  }
  heading_ += sign * turn;
  x_ = points_.back().x;
  z_ = points_.back().z;
  return *this;
}

PathBuilder& PathBuilder::altitude(double base, double amplitude, double cycles) {
  alt_base_ = base;
  alt_amplitude_ = amplitude;
  alt_cycles_ = cycles;
  return *this;
}

Path PathBuilder::build(bool closed) const {
  Path path;
  path.closed = closed;
  path.waypoints = points_;
  path.curvature = curvature_;
  path.section = sections_;
  if (closed && path.waypoints.size() > 1) {
    const Waypoint& first = path.waypoints.front();
    const Waypoint& last = path.waypoints.back();
    if (std::hypot(last.x - first.x, last.z - first.z) < step_ * 0.5) {
      // The final point duplicates the start: its segment becomes the
      // closing segment.
      path.waypoints.pop_back();
    } else {
      path.curvature.push_back(0.0);
      path.section.push_back(section_ + 1);
    }
  }
  if (path.waypoints.size() < 3) {
    throw std::invalid_argument("path needs at least 3 waypoints");
  }
  if (alt_amplitude_ != 0.0 || alt_base_ != 0.0) {
    double total = 0.0;
    std::vector<double> s(path.waypoints.size(), 0.0);
    for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
      const auto& a = path.waypoints[i - 1];
      const auto& b = path.waypoints[i];
      total += std::hypot(b.x - a.x, b.z - a.z);
      s[i] = total;
    }
    if (closed) {
      total += std::hypot(path.waypoints.front().x - path.waypoints.back().x,
                          path.waypoints.front().z - path.waypoints.back().z);
    }
    for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
      path.waypoints[i].y =
          alt_base_ + alt_amplitude_ * std::sin(2.0 * kPi * alt_cycles_ * s[i] / total);
    }
  }
  return path;
}

Path path_from_waypoints(std::vector<Waypoint> waypoints, bool closed) {
  if (waypoints.size() < 3) {
    throw std::invalid_argument("path needs at least 3 waypoints");
  }
  Path path;
  path.closed = closed;
  path.waypoints = std::move(waypoints);
  const std::size_t n = path.waypoints.size();
  const std::size_t segments = path.segment_count();
  const auto heading = [&](std::size_t i) {
    const auto& a = path.waypoints[i % n];
    const auto& b = path.waypoints[(i + 1) % n];
    return std::atan2(b.z - a.z, b.x - a.x);
  };
  for (std::size_t i = 0; i < segments; ++i) {
    // Turning at the segment's end vertex.
    if (!closed && i + 1 == segments) {
      path.curvature.push_back(path.curvature.empty() ? 0.0 : path.curvature.back());
      break;
    }
    double turn = heading(i + 1) - heading(i);
    while (turn > kPi) turn -= 2.0 * kPi;
    while (turn < -kPi) turn += 2.0 * kPi;
    const double len = 0.5 * (segment_length(path.waypoints[i % n],
                                             path.waypoints[(i + 1) % n]) +
                              segment_length(path.waypoints[(i + 1) % n],
                                             path.waypoints[(i + 2) % n]));
    path.curvature.push_back(len > 0.0 ? turn / len : 0.0);
  }
  int section = 0;
  for (std::size_t i = 0; i < segments; ++i) {
    if (i > 0 && (path.curvature[i] == 0.0) != (path.curvature[i - 1] == 0.0)) {
      ++section;
    }
    path.section.push_back(section);
  }
  return path;
}

Path default_race_track() {
  // Rounded rectangle with four different corner radii; the straight
  // lengths are solved so the loop closes.
  const double a1 = 260.0, b1 = 120.0;
  const double r1 = 35.0, r2 = 70.0, r3 = 45.0, r4 = 60.0;
  const double a2 = a1 + r1 - r2 - r3 + r4;
  const double b2 = b1 + r1 + r2 - r3 - r4;
  return PathBuilder(2.0)
      .straight(a1).arc(r1, 90.0)
      .straight(b1).arc(r2, 90.0)
      .straight(a2).arc(r3, 90.0)
      .straight(b2).arc(r4, 90.0)
      .build(true);
}

Path default_flight_corridor() {
  const double a1 = 900.0, b1 = 500.0;
  const double r1 = 160.0, r2 = 260.0, r3 = 200.0, r4 = 220.0;
  const double a2 = a1 + r1 - r2 - r3 + r4;
  const double b2 = b1 + r1 + r2 - r3 - r4;
  return PathBuilder(4.0)
      .straight(a1).arc(r1, 90.0)
      .straight(b1).arc(r2, 90.0)
      .straight(a2).arc(r3, 90.0)
      .straight(b2).arc(r4, 90.0)
      .altitude(120.0, 35.0, 3.0)
      .build(true);
}

void SimParams::validate() const {
  const RiskWeights& w = weights;
  if (w.time < 0 || w.rotation < 0 || w.acceleration < 0 || w.profile < 0) {
    throw std::invalid_argument("risk weights must be non-negative");
  }
  if (std::abs(w.time + w.rotation + w.acceleration + w.profile - 1.0) > 1e-9) {
    throw std::invalid_argument("risk weights must sum to 1");
  }
  if (!(0.0 < thresholds[0] && thresholds[0] < thresholds[1] &&
        thresholds[1] < thresholds[2] && thresholds[2] < 1.0)) {
    throw std::invalid_argument("thresholds must increase strictly inside (0,1)");
  }
  if (!(duration_s > 0.0) || !(frame_interval_s > 0.0)) {
    throw std::invalid_argument("duration and frame interval must be positive");
  }
  if (!(omega_ref > 0.0) || !(accel_ref > 0.0)) {
    throw std::invalid_argument("omega_ref and accel_ref must be positive");
  }
  if (!(report_prob >= 0.0 && report_prob <= 1.0)) {
    throw std::invalid_argument("report_prob must lie in [0,1]");
  }
}

std::size_t SimParams::frame_count() const {
  return static_cast<std::size_t>(
      std::max(1.0, std::floor(duration_s / frame_interval_s + 1e-9)));
}

double profile_score(const UserProfile& p) {
  const double inexperience = (3.0 - std::clamp(p.vr_experience, 0, 3)) / 3.0;
  return ((p.pre_symptoms ? 1.0 : 0.0) + (p.flicker_sensitivity ? 1.0 : 0.0) +
          inexperience) /
         3.0;
}

double risk_score(double timestamp, double rotation_rate_z, double acceleration,
                  double profile, const SimParams& params) {
  const RiskWeights& w = params.weights;
  const double r = w.time * (timestamp / params.duration_s) +
                   w.rotation * std::min(std::abs(rotation_rate_z) / params.omega_ref, 1.0) +
                   w.acceleration * std::min(std::abs(acceleration) / params.accel_ref, 1.0) +
                   w.profile * profile;
  return std::clamp(r, 0.0, 1.0);
}

DiscomfortLevel risk_level(double risk, const std::array<double, 3>& t) {
  if (risk < t[0]) return DiscomfortLevel::kNone;
  if (risk < t[1]) return DiscomfortLevel::kSlight;
  if (risk < t[2]) return DiscomfortLevel::kModerate;
  return DiscomfortLevel::kSevere;
}

std::vector<double> yaw_rates(std::span<const TelemetryFrame> frames) {
  std::vector<double> rates(frames.size(), 0.0);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    double d = std::fmod(frames[i].rotation_z - frames[i - 1].rotation_z + 540.0, 360.0) - 180.0;
    rates[i] = d / (frames[i].timestamp - frames[i - 1].timestamp);
  }
  return rates;
}

GeneratedSession generate_session(Game game, std::uint64_t seed,
                                  const UserProfile& profile,
                                  const GameConfig& config,
                                  const SimParams& params) {
  params.validate();
  const Path& path = game == Game::kRace ? params.track : params.corridor;
  if (path.waypoints.size() < 3) {
    throw std::invalid_argument("path needs at least 3 waypoints");
  }
  const VehicleModel& vehicle =
      game == Game::kRace ? params.race_vehicle : params.flight_vehicle;
  const PathCursor cursor(path);
  Rng rng(seed);

  char id[40];
  std::snprintf(id, sizeof(id), "%s-%016llx", std::string(to_string(game)).c_str(),
                static_cast<unsigned long long>(seed));

  GeneratedSession out;
  SessionRecord& session = out.session;
  session.session_id = id;
  session.game = game;
  session.profile = profile;
  session.pre_questionnaire = sample_questionnaire(rng, profile, QuestionnairePhase::kPre);
  session.config = config;

  // Per-driver style: how hard they push on straights.
  const double style = rng.uniform(0.8, 1.15);
  const double cruise = vehicle.cruise_speed * style;
  const double start_offset = rng.uniform(0.0, cursor.length());
  const double fov = game == Game::kRace ? 90.0 : 100.0;

  double s = start_offset;
  double v = 0.5 * cruise;
  double a = 0.0;
  double wander = 0.0;
  const std::size_t frames = params.frame_count();
  const auto steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(params.frame_interval_s / kSubstep)));
  const double dt = params.frame_interval_s / static_cast<double>(steps);
  const double decay = std::exp(-dt / 5.0);
  const double shock = vehicle.speed_jitter * std::sqrt(1.0 - decay * decay);

  session.frames.reserve(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    if (k > 0) {
      for (std::size_t step = 0; step < steps; ++step) {
        wander = wander * decay + shock * rng.normal();
        const double lookahead = v * v / (2.0 * vehicle.max_brake) + 0.5 * v + 5.0;
        const double kappa = cursor.max_curvature(s, lookahead);
        double target = cruise + wander;
        if (kappa > 0.0) target = std::min(target, std::sqrt(vehicle.lateral_accel / kappa));
        a = std::clamp(2.0 * (target - v), -vehicle.max_brake, vehicle.max_accel);
        v = std::max(v + a * dt, 1.0);
        s += v * dt;
      }
    }
    const std::size_t seg = cursor.segment_at(s);
    const Waypoint p = cursor.position(s);
    TelemetryFrame f;
    f.timestamp = static_cast<double>(k) * params.frame_interval_s;
    f.speed = v;
    f.acceleration = a;
    f.rotation_z = wrap_degrees(cursor.yaw(seg));
    if (game == Game::kFlight) {
      f.rotation_x = wrap_degrees(cursor.pitch(seg));
      const double bank = std::atan(v * v * path.curvature[seg] / 9.81) * 180.0 / kPi;
      f.rotation_y = wrap_degrees(bank);
    }
    f.position_x = p.x;
    f.position_y = p.y;
    f.position_z = p.z;
    f.region_of_interest = path.section[seg];
    f.fov_size = fov;
    f.frame_rate = std::max(30.0, 90.0 - std::abs(rng.normal()) * 1.5);
    session.frames.push_back(f);
  }

  const double susceptibility = profile_score(profile);
  const auto rates = yaw_rates(session.frames);
  RiskTrace& trace = out.trace;
  int worst = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    TelemetryFrame& f = session.frames[k];
    const double r = risk_score(f.timestamp, rates[k], f.acceleration, susceptibility, params);
    const DiscomfortLevel level = risk_level(r, params.thresholds);
    trace.timestamps.push_back(f.timestamp);
    trace.risk.push_back(r);
    trace.level.push_back(level);
    worst = std::max(worst, static_cast<int>(level));
    const bool voiced = rng.bernoulli(params.report_prob);
    if (k == 0 || voiced) f.reported_discomfort = level;
  }

  VrsqReport post = session.pre_questionnaire;
  post.phase = QuestionnairePhase::kPost;
  for (auto& item : post.items) {
    item.score = std::min(3, item.score + worst / 2 + (rng.bernoulli(0.3) ? 1 : 0));
  }
  session.post_questionnaire = std::move(post);
  return out;
}

UserProfile sample_profile(Rng& rng) {
  UserProfile p;
  const double g = rng.uniform01();
  p.gender = g < 0.3 ? Gender::kFemale : (g < 0.95 ? Gender::kMale : Gender::kOther);
  p.age = 18 + static_cast<int>(rng.uniform_int(43));
  p.vr_experience = static_cast<int>(rng.uniform_int(4));
  p.flicker_sensitivity = rng.bernoulli(0.2);
  p.pre_symptoms = rng.bernoulli(0.2);
  p.wears_glasses = rng.bernoulli(0.4);
  p.vision_impairment = rng.bernoulli(0.15);
  p.posture = rng.bernoulli(0.7) ? Posture::kSitting : Posture::kStanding;
  p.dominant_eye = rng.bernoulli(0.7) ? Eye::kRight : Eye::kLeft;
  return p;
}

VrsqReport sample_questionnaire(Rng& rng, const UserProfile& profile,
                                QuestionnairePhase phase) {
  VrsqReport report = VrsqReport::blank(phase);
  const double bump = profile.pre_symptoms ? 0.35 : 0.1;
  for (auto& item : report.items) {
    int score = 0;
    while (score < 3 && rng.bernoulli(bump)) ++score;
    item.score = score;
  }
  return report;
}

GameConfig default_config(Game game) {
  GameConfig c;
  if (game == Game::kRace) {
    c.static_rest_frame = true;  // car cabin
    c.haptic_feedback = true;
    c.camera_control_level = 1;
    c.dof_simulation = false;
    c.auto_camera = false;
  } else {
    c.static_rest_frame = false;
    c.haptic_feedback = false;
    c.camera_control_level = 2;
    c.dof_simulation = true;
    c.auto_camera = false;
  }
  return c;
}

Corpus generate_corpus(const CorpusSpec& spec, std::uint64_t seed,
                       const SimParams& params) {
  params.validate();
  Corpus corpus;
  std::size_t ordinal = 0;
  const auto emit = [&](Game game, std::size_t sessions, std::size_t rows) {
    if (sessions == 0) return;
    for (std::size_t i = 0; i < sessions; ++i, ++ordinal) {
      const std::size_t frames = rows / sessions + (i < rows % sessions ? 1 : 0);
      SimParams local = params;
      local.frame_interval_s = params.duration_s / static_cast<double>(std::max<std::size_t>(frames, 1));
      const std::uint64_t session_seed = mix_seed(seed, ordinal);
      Rng profile_rng(mix_seed(session_seed, 0x9f0f11e5ULL));
      const UserProfile profile = sample_profile(profile_rng);
      GeneratedSession g =
          generate_session(game, session_seed, profile, default_config(game), local);
      char id[32];
      std::snprintf(id, sizeof(id), "%s-%03zu", std::string(to_string(game)).c_str(), i);
      g.session.session_id = id;
      corpus.sessions.push_back(std::move(g.session));
      corpus.traces.push_back(std::move(g.trace));
    }
  };
  emit(Game::kRace, spec.race_sessions, spec.race_rows);
  emit(Game::kFlight, spec.flight_sessions, spec.flight_rows);
  return corpus;
}

void write_trace_csv(std::ostream& out, std::span<const SessionRecord> sessions,
                     std::span<const RiskTrace> traces) {
  out << "session_id,timestamp,risk,latent_level\n";
  for (std::size_t i = 0; i < sessions.size() && i < traces.size(); ++i) {
    const RiskTrace& t = traces[i];
    for (std::size_t k = 0; k < t.risk.size(); ++k) {
      out << sessions[i].session_id << ',' << format_double(t.timestamps[k]) << ','
          << format_double(t.risk[k]) << ',' << static_cast<int>(t.level[k]) << '\n';
    }
  }
}

}  // namespace cstk
