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

#ifndef CSTK_SYNTH_H_
#define CSTK_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cstk/random.h"
#include "cstk/session.h"

namespace cstk {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// A densely sampled path. curvature[i] is the signed heading change per
// unit length (rad/unit) on segment i (waypoint i to i+1, wrapping when the
// path is closed). section[i] groups segments into straights and curves and
// becomes the frame's region_of_interest.
struct Path {
  std::vector<Waypoint> waypoints;
  std::vector<double> curvature;
  std::vector<int> section;
  bool closed = true;

  std::size_t segment_count() const {
    return closed ? waypoints.size() : waypoints.size() - 1;
  }
  double length() const;
};

// Builds a planar (x, z) path from straights and circular arcs at a fixed
// sampling step. Each add_* call starts a new section.
class PathBuilder {
 public:
  explicit PathBuilder(double step = 2.0);

  PathBuilder& straight(double length);
  // Positive degrees turn left.
  PathBuilder& arc(double radius, double degrees);
  // Adds a height profile y(s) = base + amplitude * sin(2 pi cycles s / L).
  PathBuilder& altitude(double base, double amplitude, double cycles);

  // Throws std::invalid_argument for fewer than 3 waypoints.
  Path build(bool closed) const;

 private:
  double step_;
  double x_ = 0.0, z_ = 0.0, heading_ = 0.0;
  int section_ = -1;
  double alt_base_ = 0.0, alt_amplitude_ = 0.0, alt_cycles_ = 0.0;
  std::vector<Waypoint> points_{{0.0, 0.0, 0.0}};
  std::vector<double> curvature_;
  std::vector<int> sections_;
};

// Computes curvature from raw waypoints (turning angle over mean adjacent
// segment length). Throws std::invalid_argument for fewer than 3 waypoints.
Path path_from_waypoints(std::vector<Waypoint> waypoints, bool closed);

Path default_race_track();
Path default_flight_corridor();

struct VehicleModel {
  double cruise_speed = 32.0;   // units/s on straights
  double lateral_accel = 9.0;   // cap on v^2 * |curvature|
  double max_accel = 4.0;       // units/s^2
  double max_brake = 8.0;       // units/s^2
  double speed_jitter = 1.5;    // sd of the driver's target-speed wander
};

struct RiskWeights {
  double time = 0.4;
  double rotation = 0.3;
  double acceleration = 0.2;
  double profile = 0.1;
};

struct SimParams {
  double duration_s = 300.0;
  double frame_interval_s = 1.5;
  Path track = default_race_track();
  Path corridor = default_flight_corridor();
  VehicleModel race_vehicle{};
  VehicleModel flight_vehicle{55.0, 14.0, 3.0, 5.0, 2.0};
  RiskWeights weights{};
  std::array<double, 3> thresholds{0.25, 0.5, 0.75};
  double report_prob = 0.15;
  double omega_ref = 12.0;  // deg/s at which the rotation term saturates
  double accel_ref = 4.0;   // units/s^2 at which the acceleration term saturates

  // Throws std::invalid_argument unless weights are non-negative and sum to
  // 1, thresholds increase strictly inside (0,1), and rates are positive.
  void validate() const;
  std::size_t frame_count() const;
};

// Fixed affine susceptibility score in [0,1]: mean of pre_symptoms,
// flicker_sensitivity and inverted VR experience.
double profile_score(const UserProfile& profile);

// Latent risk r in [0,1] from exposure time, yaw rate, acceleration and the
// profile score.
double risk_score(double timestamp, double rotation_rate_z, double acceleration,
                  double profile_score, const SimParams& params);

// Threshold map from r to a discomfort level.
DiscomfortLevel risk_level(double risk, const std::array<double, 3>& thresholds);

// Yaw rate (deg/s) of each frame from the stored rotation_z values: wrapped
// backward difference over the timestamp gap, 0 for the first frame.
std::vector<double> yaw_rates(std::span<const TelemetryFrame> frames);

struct RiskTrace {
  std::vector<double> timestamps;
  std::vector<double> risk;
  std::vector<DiscomfortLevel> level;
};

struct GeneratedSession {
  SessionRecord session;
  RiskTrace trace;
};

// Simulates one session. Deterministic in (game, seed, profile, config,
// params). Throws std::invalid_argument for invalid params or a degenerate
// path.
GeneratedSession generate_session(Game game, std::uint64_t seed,
                                  const UserProfile& profile,
                                  const GameConfig& config,
                                  const SimParams& params);

// Session counts and target row totals per game.
struct CorpusSpec {
  std::size_t race_sessions = 20;
  std::size_t flight_sessions = 27;
  std::size_t race_rows = 3993;
  std::size_t flight_rows = 5397;
};

struct Corpus {
  std::vector<SessionRecord> sessions;
  std::vector<RiskTrace> traces;  // parallel to sessions
};

// Sampling distribution of participant profiles and questionnaires.
UserProfile sample_profile(Rng& rng);
VrsqReport sample_questionnaire(Rng& rng, const UserProfile& profile,
                                QuestionnairePhase phase);
GameConfig default_config(Game game);

// Generates race sessions then flight sessions. Each game's target row
// count is split evenly over its sessions (frame interval per session is
// duration / frames), so assembled scenario row counts equal the targets.
Corpus generate_corpus(const CorpusSpec& spec, std::uint64_t seed,
                       const SimParams& params = {});

// Sidecar CSV: session_id,timestamp,risk,latent_level.
void write_trace_csv(std::ostream& out, std::span<const SessionRecord> sessions,
                     std::span<const RiskTrace> traces);

}  // namespace cstk

#endif  // CSTK_SYNTH_H_
