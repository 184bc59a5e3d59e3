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

#ifndef CSTK_HEAT_H_
#define CSTK_HEAT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cstk/session.h"

namespace cstk {

// Ground-plane rectangle in scene units.
struct HeatBounds {
  double min_x = 0.0;
  double min_z = 0.0;
  double max_x = 1.0;
  double max_z = 1.0;

  bool operator==(const HeatBounds&) const = default;
};

struct HeatCell {
  std::array<std::uint64_t, 4> counts{};  // frames per discomfort level

  std::uint64_t total() const;
  // Mean level; 0 for an empty cell.
  double mean() const;
  bool operator==(const HeatCell&) const = default;
};

inline constexpr std::size_t kDefaultHeatResolution = 64;

class HeatGrid {
 public:
  // Throws std::invalid_argument on zero resolution or empty bounds.
  HeatGrid(HeatBounds bounds, std::size_t nx, std::size_t nz);

  const HeatBounds& bounds() const { return bounds_; }
  std::size_t nx() const { return nx_; }
  std::size_t nz() const { return nz_; }

  const HeatCell& cell(std::size_t ix, std::size_t iz) const { return cells_[iz * nx_ + ix]; }
  HeatCell& cell(std::size_t ix, std::size_t iz) { return cells_[iz * nx_ + ix]; }

  // Cell holding (x, z); points outside the bounds fall in the edge cell.
  std::pair<std::size_t, std::size_t> locate(double x, double z) const;
  std::pair<double, double> center(std::size_t ix, std::size_t iz) const;

  void add(double x, double z, DiscomfortLevel level);
  std::uint64_t total() const;

  bool operator==(const HeatGrid&) const = default;

 private:
  HeatBounds bounds_;
  std::size_t nx_;
  std::size_t nz_;
  std::vector<HeatCell> cells_;
};

// Extent of the (x, z) positions of every labeled frame; a degenerate axis
// is widened by 0.5 on each side. Throws std::invalid_argument when no frame
// is labeled.
HeatBounds labeled_bounds(std::span<const SessionRecord> sessions);

// Bins every frame of each session that carries at least one report, using
// quarterly levels carried forward from the latest report. Throws
// std::invalid_argument when no frame is labeled.
HeatGrid aggregate_track_heat(std::span<const SessionRecord> sessions,
                              std::size_t nx = kDefaultHeatResolution,
                              std::size_t nz = kDefaultHeatResolution,
                              std::optional<HeatBounds> bounds = std::nullopt);

// Value of profile attribute `facet` as used for grouping ("female", "34",
// "true", ...). Throws LookupError for an unknown name and
// std::invalid_argument for a non-profile attribute.
std::string facet_value(const UserProfile& profile, std::string_view facet);

// One grid per facet value, all over the bounds of the full input so the
// grids are cellwise comparable and sum to the unfaceted grid.
std::map<std::string, HeatGrid> facet_by(std::span<const SessionRecord> sessions,
                                         std::string_view facet,
                                         std::size_t nx = kDefaultHeatResolution,
                                         std::size_t nz = kDefaultHeatResolution);

// Colors for levels 0, 1, 2 and 3; means in between are interpolated.
using HeatPalette = std::array<std::string, 4>;
const HeatPalette& default_palette();

// Header "ix,iz,center_x,center_z,count_0,count_1,count_2,count_3,mean" and
// one row per nonzero cell, iz-major.
std::string export_heat_csv(const HeatGrid& grid);

// One rect per nonzero cell, z increasing upwards.
std::string export_heat_svg(const HeatGrid& grid, const HeatPalette& palette = default_palette(),
                            double cell_px = 8.0);

// Inverse of export_heat_csv given the grid geometry. Throws ParseError.
HeatGrid parse_heat_csv(std::string_view text, HeatBounds bounds, std::size_t nx,
                        std::size_t nz);

// Color for `mean` in [0, 3] as "#rrggbb".
std::string heat_color(double mean, const HeatPalette& palette = default_palette());

}  // namespace cstk

#endif  // CSTK_HEAT_H_
