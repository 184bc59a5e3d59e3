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

#include "cstk/heat.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "cstk/attributes.h"
#include "cstk/dataset.h"
#include "cstk/errors.h"
#include "cstk/session_io.h"

namespace cstk {
namespace {

bool has_report(const SessionRecord& s) {
  return std::any_of(s.frames.begin(), s.frames.end(),
                     [](const TelemetryFrame& f) { return f.reported_discomfort.has_value(); });
}

std::size_t bin(double v, double lo, double hi, std::size_t n) {
  const double t = (v - lo) / (hi - lo) * static_cast<double>(n);
  if (!(t > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(t), n - 1);
}

struct Rgb {
  int r, g, b;
};

Rgb parse_hex(const std::string& color) {
  if (color.size() != 7 || color[0] != '#') {
    throw std::invalid_argument("palette colors must look like #rrggbb, got '" + color + "'");
  }
  int v[3];
  for (int i = 0; i < 3; ++i) {
    const char* first = color.data() + 1 + 2 * i;
    const auto res = std::from_chars(first, first + 2, v[i], 16);
    if (res.ec != std::errc() || res.ptr != first + 2) {
      throw std::invalid_argument("invalid palette color '" + color + "'");
    }
  }
  return {v[0], v[1], v[2]};
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view cell, std::size_t line) {
  T v{};
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ParseError("invalid number '" + std::string(cell) + "'", line);
  }
  return v;
}

constexpr std::string_view kCsvHeader =
    "ix,iz,center_x,center_z,count_0,count_1,count_2,count_3,mean";

}  // namespace

std::uint64_t HeatCell::total() const {
  return counts[0] + counts[1] + counts[2] + counts[3];
}

double HeatCell::mean() const {
  const auto n = total();
  if (n == 0) return 0.0;
  const auto weighted = counts[1] + 2 * counts[2] + 3 * counts[3];
  return static_cast<double>(weighted) / static_cast<double>(n);
}

HeatGrid::HeatGrid(HeatBounds bounds, std::size_t nx, std::size_t nz)
    : bounds_(bounds), nx_(nx), nz_(nz), cells_(nx * nz) {
  if (nx == 0 || nz == 0) throw std::invalid_argument("heat grid resolution must be positive");
  if (!(bounds.max_x > bounds.min_x) || !(bounds.max_z > bounds.min_z)) {
    throw std::invalid_argument("heat grid bounds must have positive extent");
  }
}

std::pair<std::size_t, std::size_t> HeatGrid::locate(double x, double z) const {
  return {bin(x, bounds_.min_x, bounds_.max_x, nx_), bin(z, bounds_.min_z, bounds_.max_z, nz_)};
}

std::pair<double, double> HeatGrid::center(std::size_t ix, std::size_t iz) const {
  const double w = (bounds_.max_x - bounds_.min_x) / static_cast<double>(nx_);
  const double h = (bounds_.max_z - bounds_.min_z) / static_cast<double>(nz_);
  return {bounds_.min_x + (static_cast<double>(ix) + 0.5) * w,
          bounds_.min_z + (static_cast<double>(iz) + 0.5) * h};
}

void HeatGrid::add(double x, double z, DiscomfortLevel level) {
  const auto [ix, iz] = locate(x, z);
  ++cell(ix, iz).counts[static_cast<std::size_t>(level)];
}

std::uint64_t HeatGrid::total() const {
  std::uint64_t n = 0;
  for (const auto& c : cells_) n += c.total();
  return n;
}

HeatBounds labeled_bounds(std::span<const SessionRecord> sessions) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  HeatBounds b{inf, inf, -inf, -inf};
  bool any = false;
  for (const auto& s : sessions) {
    if (!has_report(s)) continue;
    for (const auto& f : s.frames) {
      any = true;
      b.min_x = std::min(b.min_x, f.position_x);
      b.max_x = std::max(b.max_x, f.position_x);
      b.min_z = std::min(b.min_z, f.position_z);
      b.max_z = std::max(b.max_z, f.position_z);
    }
  }
  if (!any) throw std::invalid_argument("no labeled frames to aggregate");
  if (b.max_x <= b.min_x) {
    b.min_x -= 0.5;
    b.max_x += 0.5;
  }
  if (b.max_z <= b.min_z) {
    b.min_z -= 0.5;
    b.max_z += 0.5;
  }
  return b;
}

HeatGrid aggregate_track_heat(std::span<const SessionRecord> sessions, std::size_t nx,
                              std::size_t nz, std::optional<HeatBounds> bounds) {
  HeatGrid grid(bounds ? *bounds : labeled_bounds(sessions), nx, nz);
  std::size_t labeled = 0;
  for (const auto& s : sessions) {
    if (!has_report(s)) continue;
    const auto levels = propagate_reports(s);
    for (std::size_t i = 0; i < s.frames.size(); ++i) {
      grid.add(s.frames[i].position_x, s.frames[i].position_z, levels[i]);
      ++labeled;
    }
  }
  if (labeled == 0) throw std::invalid_argument("no labeled frames to aggregate");
  return grid;
}

std::string facet_value(const UserProfile& p, std::string_view facet) {
  const auto index = attribute_index(facet);
  if (registry()[index].group != AttributeGroup::kProfile) {
    throw std::invalid_argument("facet '" + std::string(facet) + "' is not a profile attribute");
  }
  const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  if (facet == "gender") return std::string(to_string(p.gender));
  if (facet == "age") return std::to_string(p.age);
  if (facet == "vr_experience") return std::to_string(p.vr_experience);
  if (facet == "flicker_sensitivity") return flag(p.flicker_sensitivity);
  if (facet == "pre_symptoms") return flag(p.pre_symptoms);
  if (facet == "wears_glasses") return flag(p.wears_glasses);
  if (facet == "vision_impairment") return flag(p.vision_impairment);
  if (facet == "posture") return std::string(to_string(p.posture));
  return std::string(to_string(p.dominant_eye));
}

std::map<std::string, HeatGrid> facet_by(std::span<const SessionRecord> sessions,
                                         std::string_view facet, std::size_t nx,
                                         std::size_t nz) {
  const HeatBounds bounds = labeled_bounds(sessions);
  std::map<std::string, std::vector<SessionRecord>> groups;
  for (const auto& s : sessions) {
    if (has_report(s)) groups[facet_value(s.profile, facet)].push_back(s);
  }
  std::map<std::string, HeatGrid> out;
  for (const auto& [value, members] : groups) {
    out.emplace(value, aggregate_track_heat(members, nx, nz, bounds));
  }
  return out;
}

const HeatPalette& default_palette() {
  static const HeatPalette palette = {"#1a9850", "#fee08b", "#fc8d59", "#d73027"};
  return palette;
}

std::string heat_color(double mean, const HeatPalette& palette) {
  const double m = std::clamp(mean, 0.0, 3.0);
  const auto lo = static_cast<std::size_t>(std::min(std::floor(m), 2.0));
  const double t = m - static_cast<double>(lo);
  const Rgb a = parse_hex(palette[lo]);
  const Rgb b = parse_hex(palette[lo + 1]);
  const auto mix = [t](int x, int y) {
    return static_cast<int>(std::lround(x + (y - x) * t));
  };
  return fmt::format("#{:02x}{:02x}{:02x}", mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b));
}

std::string export_heat_csv(const HeatGrid& grid) {
  std::string out(kCsvHeader);
  out += '\n';
  for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const auto& c = grid.cell(ix, iz);
      if (c.total() == 0) continue;
      const auto [cx, cz] = grid.center(ix, iz);
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", ix, iz, format_double(cx),
                         format_double(cz), c.counts[0], c.counts[1], c.counts[2], c.counts[3],
                         format_double(c.mean()));
    }
  }
  return out;
}

std::string export_heat_svg(const HeatGrid& grid, const HeatPalette& palette, double cell_px) {
  const std::string size = format_double(cell_px);
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\">\n",
      format_double(cell_px * static_cast<double>(grid.nx())),
      format_double(cell_px * static_cast<double>(grid.nz())),
      format_double(cell_px * static_cast<double>(grid.nx())),
      format_double(cell_px * static_cast<double>(grid.nz())));
  for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const auto& c = grid.cell(ix, iz);
      if (c.total() == 0) continue;
      out += fmt::format(
          "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\">"
          "<title>{} frames, mean {}</title></rect>\n",
          format_double(cell_px * static_cast<double>(ix)),
          format_double(cell_px * static_cast<double>(grid.nz() - 1 - iz)), size, size,
          heat_color(c.mean(), palette), c.total(), format_double(c.mean()));
    }
  }
  out += "</svg>\n";
  return out;
}

HeatGrid parse_heat_csv(std::string_view text, HeatBounds bounds, std::size_t nx,
                        std::size_t nz) {
  HeatGrid grid(bounds, nx, nz);
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      if (line != kCsvHeader) throw ParseError("unexpected heat CSV header", line_no);
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 9) throw ParseError("expected 9 columns", line_no);
    const auto ix = parse_number<std::size_t>(cells[0], line_no);
    const auto iz = parse_number<std::size_t>(cells[1], line_no);
    if (ix >= nx || iz >= nz) throw ParseError("cell index outside the grid", line_no);
    auto& cell = grid.cell(ix, iz);
    if (cell.total() != 0) throw ParseError("cell listed twice", line_no);
    for (std::size_t c = 0; c < 4; ++c) {
      cell.counts[c] = parse_number<std::uint64_t>(cells[4 + c], line_no);
    }
    if (cell.total() == 0) throw ParseError("empty cell listed", line_no);
    const double mean = parse_number<double>(cells[8], line_no);
    if (std::abs(mean - cell.mean()) > 1e-9) {
      throw ParseError("mean does not match the counts", line_no);
    }
  }
  if (!header) throw ParseError("missing heat CSV header", 1);
  return grid;
}

}  // namespace cstk
