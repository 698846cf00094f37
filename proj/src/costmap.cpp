// Copyright 2026 The groupsense Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "groupsense/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "groupsense/error.hpp"
#include "groupsense/numeric_format.hpp"
#include "groupsense/polygon.hpp"

namespace groupsense {

namespace {

constexpr const char* kMagic = "SOCIALMAP1";

[[noreturn]] void bad_file(const std::string& what) {
  throw Error(ErrorKind::kParse, "costmap file: " + what);
}

std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) bad_file(std::string("missing ") + what);
  return line;
}

double read_number(std::istringstream& ss, const char* what) {
  std::string token;
  double v = 0.0;
  if (!(ss >> token) || !parse_double(token, v)) {
    bad_file(std::string("bad ") + what);
  }
  return v;
}

}  // namespace

void GridSpec::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorKind::kInvalidArgument, "grid resolution must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "grid dimensions must be positive");
  }
  if (!origin.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "grid origin must be finite");
  }
}

SocialCostmap::SocialCostmap(const GridSpec& spec)
    : spec_(spec), cells_(static_cast<std::size_t>(spec.width) * spec.height, 0) {
  spec_.validate();
}

std::vector<Vec2> group_footprint(const InteractionGroup& group) {
  std::vector<Vec2> points = group.member_positions;
  points.insert(points.end(), group.polygon.begin(), group.polygon.end());
  return convex_hull(std::move(points));
}

RasterizeResult rasterize_groups(std::span<const InteractionGroup> groups,
                                 const GridSpec& spec,
                                 const CostmapOptions& options) {
  RasterizeResult result{SocialCostmap(spec), {}};
  SocialCostmap& map = result.map;
  const double reach = std::max(0.0, options.inflation_radius);

  for (const auto& group : groups) {
    const std::vector<Vec2> hull = group_footprint(group);
    if (hull.empty()) continue;

    Vec2 lo = hull.front();
    Vec2 hi = hull.front();
    for (const auto& p : hull) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    lo.array() -= reach;
    hi.array() += reach;

    // Cell index ranges whose centers may be affected.
    const auto first = [&](double w, double o) {
      return static_cast<long>(std::ceil((w - o) / spec.resolution - 0.5));
    };
    const auto last = [&](double w, double o) {
      return static_cast<long>(std::floor((w - o) / spec.resolution - 0.5));
    };
    long x0 = first(lo.x(), spec.origin.x());
    long x1 = last(hi.x(), spec.origin.x());
    long y0 = first(lo.y(), spec.origin.y());
    long y1 = last(hi.y(), spec.origin.y());
    if (x0 < 0 || y0 < 0 || x1 >= spec.width || y1 >= spec.height) {
      std::ostringstream os;
      os << "group {";
      for (std::size_t i = 0; i < group.member_ids.size(); ++i) {
        os << (i ? "," : "") << group.member_ids[i];
      }
      os << "} extends beyond the costmap bounds; clipped";
      result.warnings.push_back(os.str());
    }
    x0 = std::max(x0, 0L);
    y0 = std::max(y0, 0L);
    x1 = std::min(x1, static_cast<long>(spec.width) - 1);
    y1 = std::min(y1, static_cast<long>(spec.height) - 1);

    for (long iy = y0; iy <= y1; ++iy) {
      for (long ix = x0; ix <= x1; ++ix) {
        const Vec2 c = spec.cell_center(static_cast<int>(ix), static_cast<int>(iy));
        std::uint8_t cost = 0;
        if (point_in_convex(hull, c)) {
          cost = kInteractionCost;
        } else {
          const double d = distance_to_boundary(hull, c);
          if (d <= reach) {
            const long v = std::lround(kMaxInflatedCost * std::exp(-options.decay_rate * d));
            cost = static_cast<std::uint8_t>(std::clamp(v, 1L, static_cast<long>(kMaxInflatedCost)));
          }
        }
        std::uint8_t& cell = map.at(static_cast<int>(ix), static_cast<int>(iy));
        cell = std::max(cell, cost);
      }
    }
  }
  return result;
}

SocialCostmap merge_costmaps(const SocialCostmap& base, const SocialCostmap& social) {
  if (!(base.spec() == social.spec())) {
    throw Error(ErrorKind::kIncompatibleGrids,
                "costmaps differ in origin, resolution or size");
  }
  SocialCostmap out = base;
  auto dst = out.cells();
  auto src = social.cells();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
  return out;
}

void write_costmap(std::ostream& out, const SocialCostmap& map,
                   const std::string& timestamp) {
  const GridSpec& s = map.spec();
  out << kMagic << '\n'
      << format_double(s.origin.x()) << ' ' << format_double(s.origin.y()) << '\n'
      << format_double(s.resolution) << '\n'
      << s.width << ' ' << s.height << '\n'
      << (timestamp.empty() ? "-" : timestamp) << '\n';
  const auto cells = map.cells();
  out.write(reinterpret_cast<const char*>(cells.data()),
            static_cast<std::streamsize>(cells.size()));
}

SocialCostmap read_costmap(std::istream& in) {
  if (read_line(in, "magic") != kMagic) bad_file("bad magic string");
  GridSpec spec;
  {
    std::istringstream ss(read_line(in, "origin"));
    spec.origin.x() = read_number(ss, "origin");
    spec.origin.y() = read_number(ss, "origin");
  }
  {
    std::istringstream ss(read_line(in, "resolution"));
    spec.resolution = read_number(ss, "resolution");
  }
  {
    std::istringstream ss(read_line(in, "dimensions"));
    if (!(ss >> spec.width >> spec.height)) bad_file("bad dimensions");
  }
  read_line(in, "timestamp");
  try {
    spec.validate();
  } catch (const Error& e) {
    bad_file(e.what());
  }
  SocialCostmap map(spec);
  auto cells = map.cells();
  in.read(reinterpret_cast<char*>(cells.data()),
          static_cast<std::streamsize>(cells.size()));
  if (in.gcount() != static_cast<std::streamsize>(cells.size())) {
    bad_file("truncated cell data");
  }
  return map;
}

void save_costmap(const std::filesystem::path& path, const SocialCostmap& map,
                  const std::string& timestamp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_costmap(out, map, timestamp);
}

SocialCostmap load_costmap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_costmap(in);
}

}  // namespace groupsense
