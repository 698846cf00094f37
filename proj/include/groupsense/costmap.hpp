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

#pragma once

// Social costmap layer: interaction zones rasterized into an occupancy-style
// grid of 0-255 costs.
//
// File layout (".smap"): five text lines followed by raw cells
//
//   SOCIALMAP1
//   <origin_x> <origin_y>
//   <resolution>
//   <width> <height>
//   <timestamp>          ("-" when suppressed)
//   <width*height bytes, row-major, row 0 at origin_y>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "groupsense/grouping.hpp"

namespace groupsense {

inline constexpr std::uint8_t kInteractionCost = 254;
inline constexpr std::uint8_t kMaxInflatedCost = 253;

struct GridSpec {
  Vec2 origin{-6.0, -6.0};  // world position of the corner of cell (0, 0)
  double resolution = 0.05;
  int width = 240;
  int height = 240;

  void validate() const;
  Vec2 cell_center(int ix, int iy) const {
    return origin + Vec2((ix + 0.5) * resolution, (iy + 0.5) * resolution);
  }
  bool operator==(const GridSpec&) const = default;
};

struct CostmapOptions {
  double inflation_radius = 0.5;  // m
  double decay_rate = 3.0;        // 1/m
};

class SocialCostmap {
 public:
  SocialCostmap() = default;
  explicit SocialCostmap(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width; }
  int height() const { return spec_.height; }

  std::uint8_t at(int ix, int iy) const { return cells_[index(ix, iy)]; }
  std::uint8_t& at(int ix, int iy) { return cells_[index(ix, iy)]; }

  std::span<const std::uint8_t> cells() const { return cells_; }
  std::span<std::uint8_t> cells() { return cells_; }

  bool operator==(const SocialCostmap&) const = default;

 private:
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * spec_.width + ix;
  }

  GridSpec spec_;
  std::vector<std::uint8_t> cells_;
};

struct RasterizeResult {
  SocialCostmap map;
  std::vector<std::string> warnings;
};

/// Region covered by a group: convex hull of member positions and polygon
/// vertices.
std::vector<Vec2> group_footprint(const InteractionGroup& group);

/// Cells whose centers lie in a group's footprint get kInteractionCost;
/// cells within the inflation radius get round(253 exp(-decay d)), at
/// least 1. Groups reaching outside the grid are clipped with a warning.
RasterizeResult rasterize_groups(std::span<const InteractionGroup> groups,
                                 const GridSpec& spec,
                                 const CostmapOptions& options = {});

/// Cell-wise maximum. Throws kIncompatibleGrids on differing geometry.
SocialCostmap merge_costmaps(const SocialCostmap& base, const SocialCostmap& social);

void write_costmap(std::ostream& out, const SocialCostmap& map,
                   const std::string& timestamp);
SocialCostmap read_costmap(std::istream& in);

void save_costmap(const std::filesystem::path& path, const SocialCostmap& map,
                  const std::string& timestamp);
SocialCostmap load_costmap(const std::filesystem::path& path);

}  // namespace groupsense
