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

#include <doctest.h>

#include <random>
#include <sstream>

#include "groupsense/costmap.hpp"
#include "groupsense/error.hpp"
#include "oracles.hpp"

using namespace groupsense;

namespace {

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

// Distance from an outside point to the hull of `pts`: the nearest hull
// point lies on a segment between two of the points.
double hull_distance(const std::vector<Vec2>& pts, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j)
      best = std::min(best, segment_distance(p, pts[i], pts[j]));
  return best;
}

InteractionGroup random_group(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(-3.0, 3.0), offset(-1.2, 1.2);
  std::uniform_int_distribution<int> members(2, 5), vertices(1, 4);
  const Vec2 c(center(rng), center(rng));
  InteractionGroup g;
  const int n = members(rng);
  for (int k = 0; k < n; ++k) {
    g.member_ids.push_back(k);
    g.member_positions.push_back(c + Vec2(offset(rng), offset(rng)));
  }
  const int m = vertices(rng);
  for (int k = 0; k < m; ++k) g.polygon.push_back(c + 0.5 * Vec2(offset(rng), offset(rng)));
  g.interacting = true;
  return g;
}

std::vector<Vec2> footprint_points(const InteractionGroup& g) {
  std::vector<Vec2> pts = g.member_positions;
  pts.insert(pts.end(), g.polygon.begin(), g.polygon.end());
  return pts;
}

}  // namespace

TEST_CASE("grid validation and cell centers") {
  GridSpec g;
  CHECK_NOTHROW(g.validate());
  CHECK((g.cell_center(0, 0) - Vec2(-5.975, -5.975)).norm() < 1e-12);
  CHECK((g.cell_center(239, 239) - Vec2(5.975, 5.975)).norm() < 1e-12);
  g.resolution = 0.0;
  CHECK_THROWS_AS(g.validate(), Error);
  g = {};
  g.width = 0;
  CHECK_THROWS_AS(SocialCostmap{g}, Error);
}

TEST_CASE("interior and inflation costs match brute force") {
  std::mt19937_64 rng(61);
  GridSpec spec;
  spec.resolution = 0.1;
  spec.width = spec.height = 120;
  const CostmapOptions options;
  for (int i = 0; i < 30; ++i) {
    const InteractionGroup g = random_group(rng);
    const auto pts = footprint_points(g);
    const RasterizeResult r = rasterize_groups(std::vector<InteractionGroup>{g}, spec, options);
    CHECK(r.warnings.empty());
    for (int iy = 0; iy < spec.height; ++iy) {
      for (int ix = 0; ix < spec.width; ++ix) {
        const Vec2 c = spec.cell_center(ix, iy);
        int expected = 0;
        if (oracle::in_hull_bruteforce(pts, c)) {
          expected = 254;
        } else {
          const double d = hull_distance(pts, c);
          if (d <= options.inflation_radius) {
            expected = std::clamp(static_cast<int>(std::lround(253.0 * std::exp(-3.0 * d))), 1, 253);
          }
        }
        // Cells within rounding of the hull boundary may go either way.
        const double d = hull_distance(pts, c);
        if (d > 1e-9 && std::abs(d - options.inflation_radius) > 1e-9) {
          CHECK(static_cast<int>(r.map.at(ix, iy)) == expected);
        }
      }
    }
  }
}

TEST_CASE("overlapping groups keep the maximum cost") {
  InteractionGroup a, b;
  a.member_positions = {{0, 0}, {1, 0}, {0, 1}};
  b.member_positions = {{0.5, 0.5}, {2, 0.5}, {0.5, 2}};
  const GridSpec spec;
  const auto ra = rasterize_groups(std::vector<InteractionGroup>{a}, spec).map;
  const auto rb = rasterize_groups(std::vector<InteractionGroup>{b}, spec).map;
  const auto both = rasterize_groups(std::vector<InteractionGroup>{a, b}, spec).map;
  CHECK(both == merge_costmaps(ra, rb));
  for (std::size_t i = 0; i < both.cells().size(); ++i) {
    CHECK(both.cells()[i] == std::max(ra.cells()[i], rb.cells()[i]));
  }
}

TEST_CASE("groups outside the grid are clipped with a warning") {
  InteractionGroup g;
  g.member_ids = {4, 7};
  g.member_positions = {{5.5, 0}, {7, 0}};
  g.polygon = {{6, 0.5}};
  const auto r = rasterize_groups(std::vector<InteractionGroup>{g}, GridSpec{});
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("{4,7}") != std::string::npos);
  int interior = 0;
  for (auto c : r.map.cells()) interior += c == kInteractionCost;
  CHECK(interior > 0);
}

TEST_CASE("merge rejects different grids") {
  GridSpec other;
  other.width = 100;
  try {
    merge_costmaps(SocialCostmap(GridSpec{}), SocialCostmap(other));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIncompatibleGrids);
  }
}

TEST_CASE("file layout and round trip") {
  GridSpec spec;
  spec.width = 3;
  spec.height = 2;
  spec.resolution = 0.25;
  spec.origin = {-1.5, 2.0};
  SocialCostmap map(spec);
  map.at(0, 0) = 1;
  map.at(2, 1) = 254;
  map.at(1, 0) = 10;  // newline byte inside the payload
  std::ostringstream out;
  write_costmap(out, map, "-");
  const std::string bytes = out.str();
  const std::string header = "SOCIALMAP1\n-1.5 2\n0.25\n3 2\n-\n";
  REQUIRE(bytes.size() == header.size() + 6);
  CHECK(bytes.substr(0, header.size()) == header);
  CHECK(bytes.substr(header.size()) == std::string("\x01\x0a\x00\x00\x00\xfe", 6));

  std::istringstream in(bytes);
  const SocialCostmap back = read_costmap(in);
  CHECK(back == map);
  CHECK(back.spec() == spec);

  std::ostringstream again;
  write_costmap(again, back, "-");
  CHECK(again.str() == bytes);
}

TEST_CASE("round trip of a full-size random map through files") {
  std::mt19937_64 rng(62);
  SocialCostmap map{GridSpec{}};
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& c : map.cells()) c = static_cast<std::uint8_t>(byte(rng));
  const auto dir = oracle::temp_dir("costmap");
  save_costmap(dir / "a.smap", map, "2024-01-01T00:00:00.000Z");
  CHECK(load_costmap(dir / "a.smap") == map);
  save_costmap(dir / "b.smap", load_costmap(dir / "a.smap"), "2024-01-01T00:00:00.000Z");
  CHECK(oracle::read_file(dir / "a.smap") == oracle::read_file(dir / "b.smap"));
}

TEST_CASE("malformed files") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_costmap(in);
  };
  CHECK_THROWS_AS(parse("SOCIALMAP2\n0 0\n1\n1 1\n-\nx"), Error);
  CHECK_THROWS_AS(parse("SOCIALMAP1\n0 0\n1\n2 2\n-\nabc"), Error);
  CHECK_THROWS_AS(parse("SOCIALMAP1\n0\n1\n1 1\n-\nx"), Error);
  CHECK_THROWS_AS(parse("SOCIALMAP1\n0 0\n-1\n1 1\n-\nx"), Error);
  CHECK_NOTHROW(parse("SOCIALMAP1\n0 0\n1\n1 1\n-\nx"));
  try {
    parse("SOCIALMAP1\n0 0\n1\n");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
  }
}
