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

#include "groupsense/error.hpp"
#include "groupsense/polygon.hpp"
#include "oracles.hpp"

using namespace groupsense;

TEST_CASE("shoelace area and orientation sign") {
  const std::vector<Vec2> square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(signed_area(square) == doctest::Approx(4.0));
  const std::vector<Vec2> cw(square.rbegin(), square.rend());
  CHECK(signed_area(cw) == doctest::Approx(-4.0));
  CHECK(polygon_area(cw) == doctest::Approx(4.0));
  CHECK(polygon_area(std::vector<Vec2>{{0, 0}, {1, 1}}) == 0.0);
  CHECK(polygon_area(std::vector<Vec2>{}) == 0.0);
}

TEST_CASE("area matches a triangle fan on random convex polygons") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const auto poly = oracle::random_convex_polygon(rng);
    CHECK(std::abs(polygon_area(poly) - oracle::fan_area(poly)) <= 1e-12 * std::max(1.0, oracle::fan_area(poly)));
  }
}

TEST_CASE("centroid") {
  const std::vector<Vec2> square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK((polygon_centroid(square) - Vec2(1, 1)).norm() < 1e-15);
  const std::vector<Vec2> tri = {{0, 0}, {3, 0}, {0, 3}};
  CHECK((polygon_centroid(tri) - Vec2(1, 1)).norm() < 1e-15);
  // Degenerate inputs use the vertex mean.
  CHECK((polygon_centroid(std::vector<Vec2>{{1, 2}}) - Vec2(1, 2)).norm() == 0.0);
  CHECK((polygon_centroid(std::vector<Vec2>{{0, 0}, {2, 4}}) - Vec2(1, 2)).norm() < 1e-15);
  CHECK((polygon_centroid(std::vector<Vec2>{{0, 0}, {1, 1}, {3, 3}}) - Vec2(4.0 / 3, 4.0 / 3)).norm() <
        1e-15);
  try {
    polygon_centroid(std::vector<Vec2>{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNoCentroid);
  }
}

TEST_CASE("centroid matches stratified sampling") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 10; ++i) {
    const auto poly = oracle::random_convex_polygon(rng);
    const Vec2 mc = oracle::stratified_centroid(poly, 1000, rng);
    CHECK((polygon_centroid(poly) - mc).norm() < 1e-3);
  }
}

TEST_CASE("counterclockwise ordering of shuffled vertices") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    auto poly = oracle::random_convex_polygon(rng);
    const double area = oracle::fan_area(poly);
    std::shuffle(poly.begin(), poly.end(), rng);
    const auto ordered = order_counterclockwise(poly);
    REQUIRE(ordered.size() == poly.size());
    CHECK(signed_area(ordered) == doctest::Approx(area).epsilon(1e-12));
  }
}

TEST_CASE("convex hull against brute force") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<Vec2> pts(4 + i % 20);
    for (auto& p : pts) p = Vec2(u(rng), u(rng));
    const auto hull = convex_hull(pts);
    CHECK(signed_area(hull) > 0.0);
    for (const auto& p : pts) CHECK(point_in_convex(hull, p));
    for (int k = 0; k < 50; ++k) {
      const Vec2 q(u(rng), u(rng));
      CHECK(point_in_convex(hull, q) == oracle::in_hull_bruteforce(pts, q));
    }
  }
}

TEST_CASE("degenerate hulls") {
  CHECK(convex_hull({}).empty());
  CHECK(convex_hull({{1, 1}, {1, 1}}).size() == 1);
  const auto seg = convex_hull({{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}});
  CHECK(seg.size() == 2);
  CHECK(point_in_convex(seg, Vec2(1.5, 1.5)));
  CHECK_FALSE(point_in_convex(seg, Vec2(1.5, 1.0)));
  CHECK(convex_hull({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}}).size() == 4);
}

TEST_CASE("distance to the boundary") {
  const std::vector<Vec2> square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(distance_to_boundary(square, Vec2(1, 1)) == doctest::Approx(1.0));
  CHECK(distance_to_boundary(square, Vec2(3, 1)) == doctest::Approx(1.0));
  CHECK(distance_to_boundary(square, Vec2(3, 3)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(distance_to_boundary(std::vector<Vec2>{{0, 0}}, Vec2(3, 4)) == doctest::Approx(5.0));
  CHECK(distance_to_boundary(std::vector<Vec2>{{0, 0}, {2, 0}}, Vec2(1, 1)) ==
        doctest::Approx(1.0));
}
