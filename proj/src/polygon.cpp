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

#include "groupsense/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "groupsense/error.hpp"

namespace groupsense {

namespace {

constexpr double kDegenerateArea = 1e-12;

inline double cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return cross(a - o, b - o);
}

Vec2 vertex_mean(std::span<const Vec2> vertices) {
  Vec2 sum = Vec2::Zero();
  for (const auto& v : vertices) sum += v;
  return sum / static_cast<double>(vertices.size());
}

double segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

double signed_area(std::span<const Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += cross(vertices[i], vertices[(i + 1) % n]);
  }
  return 0.5 * sum;
}

double polygon_area(std::span<const Vec2> vertices) {
  return std::abs(signed_area(vertices));
}

Vec2 polygon_centroid(std::span<const Vec2> vertices) {
  if (vertices.empty()) {
    throw Error(ErrorKind::kNoCentroid, "polygon has no vertices");
  }
  const std::size_t n = vertices.size();
  const double a = signed_area(vertices);
  if (n < 3 || std::abs(a) < kDegenerateArea) return vertex_mean(vertices);
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    const double w = cross(p, q);
    cx += (p.x() + q.x()) * w;
    cy += (p.y() + q.y()) * w;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

std::vector<Vec2> order_counterclockwise(std::vector<Vec2> points) {
  if (points.size() < 2) return points;
  const Vec2 mean = vertex_mean(points);
  std::sort(points.begin(), points.end(), [&](const Vec2& a, const Vec2& b) {
    const Vec2 da = a - mean;
    const Vec2 db = b - mean;
    const double ta = std::atan2(da.y(), da.x());
    const double tb = std::atan2(db.y(), db.x());
    if (ta != tb) return ta < tb;
    const double ra = da.squaredNorm();
    const double rb = db.squaredNorm();
    if (ra != rb) return ra < rb;
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  return points;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

bool point_in_convex(std::span<const Vec2> hull, const Vec2& p) {
  const std::size_t n = hull.size();
  if (n == 0) return false;
  if (n == 1) return hull[0] == p;
  if (n == 2) {
    return cross(hull[0], hull[1], p) == 0.0 &&
           segment_distance(hull[0], hull[1], p) == 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(hull[i], hull[(i + 1) % n], p) < 0.0) return false;
  }
  return true;
}

double distance_to_boundary(std::span<const Vec2> hull, const Vec2& p) {
  const std::size_t n = hull.size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) return (p - hull[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  const std::size_t edges = n == 2 ? 1 : n;
  for (std::size_t i = 0; i < edges; ++i) {
    best = std::min(best, segment_distance(hull[i], hull[(i + 1) % n], p));
  }
  return best;
}

}  // namespace groupsense
