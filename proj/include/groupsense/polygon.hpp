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

#include <span>
#include <vector>

#include "groupsense/camera.hpp"

namespace groupsense {

/// Shoelace sum over cyclic vertices; positive for counterclockwise order.
double signed_area(std::span<const Vec2> vertices);

/// |signed_area|; 0 for fewer than three vertices.
double polygon_area(std::span<const Vec2> vertices);

/// Area centroid of a simple polygon. Falls back to the vertex mean for
/// fewer than three vertices or |signed area| < 1e-12.
/// Throws kNoCentroid for an empty list.
Vec2 polygon_centroid(std::span<const Vec2> vertices);

/// Sorts points counterclockwise by angle around their arithmetic mean.
/// Ties on angle are ordered by distance from the mean.
std::vector<Vec2> order_counterclockwise(std::vector<Vec2> points);

/// Counterclockwise convex hull (Andrew's monotone chain) without
/// collinear boundary points. May return 0, 1 or 2 points for degenerate
/// inputs.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Inclusive point-in-polygon test for a counterclockwise convex polygon.
/// Hulls with fewer than three vertices contain only points lying on them.
bool point_in_convex(std::span<const Vec2> hull, const Vec2& p);

/// Euclidean distance from p to the polygon's boundary (or to the point /
/// segment for degenerate hulls).
double distance_to_boundary(std::span<const Vec2> hull, const Vec2& p);

}  // namespace groupsense
