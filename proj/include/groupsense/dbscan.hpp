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

struct DbscanResult {
  /// Each cluster lists point indices ascending; clusters are ordered by
  /// their smallest index.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> noise;
};

/// Density-based clustering with neighborhoods N(p) = {q : |p - q| < eps}
/// (strict, p itself included). A point is core when |N(p)| >= min_points.
///
/// Border points reachable from more than one cluster join the cluster of
/// their nearest core neighbor (ties: lexicographically smallest core
/// coordinates), which makes the partition independent of input order.
DbscanResult dbscan(std::span<const Vec2> points, double epsilon,
                    std::size_t min_points);

}  // namespace groupsense
