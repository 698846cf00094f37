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

#include "groupsense/dbscan.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace groupsense {

namespace {

constexpr int kUnassigned = -1;

bool precedes(const Vec2& a, const Vec2& b) {
  return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
}

}  // namespace

DbscanResult dbscan(std::span<const Vec2> points, double epsilon,
                    std::size_t min_points) {
  const std::size_t n = points.size();
  const double eps2 = epsilon * epsilon;

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbors[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((points[i] - points[j]).squaredNorm() < eps2) {
        neighbors[i].push_back(j);
        neighbors[j].push_back(i);
      }
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= min_points;

  // Expand clusters through core points only.
  std::vector<int> label(n, kUnassigned);
  int next_label = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!core[seed] || label[seed] != kUnassigned) continue;
    const int id = next_label++;
    std::deque<std::size_t> frontier{seed};
    label[seed] = id;
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : neighbors[p]) {
        if (core[q] && label[q] == kUnassigned) {
          label[q] = id;
          frontier.push_back(q);
        }
      }
    }
  }

  // Border points attach to their nearest core neighbor.
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_core = n;
    for (std::size_t q : neighbors[i]) {
      if (!core[q]) continue;
      const double d = (points[q] - points[i]).squaredNorm();
      if (d < best || (d == best && precedes(points[q], points[best_core]))) {
        best = d;
        best_core = q;
      }
    }
    if (best_core != n) label[i] = label[best_core];
  }

  DbscanResult result;
  std::vector<std::vector<std::size_t>> by_label(static_cast<std::size_t>(next_label));
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == kUnassigned) {
      result.noise.push_back(i);
    } else {
      by_label[static_cast<std::size_t>(label[i])].push_back(i);
    }
  }
  for (auto& cluster : by_label) {
    if (!cluster.empty()) result.clusters.push_back(std::move(cluster));
  }
  std::sort(result.clusters.begin(), result.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return result;
}

}  // namespace groupsense
