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

#include "groupsense/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "groupsense/dbscan.hpp"
#include "groupsense/error.hpp"
#include "groupsense/polygon.hpp"

namespace groupsense {

namespace {

constexpr double kParallelTolerance = 1e-12;

inline double cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

std::vector<Vec2> positions_of(std::span<const PersonState> members) {
  std::vector<Vec2> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.position);
  return out;
}

Vec2 mean_of(std::span<const Vec2> points) {
  Vec2 sum = Vec2::Zero();
  for (const auto& p : points) sum += p;
  return points.empty() ? sum : Vec2(sum / static_cast<double>(points.size()));
}

InteractionGroup make_group(std::span<const PersonState> members,
                            std::vector<int> removed) {
  InteractionGroup g;
  for (const auto& m : members) {
    g.member_ids.push_back(m.person_id);
    g.member_positions.push_back(m.position);
  }
  g.removed_ids = std::move(removed);
  return g;
}

}  // namespace

void GroupingConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(epsilon) || !positive(area_threshold) ||
      !positive(dispersion_threshold) || !positive(max_ray_length) ||
      !positive(mutual_facing_tolerance)) {
    throw Error(ErrorKind::kInvalidArgument,
                "grouping thresholds must be positive and finite");
  }
  if (n_min < 2) {
    throw Error(ErrorKind::kInvalidArgument, "DBSCAN n_min must be at least 2");
  }
}

FacingRay facing_ray(const PersonState& state, double max_length) {
  return {state.position, Vec2(std::cos(state.theta), std::sin(state.theta)),
          max_length};
}

std::optional<RayHit> ray_intersection(const FacingRay& r1, const FacingRay& r2) {
  const double denom = cross(r1.direction, r2.direction);
  if (std::abs(denom) < kParallelTolerance) return std::nullopt;
  const Vec2 delta = r2.origin - r1.origin;
  const double t1 = cross(delta, r2.direction) / denom;
  const double t2 = cross(delta, r1.direction) / denom;
  if (!(t1 > 0.0 && t1 <= r1.max_length && t2 > 0.0 && t2 <= r2.max_length)) {
    return std::nullopt;
  }
  return RayHit{r1.origin + t1 * r1.direction, t1, t2};
}

std::vector<Vec2> build_interaction_polygon(std::span<const FacingRay> rays,
                                            double mutual_facing_tolerance) {
  const double cos_tol = std::cos(mutual_facing_tolerance);
  std::vector<Vec2> vertices;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const FacingRay& a = rays[i];
      const FacingRay& b = rays[j];
      const Vec2 delta = b.origin - a.origin;
      const double dist = delta.norm();
      if (dist > 0.0) {
        const Vec2 towards = delta / dist;
        const bool mutual = a.direction.dot(towards) >= cos_tol &&
                            -b.direction.dot(towards) >= cos_tol;
        if (mutual) {
          if (0.5 * dist <= std::min(a.max_length, b.max_length)) {
            vertices.push_back(a.origin + 0.5 * delta);
          }
          continue;
        }
      }
      if (auto hit = ray_intersection(a, b)) vertices.push_back(hit->point);
    }
  }
  return order_counterclockwise(std::move(vertices));
}

double mean_dispersion(std::span<const Vec2> positions, const Vec2& centroid) {
  if (positions.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : positions) sum += (p - centroid).norm();
  return sum / static_cast<double>(positions.size());
}

bool classify_interaction(double area, double dispersion,
                          const GroupingConfig& config) {
  return !(area > config.area_threshold || dispersion > config.dispersion_threshold);
}

std::optional<GroupGeometry> measure_group(std::span<const PersonState> members,
                                           const GroupingConfig& config) {
  std::vector<FacingRay> rays;
  rays.reserve(members.size());
  for (const auto& m : members) rays.push_back(facing_ray(m, config.max_ray_length));
  GroupGeometry g;
  g.polygon = build_interaction_polygon(rays, config.mutual_facing_tolerance);
  if (g.polygon.empty()) return std::nullopt;
  g.area = polygon_area(g.polygon);
  g.centroid = polygon_centroid(g.polygon);
  const std::vector<Vec2> positions = positions_of(members);
  g.dispersion = mean_dispersion(positions, g.centroid);
  return g;
}

InteractionGroup refine_cluster(std::vector<PersonState> cluster,
                                const GroupingConfig& config) {
  std::sort(cluster.begin(), cluster.end(),
            [](const PersonState& a, const PersonState& b) {
              return a.person_id < b.person_id;
            });

  std::optional<GroupGeometry> geometry =
      cluster.size() >= 2 ? measure_group(cluster, config) : std::nullopt;
  if (!geometry) {
    InteractionGroup g = make_group(cluster, {});
    const std::vector<Vec2> positions = positions_of(cluster);
    if (!positions.empty()) {
      g.centroid = mean_of(positions);
      g.dispersion = mean_dispersion(positions, g.centroid);
    }
    return g;
  }

  std::vector<int> removed;
  auto exceeds = [&](const GroupGeometry& g) {
    return g.area > config.area_threshold ||
           g.dispersion > config.dispersion_threshold;
  };
  while (exceeds(*geometry)) {
    bool improved = false;
    for (std::size_t i = 0; i < cluster.size() && cluster.size() > 2; ++i) {
      std::vector<PersonState> reduced;
      reduced.reserve(cluster.size() - 1);
      for (std::size_t j = 0; j < cluster.size(); ++j) {
        if (j != i) reduced.push_back(cluster[j]);
      }
      auto candidate = measure_group(reduced, config);
      if (!candidate) continue;
      if (candidate->area <= config.area_threshold ||
          candidate->dispersion <= config.dispersion_threshold) {
        removed.push_back(cluster[i].person_id);
        cluster = std::move(reduced);
        geometry = std::move(candidate);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  InteractionGroup g = make_group(cluster, std::move(removed));
  g.polygon = geometry->polygon;
  g.area = geometry->area;
  g.centroid = geometry->centroid;
  g.dispersion = geometry->dispersion;
  g.interacting = cluster.size() >= 2 &&
                  classify_interaction(g.area, g.dispersion, config);
  return g;
}

RecognitionResult recognize_groups(std::span<const PersonState> states,
                                   const GroupingConfig& config) {
  RecognitionResult result;
  const std::vector<Vec2> positions = positions_of(states);
  const DbscanResult clusters = dbscan(positions, config.epsilon, config.n_min);
  for (std::size_t i : clusters.noise) {
    result.unclustered_ids.push_back(states[i].person_id);
  }
  for (const auto& indices : clusters.clusters) {
    std::vector<PersonState> members;
    members.reserve(indices.size());
    for (std::size_t i : indices) members.push_back(states[i]);
    InteractionGroup group = refine_cluster(std::move(members), config);
    (group.interacting ? result.groups : result.rejected).push_back(std::move(group));
  }
  return result;
}

}  // namespace groupsense
