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

// Group interaction recognition: cluster people by position, intersect
// their facing rays, measure the resulting interaction polygon and prune
// members that do not take part.

#include <optional>
#include <span>
#include <vector>

#include "groupsense/orientation.hpp"

namespace groupsense {

struct GroupingConfig {
  double epsilon = 2.0;          // DBSCAN radius, m
  std::size_t n_min = 2;         // DBSCAN density, self included
  double area_threshold = 3.0;   // m^2
  double dispersion_threshold = 2.0;  // m
  double max_ray_length = 8.0;   // m
  /// Two people whose rays point at each other within this angle of
  /// antiparallel share the midpoint between them as interaction vertex.
  double mutual_facing_tolerance = 0.2;  // rad

  /// Throws kInvalidArgument unless every field is positive and n_min >= 2.
  void validate() const;
};

struct FacingRay {
  Vec2 origin = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();
  double max_length = 8.0;
};

struct RayHit {
  Vec2 point;
  double t1 = 0.0;
  double t2 = 0.0;
};

struct InteractionGroup {
  std::vector<int> member_ids;          // ascending
  std::vector<Vec2> member_positions;   // aligned with member_ids
  std::vector<int> removed_ids;         // pruned by refinement, in order
  std::vector<Vec2> polygon;            // counterclockwise
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  double dispersion = 0.0;
  bool interacting = false;
};

struct RecognitionResult {
  std::vector<InteractionGroup> groups;    // interacting only
  std::vector<InteractionGroup> rejected;  // clusters that failed refinement
  std::vector<int> unclustered_ids;        // DBSCAN noise
};

FacingRay facing_ray(const PersonState& state, double max_length);

/// Forward intersection of two rays: both parameters in (0, max_length].
/// Parallel rays (|d1 x d2| < 1e-12) never intersect.
std::optional<RayHit> ray_intersection(const FacingRay& r1, const FacingRay& r2);

/// Vertices from all pairwise forward intersections, ordered
/// counterclockwise around their mean. A pair facing each other along
/// (nearly) the same line contributes the midpoint of their origins.
std::vector<Vec2> build_interaction_polygon(std::span<const FacingRay> rays,
                                            double mutual_facing_tolerance = 0.2);

double mean_dispersion(std::span<const Vec2> positions, const Vec2& centroid);

/// 1 unless area > area_threshold or dispersion > dispersion_threshold.
bool classify_interaction(double area, double dispersion,
                          const GroupingConfig& config);

/// Polygon, area, centroid and dispersion of a member set, or nullopt when
/// the members' rays form no polygon.
struct GroupGeometry {
  std::vector<Vec2> polygon;
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  double dispersion = 0.0;
};
std::optional<GroupGeometry> measure_group(std::span<const PersonState> members,
                                           const GroupingConfig& config);

/// Iterative removal of non-participants. Members are tried in ascending
/// person_id; the first whose removal brings either the area or the
/// dispersion within its threshold is dropped for good.
InteractionGroup refine_cluster(std::vector<PersonState> cluster,
                                const GroupingConfig& config);

RecognitionResult recognize_groups(std::span<const PersonState> states,
                                   const GroupingConfig& config);

}  // namespace groupsense
