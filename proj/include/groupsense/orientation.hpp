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

// Body facing direction from a plane fitted to a person's 3D keypoints.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "groupsense/camera.hpp"
#include "groupsense/sym3_eigen.hpp"

namespace groupsense {

/// Viewing axis of the color camera, pointing into the scene.
inline const Vec3 kCameraViewAxis = Vec3::UnitZ();

inline constexpr std::size_t kMinPlaneKeypoints = 4;

struct CenteredPoints {
  Eigen::Matrix<double, Eigen::Dynamic, 3> rows;
  Vec3 mean = Vec3::Zero();
};

struct BodyPlane {
  Vec3 centroid = Vec3::Zero();
  Vec3 eigenvalues = Vec3::Zero();        // descending, clamped at 0
  Mat3 eigenvectors = Mat3::Identity();   // columns v1, v2, v3
  Vec3 normal = Vec3::UnitZ();            // v3
  /// (lambda2 - lambda3) / (lambda1 + eps); near 0 for rank-deficient poses.
  double confidence = 0.0;
};

enum class FacingRule {
  /// Shoulder order projected on the body's lateral axis (default).
  kBodyAxis,
  /// Raw comparison of the shoulders' lateral ground coordinate.
  kLateralCoordinate,
};

struct OrientationOptions {
  FacingRule rule = FacingRule::kBodyAxis;
  Vec3 camera_normal = kCameraViewAxis;
  /// Below this plane confidence the pose is rejected as degenerate.
  double min_plane_confidence = 1e-6;
};

/// Throws kInsufficientKeypoints for fewer than kMinPlaneKeypoints points.
CenteredPoints center_keypoints(std::span<const Vec3> points);

/// (1/n) M^T M.
Mat3 covariance(const Eigen::Matrix<double, Eigen::Dynamic, 3>& centered);

BodyPlane fit_body_plane(std::span<const Vec3> points);

/// Unsigned angle between the plane normal and the camera normal, in [0, pi].
/// Throws kDegenerateNormal for zero-length inputs.
double facing_angle(const Vec3& normal, const Vec3& camera_normal);

/// Adds pi (mod 2 pi) when the right shoulder lies further along the lateral
/// ground axis (camera x) than the left shoulder. Result is in [0, 2 pi).
double disambiguate_facing(double theta, const Keypoint3D& left_shoulder,
                           const Keypoint3D& right_shoulder);

/// Picks between theta and theta + pi so that the left shoulder sits on the
/// person's left, i.e. (left - right) points along the facing direction
/// rotated by -pi/2 in the ground frame. Agrees with disambiguate_facing
/// whenever the person faces the camera.
double resolve_facing(double theta, const Keypoint3D& left_shoulder,
                      const Keypoint3D& right_shoulder);

inline double wrap_two_pi(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

/// Wraps to (-pi, pi].
inline double wrap_pi(double angle) {
  double a = wrap_two_pi(angle);
  if (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  return a;
}

struct PersonState {
  int person_id = 0;
  Vec2 position = Vec2::Zero();
  double theta = 0.0;  // [0, 2 pi), from world x
  std::vector<Keypoint3D> keypoints;  // accepted only
  int n_valid = 0;
  double orientation_confidence = 0.0;
  /// Shoulders unavailable, so the forward/backward choice was not checked.
  bool orientation_unverified = false;
};

/// Position (mean ground point) and facing angle for one person from its
/// accepted keypoints. Throws kInsufficientKeypoints or kDegenerateNormal.
PersonState estimate_person_state(int person_id,
                                  std::vector<Keypoint3D> accepted,
                                  const OrientationOptions& options = {});

}  // namespace groupsense
