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

#include "groupsense/orientation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "groupsense/error.hpp"

namespace groupsense {

namespace {

constexpr double kPlaneEpsilon = 1e-12;

const Keypoint3D* find_keypoint(const std::vector<Keypoint3D>& kps, int index) {
  for (const auto& kp : kps) {
    if (kp.index == index) return &kp;
  }
  return nullptr;
}

}  // namespace

CenteredPoints center_keypoints(std::span<const Vec3> points) {
  if (points.size() < kMinPlaneKeypoints) {
    std::ostringstream os;
    os << "plane fit needs at least " << kMinPlaneKeypoints << " keypoints, got "
       << points.size();
    throw Error(ErrorKind::kInsufficientKeypoints, os.str());
  }
  CenteredPoints out;
  out.rows.resize(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.rows.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    out.mean += points[i];
  }
  out.mean /= static_cast<double>(points.size());
  out.rows.rowwise() -= out.mean.transpose();
  return out;
}

Mat3 covariance(const Eigen::Matrix<double, Eigen::Dynamic, 3>& centered) {
  if (centered.rows() == 0) return Mat3::Zero();
  Mat3 c = centered.transpose() * centered;
  c /= static_cast<double>(centered.rows());
  // Exact symmetry; the product is symmetric only up to rounding.
  return 0.5 * (c + c.transpose());
}

BodyPlane fit_body_plane(std::span<const Vec3> points) {
  const CenteredPoints centered = center_keypoints(points);
  const SymEigen3 eig = eigendecompose_sym3(covariance(centered.rows));
  BodyPlane plane;
  plane.centroid = centered.mean;
  plane.eigenvalues = eig.values.cwiseMax(0.0);
  plane.eigenvectors = eig.vectors;
  plane.normal = eig.vectors.col(2);
  plane.confidence = (plane.eigenvalues(1) - plane.eigenvalues(2)) /
                     (plane.eigenvalues(0) + kPlaneEpsilon);
  return plane;
}

double facing_angle(const Vec3& normal, const Vec3& camera_normal) {
  const double nn = normal.norm();
  const double cn = camera_normal.norm();
  if (!(nn > 0.0) || !(cn > 0.0)) {
    throw Error(ErrorKind::kDegenerateNormal, "zero-length normal vector");
  }
  return std::acos(std::clamp(normal.dot(camera_normal) / (nn * cn), -1.0, 1.0));
}

double disambiguate_facing(double theta, const Keypoint3D& left_shoulder,
                           const Keypoint3D& right_shoulder) {
  if (right_shoulder.world.y() > left_shoulder.world.y()) {
    return wrap_two_pi(theta + std::numbers::pi);
  }
  return wrap_two_pi(theta);
}

double resolve_facing(double theta, const Keypoint3D& left_shoulder,
                      const Keypoint3D& right_shoulder) {
  const Vec2 across = left_shoulder.world - right_shoulder.world;
  // Facing direction implied by the shoulders: `across` rotated by +pi/2.
  const Vec2 shoulder_facing(-across.y(), across.x());
  const Vec2 axis(std::cos(theta), std::sin(theta));
  if (axis.dot(shoulder_facing) < 0.0) {
    return wrap_two_pi(theta + std::numbers::pi);
  }
  return wrap_two_pi(theta);
}

PersonState estimate_person_state(int person_id, std::vector<Keypoint3D> accepted,
                                  const OrientationOptions& options) {
  std::vector<Vec3> points;
  points.reserve(accepted.size());
  Vec2 position = Vec2::Zero();
  for (const auto& kp : accepted) {
    points.push_back(kp.camera);
    position += kp.world;
  }
  const BodyPlane plane = fit_body_plane(points);
  if (plane.confidence < options.min_plane_confidence) {
    throw Error(ErrorKind::kDegenerateNormal,
                "keypoints are nearly collinear; body plane is undefined");
  }

  Vec3 normal = plane.normal;
  if (normal.dot(options.camera_normal) > 0.0) normal = -normal;
  const Vec2 ground = camera_to_world(normal);
  if (ground.norm() < 1e-9) {
    throw Error(ErrorKind::kDegenerateNormal,
                "body plane is horizontal; no ground facing direction");
  }

  PersonState state;
  state.person_id = person_id;
  state.position = position / static_cast<double>(accepted.size());
  state.n_valid = static_cast<int>(accepted.size());
  state.orientation_confidence = plane.confidence;

  const double axis_theta = wrap_two_pi(std::atan2(ground.y(), ground.x()));
  const Keypoint3D* left = find_keypoint(accepted, kLeftShoulder);
  const Keypoint3D* right = find_keypoint(accepted, kRightShoulder);
  if (left != nullptr && right != nullptr) {
    state.theta = options.rule == FacingRule::kBodyAxis
                      ? resolve_facing(axis_theta, *left, *right)
                      : disambiguate_facing(axis_theta, *left, *right);
  } else {
    state.theta = axis_theta;
    state.orientation_unverified = true;
  }
  state.keypoints = std::move(accepted);
  return state;
}

}  // namespace groupsense
