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

// Pinhole camera model for an RGB-D sensor pair: depth deprojection,
// depth->color extrinsics, color projection, depth alignment and keypoint
// lifting onto the ground plane.
//
// Frames:
//   camera  x right, y down, z forward (meters)
//   world   top view of the ground, x = camera z, y = camera x

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace groupsense {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr int kNumKeypoints = 17;
inline constexpr int kLeftShoulder = 5;
inline constexpr int kRightShoulder = 6;

/// Tolerance for R^T R = I and det(R) = 1 when loading extrinsics.
inline constexpr double kRotationTolerance = 1e-9;

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  Mat3 matrix() const;
  bool contains(double u, double v) const {
    return u >= -0.5 && v >= -0.5 && u < width - 0.5 && v < height - 0.5;
  }
};

struct CameraCalibration {
  Intrinsics depth;
  Intrinsics color;
  Mat3 rotation = Mat3::Identity();     // depth -> color
  Vec3 translation = Vec3::Zero();      // depth -> color, meters

  /// Throws Error(kCalibration) if an intrinsic matrix is singular or not
  /// positive, or the rotation is not proper orthonormal.
  void validate() const;
};

/// A depth map in meters; 0 marks an absent sample.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height) : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height, 0.0f) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  float at(int x, int y) const { return data_[index(x, y)]; }
  float& at(int x, int y) { return data_[index(x, y)]; }
  bool present(int x, int y) const { return at(x, y) > 0.0f; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool operator==(const DepthImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

struct Keypoint2D {
  int index = 0;
  double u = 0.0;  // color pixels
  double v = 0.0;
  std::optional<double> depth;  // meters
  double confidence = 0.0;

  bool operator==(const Keypoint2D&) const = default;
};

struct Keypoint3D {
  int index = 0;
  Vec3 camera = Vec3::Zero();
  Vec2 world = Vec2::Zero();
  double confidence = 1.0;
};

/// d * K^{-1} (u, v, 1)^T for an arbitrary sensor.
Vec3 deproject(const Intrinsics& k, const Vec2& pixel, double depth);

/// Homogeneous projection K p / p_z. Throws kBehindCamera for p_z <= 0.
Vec2 project(const Intrinsics& k, const Vec3& p);

Vec3 deproject_depth_pixel(const CameraCalibration& calib, const Vec2& pixel,
                           double depth);
Vec3 transform_depth_to_color(const CameraCalibration& calib, const Vec3& p);
Vec2 project_to_color(const CameraCalibration& calib, const Vec3& p);

/// Resamples a depth image (depth sensor pixels) into color-sensor pixels.
/// Each output cell holds the nearest z landing on it; 0 elsewhere.
DepthImage align_depth_to_color(const CameraCalibration& calib,
                                const DepthImage& depth);

/// Same as align_depth_to_color but reuses `out`'s storage.
void align_depth_to_color(const CameraCalibration& calib,
                          const DepthImage& depth, DepthImage& out);

/// Depth at the rounded pixel, or the median of the present samples in its
/// 3x3 neighborhood when the center is absent.
std::optional<double> lookup_depth(const DepthImage& aligned, const Vec2& pixel);

inline Vec2 camera_to_world(const Vec3& p) { return {p.z(), p.x()}; }

/// Inverse of camera_to_world for a point at the given camera y.
inline Vec3 world_to_camera(const Vec2& w, double camera_y) {
  return {w.y(), camera_y, w.x()};
}

/// Lifts a color-space keypoint to 3D. Absent or nonpositive depth yields
/// nullopt (the keypoint is excluded, not an error).
std::optional<Keypoint3D> keypoint_to_3d(const CameraCalibration& calib,
                                         const Keypoint2D& kp);

/// Mean ground-plane position over keypoints whose confidence is at least
/// `min_confidence`. Throws kInsufficientKeypoints when fewer than
/// `min_valid` are accepted.
Vec2 person_position(std::span<const Keypoint3D> keypoints,
                     std::span<const double> confidences,
                     double min_confidence, std::size_t min_valid);

}  // namespace groupsense
