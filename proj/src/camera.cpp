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

#include "groupsense/camera.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "groupsense/error.hpp"

namespace groupsense {

namespace {

void validate_intrinsics(const Intrinsics& k, const char* which) {
  if (!(k.fx > 0.0) || !(k.fy > 0.0) || !std::isfinite(k.fx) ||
      !std::isfinite(k.fy) || !std::isfinite(k.cx) || !std::isfinite(k.cy)) {
    std::ostringstream os;
    os << which << " intrinsics must have finite positive focal lengths";
    throw Error(ErrorKind::kCalibration, os.str());
  }
  if (k.width <= 0 || k.height <= 0) {
    std::ostringstream os;
    os << which << " intrinsics must have positive width and height";
    throw Error(ErrorKind::kCalibration, os.str());
  }
}

// Round-half-up to a pixel index; caller guarantees value >= -0.5.
inline int pixel_index(double value) { return static_cast<int>(value + 0.5); }

// Depth-to-color row projection. Depth pixel x of a row lands on color
// pixel (u, v) = K_c (d (base + x step) + t) / z, rounded half up.
struct AlignRow {
  Vec3 base, step, t;
  double fx, fy, cx, cy;  // cx, cy include the rounding offset of 0.5
  int width, height;
};

constexpr std::int32_t kOutside = -1;
constexpr std::int32_t kRecheck = -2;

// Float evaluation of u and v is trusted only this far from a pixel border;
// its error stays below 1e-3 px for sensor-sized images.
constexpr float kRecheckMargin = 4e-3f;

std::int32_t exact_target(const AlignRow& row, double d, int x) {
  const Vec3 ray = row.base + x * row.step;
  const double qz = d * ray.z() + row.t.z();
  if (!(d > 0.0) || !(qz > 0.0)) return kOutside;
  const double inv = 1.0 / qz;
  const double u = row.fx * (d * ray.x() + row.t.x()) * inv + row.cx;
  const double v = row.fy * (d * ray.y() + row.t.y()) * inv + row.cy;
  if (!(u >= 0.0 && u < row.width && v >= 0.0 && v < row.height)) return kOutside;
  return static_cast<int>(v) * row.width + static_cast<int>(u);
}

// Writes per pixel the color cell index (or kOutside / kRecheck) and the
// depth-to-color z. Branch-free so that it vectorizes; cloned per ISA.
// Validity uses the float z: a positive double z that rounds to 0 would
// project far outside the image anyway.
#if defined(__x86_64__) && defined(__linux__) && (defined(__GNUC__) || defined(__clang__))
__attribute__((target_clones("avx512f", "avx2", "default")))
#endif
void project_row(const AlignRow& row, const float* __restrict src, int n,
                 std::int32_t* __restrict target, float* __restrict zs) {
  const double bz = row.base.z(), sz = row.step.z(), tz = row.t.z();
  for (int x = 0; x < n; ++x) {
    zs[x] = static_cast<float>(static_cast<double>(src[x]) * (bz + x * sz) + tz);
  }
  const float bx = static_cast<float>(row.base.x()), sx = static_cast<float>(row.step.x());
  const float by = static_cast<float>(row.base.y()), sy = static_cast<float>(row.step.y());
  const float tx = static_cast<float>(row.t.x()), ty = static_cast<float>(row.t.y());
  const float fx = static_cast<float>(row.fx), fy = static_cast<float>(row.fy);
  const float cx = static_cast<float>(row.cx), cy = static_cast<float>(row.cy);
  const float w = static_cast<float>(row.width), h = static_cast<float>(row.height);
  const int width = row.width;
  for (int x = 0; x < n; ++x) {
    const float d = src[x];
    const float z = zs[x];
    const float xf = static_cast<float>(x);
    const float inv = 1.0f / z;
    const float u = fx * (d * (bx + xf * sx) + tx) * inv + cx;
    const float v = fy * (d * (by + xf * sy) + ty) * inv + cy;
    const bool valid = (d > 0.0f) & (z > 0.0f);
    // Clamped to [-1.5, size + 1.5], NaN to -1.5, so the integer parts are
    // representable; the clamp values sit mid-pixel and are never near.
    const float uc = std::min(w + 1.5f, std::max(-1.5f, u));
    const float vc = std::min(h + 1.5f, std::max(-1.5f, v));
    // floor, via truncation of a positive value
    const float iu = static_cast<float>(static_cast<std::int32_t>(uc + 2.0f) - 2);
    const float iv = static_cast<float>(static_cast<std::int32_t>(vc + 2.0f) - 2);
    // Near a pixel border, which includes the image edges.
    const bool near = (std::abs(uc - iu - 0.5f) > 0.5f - kRecheckMargin) |
                      (std::abs(vc - iv - 0.5f) > 0.5f - kRecheckMargin);
    const bool inside = (iu >= 0.0f) & (iu < w) & (iv >= 0.0f) & (iv < h);
    const std::int32_t cell = static_cast<std::int32_t>(iv) * width +
                              static_cast<std::int32_t>(iu);
    const std::int32_t fallback = (valid & near) ? kRecheck : kOutside;
    target[x] = (valid & inside & !near) ? cell : fallback;
  }
}

}  // namespace

Mat3 Intrinsics::matrix() const {
  Mat3 k;
  k << fx, 0.0, cx,
       0.0, fy, cy,
       0.0, 0.0, 1.0;
  return k;
}

void CameraCalibration::validate() const {
  validate_intrinsics(depth, "depth");
  validate_intrinsics(color, "color");
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw Error(ErrorKind::kCalibration, "extrinsics must be finite");
  }
  const double ortho_err =
      (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > kRotationTolerance) {
    std::ostringstream os;
    os << "rotation is not orthonormal (max |R^T R - I| = " << ortho_err << ")";
    throw Error(ErrorKind::kCalibration, os.str());
  }
  const double det = rotation.determinant();
  if (std::abs(det - 1.0) > kRotationTolerance) {
    std::ostringstream os;
    os << "rotation determinant is " << det << ", expected +1";
    throw Error(ErrorKind::kCalibration, os.str());
  }
}

Vec3 deproject(const Intrinsics& k, const Vec2& pixel, double depth) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw Error(ErrorKind::kInvalidDepth, "depth must be positive and finite");
  }
  return {depth * (pixel.x() - k.cx) / k.fx, depth * (pixel.y() - k.cy) / k.fy,
          depth};
}

Vec2 project(const Intrinsics& k, const Vec3& p) {
  if (!(p.z() > 0.0)) {
    throw Error(ErrorKind::kBehindCamera, "point is behind the camera");
  }
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy};
}

Vec3 deproject_depth_pixel(const CameraCalibration& calib, const Vec2& pixel,
                           double depth) {
  return deproject(calib.depth, pixel, depth);
}

Vec3 transform_depth_to_color(const CameraCalibration& calib, const Vec3& p) {
  return calib.rotation * p + calib.translation;
}

Vec2 project_to_color(const CameraCalibration& calib, const Vec3& p) {
  return project(calib.color, p);
}

DepthImage align_depth_to_color(const CameraCalibration& calib,
                                const DepthImage& depth) {
  DepthImage out;
  align_depth_to_color(calib, depth, out);
  return out;
}

void align_depth_to_color(const CameraCalibration& calib,
                          const DepthImage& depth, DepthImage& out) {
  const Intrinsics& kd = calib.depth;
  const Intrinsics& kc = calib.color;
  if (!depth.empty() && (depth.width() != kd.width || depth.height() != kd.height)) {
    throw Error(ErrorKind::kInvalidArgument,
                "depth image size does not match depth intrinsics");
  }
  if (out.width() != kc.width || out.height() != kc.height) {
    out = DepthImage(kc.width, kc.height);
  } else {
    std::fill(out.data().begin(), out.data().end(), 0.0f);
  }
  if (depth.empty()) return;
  float* cells = out.data().data();

  const Mat3& r = calib.rotation;
  const Vec3 step = r.col(0) / kd.fx;
  const Vec3& t = calib.translation;
  AlignRow row;
  row.fx = kc.fx;
  row.fy = kc.fy;
  row.cx = kc.cx + 0.5;
  row.cy = kc.cy + 0.5;
  row.t = t;
  row.step = step;
  row.width = kc.width;
  row.height = kc.height;
  std::vector<std::int32_t> target(kd.width);
  std::vector<float> zs(kd.width);
  for (int y = 0; y < kd.height; ++y) {
    row.base = r * Vec3(-kd.cx / kd.fx, (static_cast<double>(y) - kd.cy) / kd.fy, 1.0);
    const float* src = depth.data().data() + static_cast<std::size_t>(y) * kd.width;
    project_row(row, src, kd.width, target.data(), zs.data());
    for (int x = 0; x < kd.width; ++x) {
      std::int32_t cell_index = target[x];
      if (cell_index < 0) {
        if (cell_index == kOutside) continue;
        cell_index = exact_target(row, src[x], x);
        if (cell_index < 0) continue;
      }
      float& cell = cells[cell_index];
      const float z = zs[x];
      if (cell == 0.0f || z < cell) cell = z;
    }
  }
}

std::optional<double> lookup_depth(const DepthImage& aligned, const Vec2& pixel) {
  if (aligned.empty()) return std::nullopt;
  if (!(pixel.x() >= -0.5 && pixel.y() >= -0.5)) return std::nullopt;
  const int cx = pixel_index(pixel.x());
  const int cy = pixel_index(pixel.y());
  if (cx >= aligned.width() || cy >= aligned.height()) return std::nullopt;
  if (aligned.present(cx, cy)) return aligned.at(cx, cy);

  std::array<float, 9> samples{};
  std::size_t n = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int x = cx + dx;
      const int y = cy + dy;
      if (x < 0 || y < 0 || x >= aligned.width() || y >= aligned.height()) continue;
      if (aligned.present(x, y)) samples[n++] = aligned.at(x, y);
    }
  }
  if (n == 0) return std::nullopt;
  std::sort(samples.begin(), samples.begin() + n);
  if (n % 2 == 1) return samples[n / 2];
  return 0.5 * (static_cast<double>(samples[n / 2 - 1]) + samples[n / 2]);
}

std::optional<Keypoint3D> keypoint_to_3d(const CameraCalibration& calib,
                                         const Keypoint2D& kp) {
  if (!kp.depth || !(*kp.depth > 0.0) || !std::isfinite(*kp.depth)) {
    return std::nullopt;
  }
  Keypoint3D out;
  out.index = kp.index;
  out.camera = deproject(calib.color, Vec2(kp.u, kp.v), *kp.depth);
  out.world = camera_to_world(out.camera);
  out.confidence = kp.confidence;
  return out;
}

Vec2 person_position(std::span<const Keypoint3D> keypoints,
                     std::span<const double> confidences,
                     double min_confidence, std::size_t min_valid) {
  if (keypoints.size() != confidences.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "keypoint and confidence lists differ in length");
  }
  Vec2 sum = Vec2::Zero();
  std::size_t n = 0;
  for (std::size_t i = 0; i < keypoints.size(); ++i) {
    if (confidences[i] < min_confidence) continue;
    sum += keypoints[i].world;
    ++n;
  }
  if (n == 0 || n < min_valid) {
    std::ostringstream os;
    os << "only " << n << " keypoints accepted, need " << min_valid;
    throw Error(ErrorKind::kInsufficientKeypoints, os.str());
  }
  return sum / static_cast<double>(n);
}

}  // namespace groupsense
