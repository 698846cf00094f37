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

// Synthetic scenes with exact ground truth: people are 17-keypoint planar
// body templates standing on the ground plane, projected through the camera
// model with optional Gaussian pixel and depth noise.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "groupsense/camera.hpp"
#include "groupsense/frames.hpp"

namespace groupsense {

struct BodyTemplate {
  double shoulder_width = 0.40;
  double hip_width = 0.30;
  double height = 1.70;

  /// (lateral offset towards the person's left, height above ground) per
  /// keypoint, in meters. All points share one vertical plane.
  std::array<Vec2, kNumKeypoints> offsets() const;
};

struct PersonSpec {
  Vec2 position = Vec2::Zero();
  double theta = 0.0;
  BodyTemplate body;
  std::vector<int> occluded;  // keypoint indices reported with confidence 0
  bool out_of_view = false;   // intentionally outside the field of view
};

struct GroupSpec {
  std::vector<int> members;
  Vec2 interest_point = Vec2::Zero();
  double area = 0.0;
};

struct NoiseSpec {
  double pixel_sigma = 0.0;  // px
  double depth_sigma = 0.0;  // m
};

struct ScenarioSpec {
  std::string name;
  std::vector<PersonSpec> persons;
  double camera_height = 0.9;  // m above ground
  CameraCalibration calibration;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  int frame_count = 1;
  double frame_interval = 1.0 / 30.0;
  /// Expected interacting groups; derived from the ideal geometry when empty.
  std::vector<GroupSpec> groups;

  void validate() const;
};

struct TruthPerson {
  int id = 0;
  Vec2 position = Vec2::Zero();
  double theta = 0.0;
  bool omitted = false;  // behind the camera, not present in frames
  std::vector<Keypoint3D> keypoints;
};

struct ScenarioTruth {
  std::string scenario;
  std::vector<std::int64_t> frame_ids;
  std::vector<TruthPerson> persons;
  std::vector<GroupSpec> groups;
};

struct SyntheticScenario {
  std::vector<FrameRecord> frames;
  ScenarioTruth truth;
  std::vector<std::string> warnings;
};

/// Calibration resembling a consumer RGB-D camera: 848x480 depth,
/// 1280x720 color, 15 mm baseline and a slight relative rotation.
CameraCalibration default_calibration();

/// S1 pair facing each other 0.8 m apart, S2 three-person semicircle facing
/// the camera, S3 equilateral triangle, S4 four-person semicircle,
/// S5 four-person circle.
std::vector<ScenarioSpec> builtin_scenarios();
std::optional<ScenarioSpec> builtin_scenario(const std::string& name);

/// Ground-truth keypoints of one person in camera and world coordinates.
std::vector<Keypoint3D> body_keypoints(const PersonSpec& person, double camera_height);

/// Deterministic for a fixed spec (including seed).
SyntheticScenario synthesize_scenario(const ScenarioSpec& spec);

/// Depth-sensor image of the scene: each person as an upright slab in the
/// body plane in front of a wall `wall_distance` meters from the camera.
DepthImage render_depth_image(const ScenarioSpec& spec, double wall_distance = 7.0);

/// Scenario description files (JSON). Keys: name, camera_height, seed,
/// frame_count, noise {pixel_sigma, depth_sigma}, persons [{x, y, theta,
/// shoulder_width?, hip_width?, height?, occluded?, out_of_view?}],
/// groups? [{members, interest_point}], calibration_file? (relative to the
/// spec file).
ScenarioSpec load_scenario_spec(const std::filesystem::path& path);

void write_truth(std::ostream& out, const ScenarioTruth& truth);
ScenarioTruth read_truth(std::istream& in);
void save_truth(const std::filesystem::path& path, const ScenarioTruth& truth);
ScenarioTruth load_truth(const std::filesystem::path& path);

}  // namespace groupsense
