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

// Evaluation against synthetic ground truth and stage timing statistics.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "groupsense/pipeline.hpp"
#include "groupsense/synth.hpp"

namespace groupsense {

/// Person association gate, meters.
inline constexpr double kMatchGate = 0.5;

struct KeypointSample {
  int index = 0;
  Vec3 predicted = Vec3::Zero();
  Vec3 truth = Vec3::Zero();
};

struct KeypointError {
  int index = 0;
  std::size_t samples = 0;
  double mae = 0.0;   // m
  double rmse = 0.0;  // m
  double pe = 0.0;    // mean |e| / truth distance from camera
};

/// One entry per keypoint index present in `samples`, ascending.
std::vector<KeypointError> keypoint_errors(std::span<const KeypointSample> samples);

struct ScenarioError {
  double iza = 0.0;  // m^2
  double ipx = 0.0;  // m
  double ipy = 0.0;
  double hpx = 0.0;
  double hpy = 0.0;
  double hfd = 0.0;  // degrees
  std::size_t frames = 0;
  std::size_t person_samples = 0;
  std::size_t group_samples = 0;
  std::size_t unmatched_persons = 0;
  /// Frames whose interacting-group count differs from the truth.
  std::vector<std::int64_t> detection_failures;
};

/// Greedy nearest-neighbor association within `gate`: pairs
/// (truth index, predicted index), closest first.
std::vector<std::pair<std::size_t, std::size_t>> match_points(
    std::span<const Vec2> truth, std::span<const Vec2> predicted, double gate);

/// Difference a - b in degrees, wrapped to (-180, 180].
double angle_difference_deg(double a_rad, double b_rad);

ScenarioError scenario_errors(std::span<const FrameResult> results,
                              const ScenarioTruth& truth);

/// Keypoint samples of every matched person in every frame.
std::vector<KeypointSample> collect_keypoint_samples(std::span<const FrameResult> results,
                                                     const ScenarioTruth& truth);

struct StageTiming {
  std::string stage;
  std::size_t samples = 0;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

/// Mean, nearest-rank 95th percentile and maximum of `ms`.
StageTiming summarize_timing(std::string stage, std::span<const double> ms);

struct TimingOptions {
  std::size_t warmup = 10;
  std::size_t repetitions = 1;
  /// Aligns this depth image once per frame and samples keypoint depth
  /// from the result; record depths are used when absent.
  const DepthImage* depth = nullptr;
};

/// Per-stage wall-clock: "alignment" (full-frame depth registration, zero
/// without a depth image), "localization" (depth lookup, 3D keypoints and
/// orientation), "grouping" (clustering and refinement), "costmap",
/// "geometry" (localization and grouping) and "alignment+geometry".
/// Warm-up passes cycle through the frames and are discarded. Empty for
/// zero frames.
std::vector<StageTiming> time_stages(std::span<const FrameRecord> frames,
                                     const CameraCalibration& calib,
                                     const PipelineConfig& config,
                                     const TimingOptions& options = {});

void write_report(std::ostream& out, const std::vector<KeypointError>& keypoints,
                  const ScenarioError& scenario);
void write_keypoint_csv(std::ostream& out, const std::vector<KeypointError>& keypoints);
void write_scenario_csv(std::ostream& out, const ScenarioError& scenario);
void write_timing_table(std::ostream& out, const std::vector<StageTiming>& timings);

}  // namespace groupsense
