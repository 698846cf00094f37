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

// Per-frame recognition: keypoints -> person states -> interaction groups
// -> social costmap.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "groupsense/camera.hpp"
#include "groupsense/costmap.hpp"
#include "groupsense/frames.hpp"
#include "groupsense/grouping.hpp"
#include "groupsense/orientation.hpp"

namespace groupsense {

struct LocalizationConfig {
  double min_confidence = 0.3;
  std::size_t min_valid_keypoints = 4;
};

struct PipelineConfig {
  LocalizationConfig localization;
  OrientationOptions orientation;
  GroupingConfig grouping;
  GridSpec grid;
  CostmapOptions costmap;

  void validate() const;
};

struct DroppedPerson {
  int person_id = 0;
  std::string reason;
};

struct FrameResult {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;
  std::vector<PersonState> persons;
  std::vector<DroppedPerson> dropped;
  RecognitionResult recognition;
};

/// Lifts every person's keypoints and estimates position and facing.
/// When `aligned_depth` is given, keypoint depths are sampled from it
/// instead of taken from the record.
void localize_persons(const FrameRecord& frame, const CameraCalibration& calib,
                      const PipelineConfig& config, const DepthImage* aligned_depth,
                      std::vector<PersonState>& persons,
                      std::vector<DroppedPerson>& dropped);

FrameResult process_frame(const FrameRecord& frame, const CameraCalibration& calib,
                          const PipelineConfig& config,
                          const DepthImage* aligned_depth = nullptr);

RasterizeResult frame_costmap(const FrameResult& result, const PipelineConfig& config);

// Annotation files: one JSON object per frame and line.
nlohmann::json annotation_json(const FrameResult& result);
std::string format_annotation(const FrameResult& result);
FrameResult parse_annotation(const std::string& line);
std::vector<FrameResult> load_annotations(const std::filesystem::path& path);

nlohmann::json config_json(const PipelineConfig& config);

}  // namespace groupsense
