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

// Text calibration files, one `key = values` entry per line:
//
//   # comment
//   depth.fx = 425.0          depth.fy, depth.cx, depth.cy
//   depth.width = 848         depth.height
//   color.fx = 910.0          color.fy, color.cx, color.cy, color.width, color.height
//   rotation = r00 r01 r02 r10 r11 r12 r20 r21 r22     (depth -> color, row-major)
//   translation = tx ty tz                            (meters)
//
// Every key is required exactly once. Loading validates the result.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "groupsense/camera.hpp"

namespace groupsense {

CameraCalibration parse_calibration(std::istream& in);
CameraCalibration load_calibration(const std::filesystem::path& path);

void write_calibration(std::ostream& out, const CameraCalibration& calib);
void save_calibration(const std::filesystem::path& path,
                      const CameraCalibration& calib);

}  // namespace groupsense
