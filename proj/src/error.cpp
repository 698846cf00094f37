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

#include "groupsense/error.hpp"

namespace groupsense {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kInvalidDepth: return "invalid_depth";
    case ErrorKind::kBehindCamera: return "behind_camera";
    case ErrorKind::kCalibration: return "calibration";
    case ErrorKind::kInsufficientKeypoints: return "insufficient_keypoints";
    case ErrorKind::kDegenerateNormal: return "degenerate_normal";
    case ErrorKind::kContractViolation: return "contract_violation";
    case ErrorKind::kNoCentroid: return "no_centroid";
    case ErrorKind::kIncompatibleGrids: return "incompatible_grids";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace groupsense
