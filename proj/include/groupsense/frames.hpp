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

// Keypoint frame streams. One JSON object per line:
//
//   {"frame_id": 3, "timestamp": 0.1,
//    "persons": [{"id": 0, "keypoints": [[index, u, v, depth|null, confidence], ...]}]}
//
// index in 0..16 and unique per person, confidence in [0, 1], depth in
// meters (> 0) or null when unavailable. frame_id strictly increases.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "groupsense/camera.hpp"

namespace groupsense {

struct PersonRecord {
  int id = 0;
  std::vector<Keypoint2D> keypoints;

  bool operator==(const PersonRecord&) const = default;
};

struct FrameRecord {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;
  std::vector<PersonRecord> persons;

  bool operator==(const FrameRecord&) const = default;
};

struct FrameDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct FrameParseResult {
  std::vector<FrameRecord> frames;
  /// Well-formed records dropped for out-of-range values.
  std::vector<FrameDiagnostic> rejected;
};

/// Throws Error(kParse) with the line number on malformed JSON, schema
/// violations or non-increasing frame ids. Records with confidence outside
/// [0, 1] or nonpositive depth are rejected and reported instead.
FrameParseResult parse_frames(std::istream& in);
FrameParseResult load_frames(const std::filesystem::path& path);

std::string format_frame(const FrameRecord& frame);
void write_frames(std::ostream& out, const std::vector<FrameRecord>& frames);
void save_frames(const std::filesystem::path& path,
                 const std::vector<FrameRecord>& frames);

}  // namespace groupsense
