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

#include "groupsense/frames.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "groupsense/error.hpp"

namespace groupsense {

using nlohmann::json;

namespace {

struct SchemaError {
  std::string message;
};

struct RejectedRecord {
  std::string message;
};

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError{std::string("missing field '") + key + "'"};
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw SchemaError{std::string(what) + " must be a number"};
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError{std::string(what) + " must be finite"};
  return v;
}

std::int64_t integer(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw SchemaError{std::string(what) + " must be an integer"};
  }
  return j.get<std::int64_t>();
}

Keypoint2D parse_keypoint(const json& j) {
  if (!j.is_array() || j.size() != 5) {
    throw SchemaError{"keypoint must be [index, u, v, depth|null, confidence]"};
  }
  Keypoint2D kp;
  const std::int64_t index = integer(j[0], "keypoint index");
  if (index < 0 || index >= kNumKeypoints) {
    throw SchemaError{"keypoint index " + std::to_string(index) + " outside 0..16"};
  }
  kp.index = static_cast<int>(index);
  kp.u = number(j[1], "u");
  kp.v = number(j[2], "v");
  if (!j[3].is_null()) {
    kp.depth = number(j[3], "depth");
    if (!(*kp.depth > 0.0)) {
      throw RejectedRecord{"keypoint " + std::to_string(index) +
                           " has nonpositive depth"};
    }
  }
  kp.confidence = number(j[4], "confidence");
  if (kp.confidence < 0.0 || kp.confidence > 1.0) {
    std::ostringstream os;
    os << "keypoint " << index << " confidence " << kp.confidence
       << " outside [0, 1]";
    throw RejectedRecord{os.str()};
  }
  return kp;
}

FrameRecord parse_record(const json& j) {
  if (!j.is_object()) throw SchemaError{"record must be a JSON object"};
  FrameRecord frame;
  frame.frame_id = integer(require(j, "frame_id"), "frame_id");
  frame.timestamp = number(require(j, "timestamp"), "timestamp");
  const json& persons = require(j, "persons");
  if (!persons.is_array()) throw SchemaError{"persons must be an array"};
  for (const json& p : persons) {
    if (!p.is_object()) throw SchemaError{"person must be an object"};
    PersonRecord person;
    person.id = static_cast<int>(integer(require(p, "id"), "person id"));
    const json& kps = require(p, "keypoints");
    if (!kps.is_array()) throw SchemaError{"keypoints must be an array"};
    std::set<int> seen;
    for (const json& k : kps) {
      Keypoint2D kp = parse_keypoint(k);
      if (!seen.insert(kp.index).second) {
        throw SchemaError{"duplicate keypoint index " + std::to_string(kp.index) +
                          " for person " + std::to_string(person.id)};
      }
      person.keypoints.push_back(kp);
    }
    frame.persons.push_back(std::move(person));
  }
  std::set<int> ids;
  for (const auto& p : frame.persons) {
    if (!ids.insert(p.id).second) {
      throw SchemaError{"duplicate person id " + std::to_string(p.id)};
    }
  }
  return frame;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::kParse, "frames line " + std::to_string(line) + ": " + message);
}

}  // namespace

FrameParseResult parse_frames(std::istream& in) {
  FrameParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool have_last = false;
  std::int64_t last_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(line_no, std::string("malformed JSON: ") + e.what());
    }
    FrameRecord frame;
    try {
      frame = parse_record(j);
    } catch (const SchemaError& e) {
      fail(line_no, e.message);
    } catch (const RejectedRecord& e) {
      result.rejected.push_back({line_no, e.message});
      continue;
    }
    if (have_last && frame.frame_id <= last_id) {
      fail(line_no, "frame_id " + std::to_string(frame.frame_id) +
                        " does not increase");
    }
    have_last = true;
    last_id = frame.frame_id;
    result.frames.push_back(std::move(frame));
  }
  return result;
}

FrameParseResult load_frames(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open frames file " + path.string());
  return parse_frames(in);
}

std::string format_frame(const FrameRecord& frame) {
  json persons = json::array();
  for (const auto& p : frame.persons) {
    json kps = json::array();
    for (const auto& k : p.keypoints) {
      kps.push_back({k.index, k.u, k.v, k.depth ? json(*k.depth) : json(nullptr),
                     k.confidence});
    }
    persons.push_back({{"id", p.id}, {"keypoints", std::move(kps)}});
  }
  json j = {{"frame_id", frame.frame_id},
            {"timestamp", frame.timestamp},
            {"persons", std::move(persons)}};
  return j.dump();
}

void write_frames(std::ostream& out, const std::vector<FrameRecord>& frames) {
  for (const auto& f : frames) out << format_frame(f) << '\n';
}

void save_frames(const std::filesystem::path& path,
                 const std::vector<FrameRecord>& frames) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_frames(out, frames);
}

}  // namespace groupsense
