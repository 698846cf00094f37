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

#include "groupsense/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "groupsense/error.hpp"

namespace groupsense {

using nlohmann::json;

namespace {

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 json_vec2(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json group_json(const InteractionGroup& g) {
  json polygon = json::array();
  for (const auto& v : g.polygon) polygon.push_back(vec2_json(v));
  json positions = json::array();
  for (const auto& v : g.member_positions) positions.push_back(vec2_json(v));
  return {{"members", g.member_ids},
          {"member_positions", std::move(positions)},
          {"removed", g.removed_ids},
          {"polygon", std::move(polygon)},
          {"area", g.area},
          {"centroid", vec2_json(g.centroid)},
          {"dispersion", g.dispersion},
          {"interacting", g.interacting}};
}

InteractionGroup parse_group(const json& j) {
  InteractionGroup g;
  g.member_ids = j.at("members").get<std::vector<int>>();
  for (const json& v : j.at("member_positions")) g.member_positions.push_back(json_vec2(v));
  g.removed_ids = j.at("removed").get<std::vector<int>>();
  for (const json& v : j.at("polygon")) g.polygon.push_back(json_vec2(v));
  g.area = j.at("area").get<double>();
  g.centroid = json_vec2(j.at("centroid"));
  g.dispersion = j.at("dispersion").get<double>();
  g.interacting = j.at("interacting").get<bool>();
  return g;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(localization.min_confidence >= 0.0 && localization.min_confidence <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "min confidence must lie in [0, 1]");
  }
  if (localization.min_valid_keypoints < kMinPlaneKeypoints) {
    throw Error(ErrorKind::kInvalidArgument,
                "at least 4 valid keypoints are required per person");
  }
  grouping.validate();
  grid.validate();
  if (!(costmap.inflation_radius >= 0.0) || !(costmap.decay_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "inflation radius must be nonnegative and decay rate positive");
  }
}

void localize_persons(const FrameRecord& frame, const CameraCalibration& calib,
                      const PipelineConfig& config, const DepthImage* aligned_depth,
                      std::vector<PersonState>& persons,
                      std::vector<DroppedPerson>& dropped) {
  std::vector<Keypoint3D> accepted;
  for (const auto& person : frame.persons) {
    accepted.clear();
    for (Keypoint2D kp : person.keypoints) {
      if (kp.confidence < config.localization.min_confidence) continue;
      if (aligned_depth != nullptr) kp.depth = lookup_depth(*aligned_depth, {kp.u, kp.v});
      if (auto k3 = keypoint_to_3d(calib, kp)) accepted.push_back(*k3);
    }
    if (accepted.size() < config.localization.min_valid_keypoints) {
      dropped.push_back({person.id, "only " + std::to_string(accepted.size()) +
                                        " keypoints with depth above confidence threshold"});
      continue;
    }
    try {
      persons.push_back(estimate_person_state(person.id, accepted, config.orientation));
    } catch (const Error& e) {
      dropped.push_back({person.id, e.what()});
    }
  }
}

FrameResult process_frame(const FrameRecord& frame, const CameraCalibration& calib,
                          const PipelineConfig& config, const DepthImage* aligned_depth) {
  FrameResult result;
  result.frame_id = frame.frame_id;
  result.timestamp = frame.timestamp;
  localize_persons(frame, calib, config, aligned_depth, result.persons, result.dropped);
  result.recognition = recognize_groups(result.persons, config.grouping);
  return result;
}

RasterizeResult frame_costmap(const FrameResult& result, const PipelineConfig& config) {
  return rasterize_groups(result.recognition.groups, config.grid, config.costmap);
}

json annotation_json(const FrameResult& r) {
  json persons = json::array();
  for (const auto& p : r.persons) {
    json kps = json::array();
    for (const auto& k : p.keypoints) {
      kps.push_back({k.index, k.camera.x(), k.camera.y(), k.camera.z()});
    }
    persons.push_back({{"id", p.person_id},
                       {"x", p.position.x()},
                       {"y", p.position.y()},
                       {"theta", p.theta},
                       {"n_valid", p.n_valid},
                       {"orientation_confidence", p.orientation_confidence},
                       {"orientation_unverified", p.orientation_unverified},
                       {"keypoints", std::move(kps)}});
  }
  json dropped = json::array();
  for (const auto& d : r.dropped) dropped.push_back({{"id", d.person_id}, {"reason", d.reason}});
  json groups = json::array();
  for (const auto& g : r.recognition.groups) groups.push_back(group_json(g));
  json rejected = json::array();
  for (const auto& g : r.recognition.rejected) rejected.push_back(group_json(g));
  return {{"frame_id", r.frame_id},
          {"timestamp", r.timestamp},
          {"persons", std::move(persons)},
          {"dropped", std::move(dropped)},
          {"groups", std::move(groups)},
          {"rejected", std::move(rejected)},
          {"unclustered", r.recognition.unclustered_ids}};
}

std::string format_annotation(const FrameResult& result) {
  return annotation_json(result).dump();
}

FrameResult parse_annotation(const std::string& line) {
  try {
    const json j = json::parse(line);
    FrameResult r;
    r.frame_id = j.at("frame_id").get<std::int64_t>();
    r.timestamp = j.at("timestamp").get<double>();
    for (const json& p : j.at("persons")) {
      PersonState s;
      s.person_id = p.at("id").get<int>();
      s.position = {p.at("x").get<double>(), p.at("y").get<double>()};
      s.theta = p.at("theta").get<double>();
      s.n_valid = p.at("n_valid").get<int>();
      s.orientation_confidence = p.at("orientation_confidence").get<double>();
      s.orientation_unverified = p.at("orientation_unverified").get<bool>();
      for (const json& k : p.at("keypoints")) {
        Keypoint3D kp;
        kp.index = k.at(0).get<int>();
        kp.camera = {k.at(1).get<double>(), k.at(2).get<double>(), k.at(3).get<double>()};
        kp.world = camera_to_world(kp.camera);
        s.keypoints.push_back(kp);
      }
      r.persons.push_back(std::move(s));
    }
    for (const json& d : j.at("dropped")) {
      r.dropped.push_back({d.at("id").get<int>(), d.at("reason").get<std::string>()});
    }
    for (const json& g : j.at("groups")) r.recognition.groups.push_back(parse_group(g));
    for (const json& g : j.at("rejected")) r.recognition.rejected.push_back(parse_group(g));
    r.recognition.unclustered_ids = j.at("unclustered").get<std::vector<int>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("annotation: ") + e.what());
  }
}

std::vector<FrameResult> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open annotations " + path.string());
  std::vector<FrameResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(parse_annotation(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::kParse,
                  path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

json config_json(const PipelineConfig& c) {
  return {
      {"localization",
       {{"min_confidence", c.localization.min_confidence},
        {"min_valid_keypoints", c.localization.min_valid_keypoints}}},
      {"orientation",
       {{"facing_rule",
         c.orientation.rule == FacingRule::kBodyAxis ? "body_axis" : "lateral"},
        {"min_plane_confidence", c.orientation.min_plane_confidence}}},
      {"grouping",
       {{"epsilon", c.grouping.epsilon},
        {"n_min", c.grouping.n_min},
        {"area_threshold", c.grouping.area_threshold},
        {"dispersion_threshold", c.grouping.dispersion_threshold},
        {"max_ray_length", c.grouping.max_ray_length},
        {"mutual_facing_tolerance", c.grouping.mutual_facing_tolerance}}},
      {"grid",
       {{"origin", vec2_json(c.grid.origin)},
        {"resolution", c.grid.resolution},
        {"width", c.grid.width},
        {"height", c.grid.height}}},
      {"costmap",
       {{"inflation_radius", c.costmap.inflation_radius},
        {"decay_rate", c.costmap.decay_rate}}},
  };
}

}  // namespace groupsense
