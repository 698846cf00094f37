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

#include "groupsense/synth.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "groupsense/calibration_io.hpp"
#include "groupsense/error.hpp"
#include "groupsense/grouping.hpp"

namespace groupsense {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double deg(double d) { return d * kPi / 180.0; }

// Person's left in the ground frame: the facing direction turned by -pi/2.
Vec2 left_of(double theta) { return {std::sin(theta), -std::cos(theta)}; }

PersonSpec facing_point(const Vec2& position, const Vec2& target) {
  PersonSpec p;
  p.position = position;
  const Vec2 d = target - position;
  p.theta = std::fmod(std::atan2(d.y(), d.x()) + 2.0 * kPi, 2.0 * kPi);
  return p;
}

// People on a circle around `center` at the given angles, all facing it.
std::vector<PersonSpec> ring(const Vec2& center, double radius,
                             std::initializer_list<double> angles_deg) {
  std::vector<PersonSpec> out;
  for (double a : angles_deg) {
    const Vec2 pos = center + radius * Vec2(std::cos(deg(a)), std::sin(deg(a)));
    out.push_back(facing_point(pos, center));
  }
  return out;
}

ScenarioSpec make_spec(std::string name, std::vector<PersonSpec> persons,
                       const Vec2& interest_point) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.persons = std::move(persons);
  s.calibration = default_calibration();
  GroupSpec g;
  for (std::size_t i = 0; i < s.persons.size(); ++i) {
    g.members.push_back(static_cast<int>(i));
  }
  g.interest_point = interest_point;
  g.area = 0.0;
  s.groups.push_back(std::move(g));
  return s;
}

std::vector<GroupSpec> derive_groups(const std::vector<TruthPerson>& persons) {
  std::vector<PersonState> states;
  for (const auto& p : persons) {
    PersonState s;
    s.person_id = p.id;
    s.position = p.position;
    s.theta = p.theta;
    states.push_back(s);
  }
  std::vector<GroupSpec> out;
  for (const auto& g : recognize_groups(states, GroupingConfig{}).groups) {
    out.push_back({g.member_ids, g.centroid, g.area});
  }
  return out;
}

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 json_vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorKind::kParse, "expected a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::array<Vec2, kNumKeypoints> BodyTemplate::offsets() const {
  const double k = height / 1.70;
  const double sw = 0.5 * shoulder_width;
  const double hw = 0.5 * hip_width;
  const std::array<Vec2, kNumKeypoints> raw = {{
      {0.0, 1.60},                    // nose
      {0.035, 1.64}, {-0.035, 1.64},  // eyes
      {0.075, 1.62}, {-0.075, 1.62},  // ears
      {sw, 1.45}, {-sw, 1.45},        // shoulders
      {sw + 0.05, 1.15}, {-(sw + 0.05), 1.15},  // elbows
      {sw + 0.07, 0.88}, {-(sw + 0.07), 0.88},  // wrists
      {hw, 0.95}, {-hw, 0.95},                  // hips
      {hw - 0.01, 0.50}, {-(hw - 0.01), 0.50},  // knees
      {hw - 0.02, 0.08}, {-(hw - 0.02), 0.08},  // ankles
  }};
  std::array<Vec2, kNumKeypoints> out;
  for (int i = 0; i < kNumKeypoints; ++i) out[i] = {raw[i].x(), k * raw[i].y()};
  return out;
}

void ScenarioSpec::validate() const {
  if (!(noise.pixel_sigma >= 0.0) || !(noise.depth_sigma >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "noise sigmas must be nonnegative");
  }
  if (frame_count < 0) {
    throw Error(ErrorKind::kInvalidArgument, "frame_count must be nonnegative");
  }
  if (!(camera_height > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "camera height must be positive");
  }
  calibration.validate();
  for (const auto& p : persons) {
    for (int idx : p.occluded) {
      if (idx < 0 || idx >= kNumKeypoints) {
        throw Error(ErrorKind::kInvalidArgument, "occluded keypoint index out of range");
      }
    }
  }
}

CameraCalibration default_calibration() {
  CameraCalibration c;
  c.depth = {425.0, 425.0, 424.0, 240.0, 848, 480};
  c.color = {910.0, 910.0, 640.0, 360.0, 1280, 720};
  const Eigen::AngleAxisd tilt(deg(0.2), Vec3(0.3, 1.0, 0.1).normalized());
  c.rotation = tilt.toRotationMatrix();
  c.translation = Vec3(0.015, 0.0, 0.0);
  return c;
}

std::vector<ScenarioSpec> builtin_scenarios() {
  std::vector<ScenarioSpec> out;
  {
    const Vec2 mid(2.5, 0.0);
    const Vec2 axis(std::cos(deg(60.0)), std::sin(deg(60.0)));
    const Vec2 a = mid - 0.4 * axis;
    const Vec2 b = mid + 0.4 * axis;
    out.push_back(make_spec("S1", {facing_point(a, b), facing_point(b, a)}, mid));
  }
  out.push_back(make_spec("S2", ring({2.0, 0.0}, 1.0, {-60.0, 0.0, 60.0}), {2.0, 0.0}));
  out.push_back(make_spec("S3", ring({3.0, 0.0}, 1.2 / std::sqrt(3.0),
                                     {180.0, 60.0, -60.0}),
                          {3.0, 0.0}));
  out.push_back(make_spec("S4", ring({3.0, 0.0}, 1.0, {90.0, 30.0, -30.0, -90.0}),
                          {3.0, 0.0}));
  out.push_back(make_spec("S5", ring({3.5, 0.0}, 0.8, {45.0, 135.0, 225.0, 315.0}),
                          {3.5, 0.0}));
  return out;
}

std::optional<ScenarioSpec> builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::vector<Keypoint3D> body_keypoints(const PersonSpec& person, double camera_height) {
  const Vec2 left = left_of(person.theta);
  std::vector<Keypoint3D> out;
  const auto offsets = person.body.offsets();
  for (int i = 0; i < kNumKeypoints; ++i) {
    Keypoint3D kp;
    kp.index = i;
    kp.world = person.position + offsets[i].x() * left;
    kp.camera = world_to_camera(kp.world, camera_height - offsets[i].y());
    out.push_back(kp);
  }
  return out;
}

SyntheticScenario synthesize_scenario(const ScenarioSpec& spec) {
  spec.validate();
  SyntheticScenario out;
  out.truth.scenario = spec.name;

  for (std::size_t i = 0; i < spec.persons.size(); ++i) {
    const PersonSpec& p = spec.persons[i];
    TruthPerson t;
    t.id = static_cast<int>(i);
    t.position = p.position;
    t.theta = std::fmod(std::fmod(p.theta, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    t.keypoints = body_keypoints(p, spec.camera_height);
    t.omitted = p.position.x() <= 0.0;
    if (t.omitted) {
      out.warnings.push_back("person " + std::to_string(i) +
                             " is behind the camera; omitted from frames");
    }
    out.truth.persons.push_back(std::move(t));
  }
  out.truth.groups = spec.groups.empty() ? derive_groups(out.truth.persons) : spec.groups;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const NoiseSpec& noise = spec.noise;
  const Intrinsics& color = spec.calibration.color;

  for (int f = 0; f < spec.frame_count; ++f) {
    FrameRecord frame;
    frame.frame_id = f;
    frame.timestamp = f * spec.frame_interval;
    for (std::size_t i = 0; i < spec.persons.size(); ++i) {
      const TruthPerson& truth = out.truth.persons[i];
      if (truth.omitted) continue;
      const std::set<int> occluded(spec.persons[i].occluded.begin(),
                                   spec.persons[i].occluded.end());
      PersonRecord person;
      person.id = truth.id;
      for (const auto& kp3 : truth.keypoints) {
        Keypoint2D kp;
        kp.index = kp3.index;
        if (!(kp3.camera.z() > 0.0)) {
          kp.confidence = 0.0;
          person.keypoints.push_back(kp);
          continue;
        }
        const Vec2 px = project(color, kp3.camera);
        kp.u = px.x();
        kp.v = px.y();
        double depth = kp3.camera.z();
        if (noise.pixel_sigma > 0.0) {
          kp.u += noise.pixel_sigma * gauss(rng);
          kp.v += noise.pixel_sigma * gauss(rng);
        }
        if (noise.depth_sigma > 0.0) depth += noise.depth_sigma * gauss(rng);
        const bool visible = color.contains(kp.u, kp.v);
        if (visible && depth > 0.0) kp.depth = depth;
        kp.confidence = (visible && !occluded.count(kp.index)) ? 1.0 : 0.0;
        person.keypoints.push_back(kp);
      }
      frame.persons.push_back(std::move(person));
    }
    out.truth.frame_ids.push_back(frame.frame_id);
    out.frames.push_back(std::move(frame));
  }
  return out;
}

DepthImage render_depth_image(const ScenarioSpec& spec, double wall_distance) {
  const CameraCalibration& calib = spec.calibration;
  const Intrinsics& kd = calib.depth;
  DepthImage img(kd.width, kd.height);
  const Vec3 origin = calib.translation;  // depth camera center in color frame

  struct Slab {
    Vec3 center, normal, lateral;
    double half_width, height;
  };
  std::vector<Slab> slabs;
  for (const auto& p : spec.persons) {
    const Vec2 f(std::cos(p.theta), std::sin(p.theta));
    const Vec2 l = left_of(p.theta);
    slabs.push_back({world_to_camera(p.position, spec.camera_height),
                     Vec3(f.y(), 0.0, f.x()), Vec3(l.y(), 0.0, l.x()),
                     0.5 * p.body.shoulder_width + 0.1, p.body.height});
  }

  for (int y = 0; y < kd.height; ++y) {
    for (int x = 0; x < kd.width; ++x) {
      const Vec3 ray_d((x - kd.cx) / kd.fx, (y - kd.cy) / kd.fy, 1.0);
      const Vec3 ray = calib.rotation * ray_d;
      double best = ray.z() > 0.0 ? (wall_distance - origin.z()) / ray.z() : 0.0;
      for (const auto& s : slabs) {
        const double denom = ray.dot(s.normal);
        if (std::abs(denom) < 1e-12) continue;
        const double t = (s.center - origin).dot(s.normal) / denom;
        if (!(t > 0.0) || t >= best) continue;
        const Vec3 q = origin + t * ray;
        const Vec3 rel = q - s.center;
        const double h = spec.camera_height - q.y();
        if (std::abs(rel.dot(s.lateral)) <= s.half_width && h >= 0.0 && h <= s.height) {
          best = t;
        }
      }
      if (best > 0.0) img.at(x, y) = static_cast<float>(best);
    }
  }
  return img;
}

ScenarioSpec load_scenario_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open scenario spec " + path.string());
  try {
    const json j = json::parse(in);
    ScenarioSpec s;
    s.name = j.value("name", path.stem().string());
    s.camera_height = j.value("camera_height", 0.9);
    s.seed = j.value("seed", std::uint64_t{0});
    s.frame_count = j.value("frame_count", 1);
    if (auto it = j.find("noise"); it != j.end()) {
      s.noise.pixel_sigma = it->value("pixel_sigma", 0.0);
      s.noise.depth_sigma = it->value("depth_sigma", 0.0);
    }
    s.calibration = default_calibration();
    if (auto it = j.find("calibration_file"); it != j.end()) {
      s.calibration = load_calibration(path.parent_path() / it->get<std::string>());
    }
    for (const json& p : j.at("persons")) {
      PersonSpec ps;
      ps.position = {p.at("x").get<double>(), p.at("y").get<double>()};
      ps.theta = p.at("theta").get<double>();
      ps.body.shoulder_width = p.value("shoulder_width", ps.body.shoulder_width);
      ps.body.hip_width = p.value("hip_width", ps.body.hip_width);
      ps.body.height = p.value("height", ps.body.height);
      ps.occluded = p.value("occluded", std::vector<int>{});
      ps.out_of_view = p.value("out_of_view", false);
      s.persons.push_back(std::move(ps));
    }
    if (auto it = j.find("groups"); it != j.end()) {
      for (const json& g : *it) {
        GroupSpec gs;
        gs.members = g.at("members").get<std::vector<int>>();
        gs.interest_point = json_vec2(g.at("interest_point"));
        gs.area = g.value("area", 0.0);
        s.groups.push_back(std::move(gs));
      }
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse,
                "scenario spec " + path.string() + ": " + e.what());
  }
}

void write_truth(std::ostream& out, const ScenarioTruth& truth) {
  json persons = json::array();
  for (const auto& p : truth.persons) {
    json kps = json::array();
    for (const auto& k : p.keypoints) {
      kps.push_back({k.index, k.camera.x(), k.camera.y(), k.camera.z()});
    }
    persons.push_back({{"id", p.id},
                       {"x", p.position.x()},
                       {"y", p.position.y()},
                       {"theta", p.theta},
                       {"omitted", p.omitted},
                       {"keypoints", std::move(kps)}});
  }
  json groups = json::array();
  for (const auto& g : truth.groups) {
    groups.push_back({{"members", g.members},
                      {"interest_point", vec2_json(g.interest_point)},
                      {"area", g.area}});
  }
  json j = {{"scenario", truth.scenario},
            {"frame_ids", truth.frame_ids},
            {"persons", std::move(persons)},
            {"groups", std::move(groups)}};
  out << j.dump(2) << '\n';
}

ScenarioTruth read_truth(std::istream& in) {
  try {
    const json j = json::parse(in);
    ScenarioTruth t;
    t.scenario = j.value("scenario", std::string{});
    t.frame_ids = j.at("frame_ids").get<std::vector<std::int64_t>>();
    for (const json& p : j.at("persons")) {
      TruthPerson tp;
      tp.id = p.at("id").get<int>();
      tp.position = {p.at("x").get<double>(), p.at("y").get<double>()};
      tp.theta = p.at("theta").get<double>();
      tp.omitted = p.value("omitted", false);
      for (const json& k : p.at("keypoints")) {
        Keypoint3D kp;
        kp.index = k.at(0).get<int>();
        kp.camera = {k.at(1).get<double>(), k.at(2).get<double>(), k.at(3).get<double>()};
        kp.world = camera_to_world(kp.camera);
        tp.keypoints.push_back(kp);
      }
      t.persons.push_back(std::move(tp));
    }
    for (const json& g : j.at("groups")) {
      GroupSpec gs;
      gs.members = g.at("members").get<std::vector<int>>();
      gs.interest_point = json_vec2(g.at("interest_point"));
      gs.area = g.value("area", 0.0);
      t.groups.push_back(std::move(gs));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("truth file: ") + e.what());
  }
}

void save_truth(const std::filesystem::path& path, const ScenarioTruth& truth) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_truth(out, truth);
}

ScenarioTruth load_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open truth file " + path.string());
  return read_truth(in);
}

}  // namespace groupsense
