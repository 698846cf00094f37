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

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "groupsense/calibration_io.hpp"
#include "groupsense/error.hpp"
#include "groupsense/orientation.hpp"
#include "groupsense/synth.hpp"
#include "oracles.hpp"

using namespace groupsense;

TEST_CASE("built-in scenarios") {
  const auto all = builtin_scenarios();
  REQUIRE(all.size() == 5);
  const std::size_t sizes[] = {2, 3, 3, 4, 4};
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].name == "S" + std::to_string(i + 1));
    CHECK(all[i].persons.size() == sizes[i]);
    REQUIRE(all[i].groups.size() == 1);
    CHECK(all[i].groups[0].members.size() == sizes[i]);
  }
  CHECK(builtin_scenario("S3").has_value());
  CHECK_FALSE(builtin_scenario("S9").has_value());
  // S1: two people 0.8 m apart facing each other.
  const auto s1 = *builtin_scenario("S1");
  CHECK((s1.persons[0].position - s1.persons[1].position).norm() == doctest::Approx(0.8));
  CHECK(std::abs(wrap_pi(s1.persons[0].theta - s1.persons[1].theta)) == doctest::Approx(oracle::kPi));
}

TEST_CASE("default calibration is valid") {
  const CameraCalibration c = default_calibration();
  CHECK_NOTHROW(c.validate());
  CHECK(c.depth.width == 848);
  CHECK(c.color.width == 1280);
  CHECK(c.translation.norm() == doctest::Approx(0.015));
}

TEST_CASE("body keypoints lie in a vertical plane through the person") {
  PersonSpec p;
  p.position = {3.0, 0.5};
  p.theta = 1.0;
  const auto kps = body_keypoints(p, 0.9);
  REQUIRE(kps.size() == static_cast<std::size_t>(kNumKeypoints));
  const Vec2 facing = oracle::heading(p.theta);
  for (const auto& k : kps) {
    CHECK(std::abs((k.world - p.position).dot(facing)) < 1e-12);
    CHECK(k.world.isApprox(camera_to_world(k.camera)));
  }
  // World y is camera x (to the right), so the person's left is the facing
  // direction rotated by -90 deg.
  const Vec2 across = kps[kLeftShoulder].world - kps[kRightShoulder].world;
  CHECK(oracle::cross(facing, across) < 0.0);
  CHECK(across.norm() == doctest::Approx(p.body.shoulder_width));
  // Ankles are near the ground, the nose near head height.
  CHECK(kps[15].camera.y() == doctest::Approx(0.9 - 0.08));
  CHECK(kps[0].camera.y() == doctest::Approx(0.9 - 1.60));
}

TEST_CASE("noise-free frames project the truth exactly") {
  ScenarioSpec spec = *builtin_scenario("S4");
  spec.frame_count = 3;
  const SyntheticScenario s = synthesize_scenario(spec);
  REQUIRE(s.frames.size() == 3);
  CHECK(s.truth.frame_ids == std::vector<std::int64_t>{0, 1, 2});
  CHECK(s.frames[2].timestamp == doctest::Approx(2.0 / 30.0));
  for (const auto& frame : s.frames) {
    REQUIRE(frame.persons.size() == 4);
    for (const auto& person : frame.persons) {
      const TruthPerson& truth = s.truth.persons[person.id];
      for (const auto& kp : person.keypoints) {
        REQUIRE(kp.depth.has_value());
        CHECK(kp.confidence == 1.0);
        const Vec3 back = oracle::deproject(spec.calibration.color, kp.u, kp.v, *kp.depth);
        CHECK((back - truth.keypoints[kp.index].camera).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("noise is seeded") {
  ScenarioSpec spec = *builtin_scenario("S2");
  spec.frame_count = 5;
  spec.noise = {2.0, 0.01};
  spec.seed = 9;
  const auto a = synthesize_scenario(spec);
  const auto b = synthesize_scenario(spec);
  CHECK(a.frames == b.frames);
  spec.seed = 10;
  CHECK_FALSE(synthesize_scenario(spec).frames == a.frames);
  spec.noise = {};
  const auto clean = synthesize_scenario(spec);
  const double du = a.frames[0].persons[0].keypoints[0].u - clean.frames[0].persons[0].keypoints[0].u;
  CHECK(du != 0.0);
  CHECK(std::abs(du) < 12.0);
}

TEST_CASE("occlusion and people behind the camera") {
  ScenarioSpec spec = *builtin_scenario("S1");
  spec.persons[0].occluded = {5, 6};
  PersonSpec behind;
  behind.position = {-1.0, 0.0};
  spec.persons.push_back(behind);
  const auto s = synthesize_scenario(spec);
  REQUIRE(s.warnings.size() == 1);
  CHECK(s.truth.persons[2].omitted);
  REQUIRE(s.frames[0].persons.size() == 2);
  CHECK(s.frames[0].persons[0].keypoints[5].confidence == 0.0);
  CHECK(s.frames[0].persons[0].keypoints[7].confidence == 1.0);

  spec.persons[0].occluded = {17};
  CHECK_THROWS_AS(synthesize_scenario(spec), Error);
}

TEST_CASE("truth files round trip") {
  ScenarioSpec spec = *builtin_scenario("S5");
  spec.frame_count = 2;
  const auto s = synthesize_scenario(spec);
  std::ostringstream out;
  write_truth(out, s.truth);
  std::istringstream in(out.str());
  const ScenarioTruth t = read_truth(in);
  CHECK(t.scenario == "S5");
  CHECK(t.frame_ids == s.truth.frame_ids);
  REQUIRE(t.persons.size() == 4);
  CHECK(t.persons[1].position == s.truth.persons[1].position);
  CHECK(t.persons[1].theta == s.truth.persons[1].theta);
  CHECK(t.persons[1].keypoints[3].camera == s.truth.persons[1].keypoints[3].camera);
  REQUIRE(t.groups.size() == 1);
  CHECK(t.groups[0].interest_point == s.truth.groups[0].interest_point);
  std::istringstream bad("{\"frame_ids\": 3}");
  CHECK_THROWS_AS(read_truth(bad), Error);
}

TEST_CASE("scenario spec files") {
  const auto dir = oracle::temp_dir("synth_spec");
  CameraCalibration calib = default_calibration();
  calib.color.fx = 800.0;
  save_calibration(dir / "cam.txt", calib);
  {
    std::ofstream f(dir / "scene.json");
    f << R"({"name": "pair", "seed": 4, "frame_count": 6,
             "noise": {"pixel_sigma": 1.0},
             "calibration_file": "cam.txt",
             "persons": [{"x": 3, "y": -0.5, "theta": 1.5708, "occluded": [0]},
                         {"x": 3, "y": 0.5, "theta": -1.5708, "height": 1.6}]})";
  }
  const ScenarioSpec s = load_scenario_spec(dir / "scene.json");
  CHECK(s.name == "pair");
  CHECK(s.seed == 4);
  CHECK(s.frame_count == 6);
  CHECK(s.noise.pixel_sigma == 1.0);
  CHECK(s.noise.depth_sigma == 0.0);
  CHECK(s.calibration.color.fx == 800.0);
  REQUIRE(s.persons.size() == 2);
  CHECK(s.persons[0].occluded == std::vector<int>{0});
  CHECK(s.persons[1].body.height == 1.6);
  CHECK(s.groups.empty());
  // Groups are derived from the ideal geometry when not given.
  const auto synth = synthesize_scenario(s);
  REQUIRE(synth.truth.groups.size() == 1);
  CHECK(synth.truth.groups[0].members == std::vector<int>{0, 1});
  CHECK((synth.truth.groups[0].interest_point - Vec2(3, 0)).norm() < 1e-9);

  {
    std::ofstream f(dir / "broken.json");
    f << R"({"persons": [{"x": 3}]})";
  }
  CHECK_THROWS_AS(load_scenario_spec(dir / "broken.json"), Error);
  CHECK_THROWS_AS(load_scenario_spec(dir / "absent.json"), Error);
}

TEST_CASE("rendered depth image") {
  const ScenarioSpec spec = *builtin_scenario("S1");
  const DepthImage img = render_depth_image(spec, 7.0);
  CHECK(img.width() == 848);
  CHECK(img.height() == 480);
  // Image corners see the wall, roughly at its distance.
  CHECK(img.at(0, 0) > 6.9f);
  CHECK(img.at(0, 0) < 7.1f);
  // The people stand in front of it near the image center.
  float nearest = 100.0f;
  for (float d : img.data()) nearest = std::min(nearest, d);
  CHECK(nearest > 1.5f);
  CHECK(nearest < 3.0f);
}
