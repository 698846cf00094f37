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

#include <random>
#include <sstream>

#include "groupsense/metrics.hpp"
#include "oracles.hpp"

using namespace groupsense;

namespace {

FrameResult frame_with(std::int64_t id, std::vector<std::pair<Vec2, double>> persons,
                       std::vector<std::pair<Vec2, double>> groups) {
  FrameResult r;
  r.frame_id = id;
  int pid = 0;
  for (const auto& [pos, theta] : persons) {
    PersonState s;
    s.person_id = pid++;
    s.position = pos;
    s.theta = theta;
    r.persons.push_back(s);
  }
  for (const auto& [c, area] : groups) {
    InteractionGroup g;
    g.centroid = c;
    g.area = area;
    g.interacting = true;
    r.recognition.groups.push_back(g);
  }
  return r;
}

ScenarioTruth two_person_truth() {
  ScenarioTruth t;
  t.persons = {{0, {2, 0}, 0.0, false, {}}, {1, {3, 0}, oracle::kPi, false, {}}};
  t.groups = {{{0, 1}, {2.5, 0}, 0.0}};
  return t;
}

}  // namespace

TEST_CASE("keypoint errors per index") {
  std::vector<KeypointSample> samples = {
      {3, {0, 0, 2.1}, {0, 0, 2}},
      {3, {0.3, 0, 4}, {0, 0, 4}},
      {1, {1, 1, 1}, {1, 1, 1}},
  };
  const auto e = keypoint_errors(samples);
  REQUIRE(e.size() == 2);
  CHECK(e[0].index == 1);
  CHECK(e[0].mae == 0.0);
  CHECK(e[1].index == 3);
  CHECK(e[1].samples == 2);
  CHECK(e[1].mae == doctest::Approx(0.2));
  CHECK(e[1].rmse == doctest::Approx(std::sqrt((0.01 + 0.09) / 2)));
  CHECK(e[1].pe == doctest::Approx((0.1 / 2 + 0.3 / 4) / 2));
  CHECK(keypoint_errors({}).empty());
}

TEST_CASE("greedy matching takes the closest pairs first") {
  const std::vector<Vec2> truth = {{0, 0}, {1, 0}};
  const std::vector<Vec2> pred = {{0.6, 0}, {1.05, 0}, {5, 5}};
  const auto m = match_points(truth, pred, 0.7);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(m[1] == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(match_points(truth, pred, 0.01).empty());
}

TEST_CASE("angle differences wrap") {
  CHECK(angle_difference_deg(0.1, 2 * oracle::kPi - 0.1) == doctest::Approx(0.2 * 180 / oracle::kPi));
  CHECK(angle_difference_deg(oracle::kPi, 0.0) == doctest::Approx(180.0));
  CHECK(angle_difference_deg(0.0, oracle::kPi) == doctest::Approx(180.0));
  CHECK(angle_difference_deg(1.0, 1.0) == 0.0);
}

TEST_CASE("scenario errors are root-mean-square") {
  const ScenarioTruth truth = two_person_truth();
  std::vector<FrameResult> results = {
      frame_with(0, {{{2.1, 0}, 0.0}, {{3, 0.2}, oracle::kPi}}, {{{2.6, 0}, 0.5}}),
      frame_with(1, {{{2, 0}, 0.1}, {{3, 0}, oracle::kPi}}, {{{2.4, 0.3}, 0.0}}),
      frame_with(2, {{{2, 0}, 0.0}}, {}),
  };
  const ScenarioError e = scenario_errors(results, truth);
  CHECK(e.frames == 3);
  CHECK(e.person_samples == 5);
  CHECK(e.unmatched_persons == 1);
  CHECK(e.group_samples == 2);
  CHECK(e.detection_failures == std::vector<std::int64_t>{2});
  CHECK(e.hpx == doctest::Approx(std::sqrt(0.01 / 5)));
  CHECK(e.hpy == doctest::Approx(std::sqrt(0.04 / 5)));
  CHECK(e.hfd == doctest::Approx(std::sqrt(std::pow(0.1 * 180 / oracle::kPi, 2) / 5)));
  CHECK(e.ipx == doctest::Approx(0.1));
  CHECK(e.ipy == doctest::Approx(std::sqrt(0.09 / 2)));
  CHECK(e.iza == doctest::Approx(std::sqrt(0.25 / 2)));
}

TEST_CASE("omitted truth persons are not expected") {
  ScenarioTruth truth = two_person_truth();
  truth.persons[1].omitted = true;
  const auto e = scenario_errors(
      std::vector<FrameResult>{frame_with(0, {{{2, 0}, 0.0}}, {{{2.5, 0}, 0.0}})}, truth);
  CHECK(e.unmatched_persons == 0);
}

TEST_CASE("keypoint samples follow the person association") {
  ScenarioTruth truth = two_person_truth();
  Keypoint3D k;
  k.index = 4;
  k.camera = {0, 0, 2};
  truth.persons[0].keypoints = {k};
  FrameResult r = frame_with(0, {{{2.05, 0}, 0.0}}, {});
  Keypoint3D pk = k;
  pk.camera = {0.1, 0, 2};
  r.persons[0].keypoints = {pk};
  const auto samples = collect_keypoint_samples(std::vector<FrameResult>{r}, truth);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].index == 4);
  CHECK(samples[0].truth == k.camera);
  CHECK(samples[0].predicted == pk.camera);
}

TEST_CASE("timing summaries") {
  std::vector<double> ms(100);
  for (int i = 0; i < 100; ++i) ms[i] = 100 - i;
  const StageTiming t = summarize_timing("x", ms);
  CHECK(t.samples == 100);
  CHECK(t.mean_ms == doctest::Approx(50.5));
  CHECK(t.p95_ms == 95.0);
  CHECK(t.max_ms == 100.0);
  CHECK(summarize_timing("y", {}).samples == 0);
  const std::vector<double> one = {2.0};
  CHECK(summarize_timing("z", one).p95_ms == 2.0);
}

TEST_CASE("stage timing runs every frame") {
  ScenarioSpec spec = *builtin_scenario("S2");
  spec.frame_count = 4;
  const auto s = synthesize_scenario(spec);
  TimingOptions opt;
  opt.warmup = 2;
  opt.repetitions = 2;
  const auto t = time_stages(s.frames, spec.calibration, PipelineConfig{}, opt);
  REQUIRE(t.size() == 6);
  CHECK(t[0].stage == "alignment");
  CHECK(t[1].stage == "localization");
  CHECK(t[4].stage == "geometry");
  CHECK(t[5].stage == "alignment+geometry");
  for (const auto& st : t) {
    CHECK(st.samples == 8);
    CHECK(st.mean_ms >= 0.0);
  }
  CHECK(t[4].mean_ms >= t[2].mean_ms);
  CHECK(t[5].mean_ms >= t[4].mean_ms);
  const DepthImage depth = render_depth_image(spec);
  opt.depth = &depth;
  CHECK(time_stages(s.frames, spec.calibration, PipelineConfig{}, opt)[0].samples == 8);
  CHECK(time_stages({}, spec.calibration, PipelineConfig{}, opt).empty());
}

TEST_CASE("report writers") {
  const std::vector<KeypointError> kp = {{0, 3, 0.01, 0.02, 0.003}};
  ScenarioError s;
  s.hpx = 0.25;
  s.detection_failures = {4, 9};
  std::ostringstream report;
  write_report(report, kp, s);
  CHECK(report.str().find("HFD(deg)") != std::string::npos);
  CHECK(report.str().find("detection failure frames: 4 9") != std::string::npos);
  std::ostringstream csv;
  write_keypoint_csv(csv, kp);
  CHECK(csv.str() == "index,samples,mae_m,rmse_m,pe\n0,3,0.01,0.02,0.0030000000000000001\n");
  std::ostringstream sc;
  write_scenario_csv(sc, s);
  CHECK(sc.str().find("\n0,0,0,0.25,0,0,0,0,0,0,2\n") != std::string::npos);
  std::ostringstream tt;
  write_timing_table(tt, {summarize_timing("grouping", std::vector<double>{1.0, 3.0})});
  CHECK(tt.str().find("grouping") != std::string::npos);
  CHECK(tt.str().find("2.0000") != std::string::npos);
}
