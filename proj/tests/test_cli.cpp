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
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "groupsense/costmap.hpp"
#include "groupsense/synth.hpp"
#include "oracles.hpp"

using namespace groupsense;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = groupsense::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == groupsense::cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == groupsense::cli::kExitUsage);
  const Outcome r = invoke({"run", "--frames", "x.jsonl"});
  CHECK(r.code == groupsense::cli::kExitUsage);
  CHECK(r.err.rfind("error code=4 kind=usage", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("synth, run and eval") {
  const fs::path dir = oracle::temp_dir("cli_flow");
  Outcome r = invoke({"synth", "S3", "--frames", "4", "--sigma-px", "1", "--seed", "3", "--out",
                   s(dir / "syn")});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "syn" / "frames.jsonl"));
  CHECK(fs::exists(dir / "syn" / "truth.json"));
  CHECK(fs::exists(dir / "syn" / "calibration.txt"));

  r = invoke({"run", "--calib", s(dir / "syn" / "calibration.txt"), "--frames",
           s(dir / "syn" / "frames.jsonl"), "--out", s(dir / "run")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("processed 4 frames") != std::string::npos);
  for (int i = 0; i < 4; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06d.smap", i);
    const SocialCostmap map = load_costmap(dir / "run" / "costmaps" / name);
    CHECK(map.spec() == GridSpec{});
  }
  const auto summary = nlohmann::json::parse(oracle::read_file(dir / "run" / "summary.json"));
  CHECK(summary.at("frames") == 4);
  CHECK(summary.at("interacting_groups") == 4);
  CHECK(summary.at("generated") != "-");

  r = invoke({"eval", "--run", s(dir / "run"), "--truth", s(dir / "syn" / "truth.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Scenario RMSE") != std::string::npos);
  CHECK(fs::exists(dir / "run" / "report.txt"));
  CHECK(fs::exists(dir / "run" / "keypoints.csv"));
  const std::string csv = oracle::read_file(dir / "run" / "scenario.csv");
  CHECK(csv.rfind("iza_m2,", 0) == 0);
  CHECK(csv.find(",4,12,4,0,0\n") != std::string::npos);
}

TEST_CASE("runs are reproducible without timestamps, also with threads") {
  const fs::path dir = oracle::temp_dir("cli_repro");
  REQUIRE(invoke({"synth", "S5", "--frames", "6", "--sigma-px", "2", "--out", s(dir / "syn")}).code == 0);
  const std::string calib = s(dir / "syn" / "calibration.txt");
  const std::string frames = s(dir / "syn" / "frames.jsonl");
  REQUIRE(invoke({"run", "--calib", calib, "--frames", frames, "--no-timestamp", "--out", s(dir / "a")})
              .code == 0);
  REQUIRE(invoke({"run", "--calib", calib, "--frames", frames, "--no-timestamp", "--jobs", "3",
               "--out", s(dir / "b")})
              .code == 0);
  for (const char* f : {"annotations.jsonl", "costmaps/frame_000005.smap"}) {
    CHECK(oracle::read_file(dir / "a" / f) == oracle::read_file(dir / "b" / f));
  }
  const auto summary = nlohmann::json::parse(oracle::read_file(dir / "a" / "summary.json"));
  CHECK(summary.at("generated") == "-");
}

TEST_CASE("run exit codes") {
  const fs::path dir = oracle::temp_dir("cli_codes");
  REQUIRE(invoke({"synth", "S1", "--out", s(dir / "syn")}).code == 0);
  const std::string calib = s(dir / "syn" / "calibration.txt");
  const std::string frames = s(dir / "syn" / "frames.jsonl");

  Outcome r = invoke({"run", "--calib", s(dir / "none.txt"), "--frames", frames, "--out",
                   s(dir / "o1")});
  CHECK(r.code == groupsense::cli::kExitCalibration);
  CHECK(r.err.rfind("error code=2 kind=calibration", 0) == 0);
  CHECK_FALSE(fs::exists(dir / "o1"));

  {
    std::ofstream f(dir / "bad.jsonl");
    f << "{oops\n";
  }
  r = invoke({"run", "--calib", calib, "--frames", s(dir / "bad.jsonl"), "--out", s(dir / "o2")});
  CHECK(r.code == groupsense::cli::kExitFrames);
  CHECK(r.err.find("kind=parse") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "o2"));

  r = invoke({"run", "--calib", calib, "--frames", frames, "--epsilon", "-1", "--out", s(dir / "o3")});
  CHECK(r.code == groupsense::cli::kExitUsage);
  r = invoke({"run", "--calib", calib, "--frames", frames, "--facing-rule", "sideways", "--out",
           s(dir / "o3")});
  CHECK(r.code == groupsense::cli::kExitUsage);

  r = invoke({"run", "--calib", calib, "--frames", frames, "--no-costmaps", "--facing-rule",
           "lateral", "--out", s(dir / "o4")});
  CHECK(r.code == 0);
  CHECK_FALSE(fs::exists(dir / "o4" / "costmaps"));
}

TEST_CASE("synth and eval exit codes") {
  const fs::path dir = oracle::temp_dir("cli_eval_codes");
  CHECK(invoke({"synth", "S7", "--out", s(dir / "x")}).code == groupsense::cli::kExitUsage);
  CHECK(invoke({"synth", "--out", s(dir / "x")}).code == groupsense::cli::kExitUsage);
  REQUIRE(invoke({"synth", "S2", "--frames", "3", "--out", s(dir / "syn")}).code == 0);
  REQUIRE(invoke({"run", "--calib", s(dir / "syn" / "calibration.txt"), "--frames",
               s(dir / "syn" / "frames.jsonl"), "--out", s(dir / "run")})
              .code == 0);
  Outcome r = invoke({"eval", "--run", s(dir / "run"), "--truth", s(dir / "missing.json")});
  CHECK(r.code == groupsense::cli::kExitEvaluation);

  REQUIRE(invoke({"synth", "S2", "--frames", "5", "--out", s(dir / "syn5")}).code == 0);
  r = invoke({"eval", "--run", s(dir / "run"), "--truth", s(dir / "syn5" / "truth.json")});
  CHECK(r.code == groupsense::cli::kExitEvaluation);
  CHECK(r.err.find("frames missing from run: 3 4") != std::string::npos);

  r = invoke({"eval", "--run", s(dir / "run"), "--truth", s(dir / "syn" / "truth.json"), "--out",
           s(dir / "report")});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "report" / "report.txt"));
  CHECK_FALSE(fs::exists(dir / "run" / "report.txt"));
}

TEST_CASE("bench") {
  const fs::path dir = oracle::temp_dir("cli_bench");
  Outcome r = invoke({"bench", "--scenario", "S2", "--frames-count", "20", "--warmup", "2",
                   "--out", s(dir)});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("geometry") != std::string::npos);
  CHECK(r.out.find("budget 1 ms:") != std::string::npos);
  const std::string csv = oracle::read_file(dir / "timing.csv");
  CHECK(csv.rfind("stage,samples,mean_ms,p95_ms,max_ms\n", 0) == 0);
  CHECK(csv.find("geometry,20,") != std::string::npos);

  r = invoke({"bench", "--frames-count", "5", "--warmup", "0", "--budget-ms", "1e-9", "--enforce"});
  CHECK(r.code == groupsense::cli::kExitBudget);
  CHECK(r.err.rfind("error code=6 kind=budget", 0) == 0);
  CHECK(invoke({"bench", "--repetitions", "0"}).code == groupsense::cli::kExitUsage);
  CHECK(invoke({"bench", "--frames", "x.jsonl"}).code == groupsense::cli::kExitUsage);
}
