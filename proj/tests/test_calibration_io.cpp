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

#include "groupsense/calibration_io.hpp"
#include "groupsense/error.hpp"
#include "groupsense/synth.hpp"
#include "oracles.hpp"

using namespace groupsense;

namespace {

const char* kValid =
    "# sensor pair\n"
    "depth.fx = 425.5\n depth.fy = 425.5\ndepth.cx = 424\ndepth.cy = 240\n"
    "depth.width = 848\ndepth.height = 480   # trailing comment\n"
    "\n"
    "color.fx = 910\ncolor.fy = 911\ncolor.cx = 640\ncolor.cy = 360\n"
    "color.width = 1280\ncolor.height = 720\n"
    "rotation = 1 0 0 0 1 0 0 0 1\n"
    "translation = 0.015 0 -1e-3\n";

CameraCalibration parse(const std::string& text) {
  std::istringstream in(text);
  return parse_calibration(in);
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIo;
}

}  // namespace

TEST_CASE("parses a complete file") {
  const CameraCalibration c = parse(kValid);
  CHECK(c.depth.fx == 425.5);
  CHECK(c.depth.width == 848);
  CHECK(c.color.fy == 911.0);
  CHECK(c.rotation == Mat3::Identity());
  CHECK(c.translation == Vec3(0.015, 0.0, -1e-3));
}

TEST_CASE("round trip is exact") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> a(-0.1, 0.1);
  for (int i = 0; i < 50; ++i) {
    CameraCalibration c = default_calibration();
    c.rotation = oracle::rotation(a(rng), a(rng), a(rng));
    c.translation = Vec3(a(rng), a(rng), a(rng));
    c.color.cx += a(rng);
    std::ostringstream out;
    write_calibration(out, c);
    const CameraCalibration back = parse(out.str());
    CHECK(back.rotation == c.rotation);
    CHECK(back.translation == c.translation);
    CHECK(back.color.cx == c.color.cx);
    std::ostringstream again;
    write_calibration(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("file round trip") {
  const auto dir = oracle::temp_dir("calibration");
  save_calibration(dir / "c.txt", default_calibration());
  const CameraCalibration c = load_calibration(dir / "c.txt");
  CHECK(c.rotation == default_calibration().rotation);
  CHECK_THROWS_AS(load_calibration(dir / "missing.txt"), Error);
}

TEST_CASE("errors are calibration errors") {
  CHECK(kind_of(replace(kValid, "depth.fx = 425.5\n", "")) == ErrorKind::kCalibration);
  CHECK(kind_of(std::string(kValid) + "depth.fx = 1\n") == ErrorKind::kCalibration);
  CHECK(kind_of(std::string(kValid) + "bogus = 1\n") == ErrorKind::kCalibration);
  CHECK(kind_of(std::string(kValid) + "no equals sign\n") == ErrorKind::kCalibration);
  CHECK(kind_of(replace(kValid, "0.015 0 -1e-3", "0.015 0")) == ErrorKind::kCalibration);
  CHECK(kind_of(replace(kValid, "0.015 0 -1e-3", "0.015 0 x")) == ErrorKind::kCalibration);
  CHECK(kind_of(replace(kValid, "depth.width = 848", "depth.width = 848.5")) ==
        ErrorKind::kCalibration);
  CHECK(kind_of(replace(kValid, "color.fx = 910", "color.fx = -910")) ==
        ErrorKind::kCalibration);
  CHECK(kind_of(replace(kValid, "1 0 0 0 1 0 0 0 1", "1 0 0 0 1 0 0 0 -1")) ==
        ErrorKind::kCalibration);
  CHECK(kind_of(replace(kValid, "1 0 0 0 1 0 0 0 1", "1 0.01 0 0 1 0 0 0 1")) ==
        ErrorKind::kCalibration);
}

TEST_CASE("error messages carry the line number") {
  try {
    parse(std::string(kValid) + "bogus = 1\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 17") != std::string::npos);
  }
}
