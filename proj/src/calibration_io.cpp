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

#include "groupsense/calibration_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "groupsense/error.hpp"
#include "groupsense/numeric_format.hpp"

namespace groupsense {

namespace {

struct FieldSpec {
  const char* key;
  std::size_t count;
};

constexpr FieldSpec kFields[] = {
    {"depth.fx", 1}, {"depth.fy", 1}, {"depth.cx", 1}, {"depth.cy", 1},
    {"depth.width", 1}, {"depth.height", 1},
    {"color.fx", 1}, {"color.fy", 1}, {"color.cx", 1}, {"color.cy", 1},
    {"color.width", 1}, {"color.height", 1},
    {"rotation", 9}, {"translation", 3},
};

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  std::ostringstream os;
  os << "calibration line " << line << ": " << message;
  throw Error(ErrorKind::kCalibration, os.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int as_dimension(double value, const char* key) {
  if (value != static_cast<int>(value) || value <= 0) {
    throw Error(ErrorKind::kCalibration,
                std::string(key) + " must be a positive integer");
  }
  return static_cast<int>(value);
}

}  // namespace

CameraCalibration parse_calibration(std::istream& in) {
  std::map<std::string, std::vector<double>> values;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = values'");
    const std::string key = trim(line.substr(0, eq));
    const FieldSpec* spec = nullptr;
    for (const auto& f : kFields) {
      if (key == f.key) spec = &f;
    }
    if (spec == nullptr) fail(line_no, "unknown field '" + key + "'");
    if (values.count(key)) fail(line_no, "duplicate field '" + key + "'");

    std::vector<double> parsed;
    std::istringstream tokens(line.substr(eq + 1));
    std::string token;
    while (tokens >> token) {
      double v = 0.0;
      if (!parse_double(token, v)) fail(line_no, "'" + token + "' is not a number");
      parsed.push_back(v);
    }
    if (parsed.size() != spec->count) {
      std::ostringstream os;
      os << "field '" << key << "' expects " << spec->count << " values, got "
         << parsed.size();
      fail(line_no, os.str());
    }
    values.emplace(key, std::move(parsed));
  }
  for (const auto& f : kFields) {
    if (!values.count(f.key)) {
      throw Error(ErrorKind::kCalibration,
                  std::string("calibration is missing field '") + f.key + "'");
    }
  }

  auto intrinsics = [&](const std::string& prefix) {
    Intrinsics k;
    k.fx = values[prefix + ".fx"][0];
    k.fy = values[prefix + ".fy"][0];
    k.cx = values[prefix + ".cx"][0];
    k.cy = values[prefix + ".cy"][0];
    k.width = as_dimension(values[prefix + ".width"][0], "width");
    k.height = as_dimension(values[prefix + ".height"][0], "height");
    return k;
  };

  CameraCalibration calib;
  calib.depth = intrinsics("depth");
  calib.color = intrinsics("color");
  const auto& r = values["rotation"];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) calib.rotation(i, j) = r[3 * i + j];
  }
  const auto& t = values["translation"];
  calib.translation = Vec3(t[0], t[1], t[2]);
  calib.validate();
  return calib;
}

CameraCalibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kCalibration,
                "cannot open calibration file " + path.string());
  }
  return parse_calibration(in);
}

void write_calibration(std::ostream& out, const CameraCalibration& calib) {
  out << "# groupsense camera calibration\n";
  auto intrinsics = [&](const char* prefix, const Intrinsics& k) {
    out << prefix << ".fx = " << format_double(k.fx) << '\n'
        << prefix << ".fy = " << format_double(k.fy) << '\n'
        << prefix << ".cx = " << format_double(k.cx) << '\n'
        << prefix << ".cy = " << format_double(k.cy) << '\n'
        << prefix << ".width = " << k.width << '\n'
        << prefix << ".height = " << k.height << '\n';
  };
  intrinsics("depth", calib.depth);
  intrinsics("color", calib.color);
  out << "rotation =";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out << ' ' << format_double(calib.rotation(i, j));
  }
  out << "\ntranslation =";
  for (int i = 0; i < 3; ++i) out << ' ' << format_double(calib.translation(i));
  out << '\n';
}

void save_calibration(const std::filesystem::path& path,
                      const CameraCalibration& calib) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_calibration(out, calib);
}

}  // namespace groupsense
