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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "groupsense/costmap.hpp"
#include "groupsense/dbscan.hpp"
#include "groupsense/error.hpp"
#include "groupsense/grouping.hpp"
#include "groupsense/orientation.hpp"
#include "groupsense/polygon.hpp"
#include "groupsense/synth.hpp"

namespace py = pybind11;
using namespace groupsense;

namespace {

PersonState make_person(int person_id, const Vec2& position, double theta) {
  PersonState s;
  s.person_id = person_id;
  s.position = position;
  s.theta = theta;
  return s;
}

py::array_t<std::uint8_t> cells_array(const SocialCostmap& map) {
  py::array_t<std::uint8_t> a({map.height(), map.width()});
  auto view = a.mutable_unchecked<2>();
  for (int iy = 0; iy < map.height(); ++iy)
    for (int ix = 0; ix < map.width(); ++ix) view(iy, ix) = map.at(ix, iy);
  return a;
}

}  // namespace

PYBIND11_MODULE(_groupsense, m) {
  m.doc() = "Group interaction recognition and social costmaps";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string kind(to_string(e.kind()));
      py::object exc = py::handle(error.ptr())(kind + ": " + e.what());
      exc.attr("kind") = kind;
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("polygon_area", [](const std::vector<Vec2>& v) { return polygon_area(v); },
        py::arg("vertices"));
  m.def("polygon_centroid", [](const std::vector<Vec2>& v) { return polygon_centroid(v); },
        py::arg("vertices"));
  m.def("convex_hull", &convex_hull, py::arg("points"));

  m.def(
      "dbscan",
      [](const std::vector<Vec2>& points, double epsilon, std::size_t min_points) {
        const DbscanResult r = dbscan(points, epsilon, min_points);
        return py::make_tuple(r.clusters, r.noise);
      },
      py::arg("points"), py::arg("epsilon"), py::arg("min_points"),
      "Returns (clusters, noise) as lists of point indices.");

  py::class_<GroupingConfig>(m, "GroupingConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &GroupingConfig::epsilon)
      .def_readwrite("n_min", &GroupingConfig::n_min)
      .def_readwrite("area_threshold", &GroupingConfig::area_threshold)
      .def_readwrite("dispersion_threshold", &GroupingConfig::dispersion_threshold)
      .def_readwrite("max_ray_length", &GroupingConfig::max_ray_length)
      .def_readwrite("mutual_facing_tolerance", &GroupingConfig::mutual_facing_tolerance)
      .def("validate", &GroupingConfig::validate);

  py::class_<PersonState>(m, "PersonState")
      .def(py::init(&make_person), py::arg("person_id"), py::arg("position"),
           py::arg("theta"))
      .def_readwrite("person_id", &PersonState::person_id)
      .def_readwrite("position", &PersonState::position)
      .def_readwrite("theta", &PersonState::theta)
      .def("__repr__", [](const PersonState& s) {
        std::ostringstream os;
        os << "PersonState(" << s.person_id << ", (" << s.position.x() << ", "
           << s.position.y() << "), " << s.theta << ")";
        return os.str();
      });

  py::class_<InteractionGroup>(m, "InteractionGroup")
      .def(py::init<>())
      .def_readwrite("member_ids", &InteractionGroup::member_ids)
      .def_readwrite("member_positions", &InteractionGroup::member_positions)
      .def_readwrite("removed_ids", &InteractionGroup::removed_ids)
      .def_readwrite("polygon", &InteractionGroup::polygon)
      .def_readwrite("area", &InteractionGroup::area)
      .def_readwrite("centroid", &InteractionGroup::centroid)
      .def_readwrite("dispersion", &InteractionGroup::dispersion)
      .def_readwrite("interacting", &InteractionGroup::interacting);

  py::class_<RecognitionResult>(m, "RecognitionResult")
      .def_readonly("groups", &RecognitionResult::groups)
      .def_readonly("rejected", &RecognitionResult::rejected)
      .def_readonly("unclustered_ids", &RecognitionResult::unclustered_ids);

  m.def("classify_interaction", &classify_interaction, py::arg("area"),
        py::arg("dispersion"), py::arg("config") = GroupingConfig{});
  m.def("refine_cluster", &refine_cluster, py::arg("cluster"),
        py::arg("config") = GroupingConfig{});
  m.def(
      "recognize_groups",
      [](const std::vector<PersonState>& states, const GroupingConfig& config) {
        return recognize_groups(states, config);
      },
      py::arg("states"), py::arg("config") = GroupingConfig{});

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("origin", &GridSpec::origin)
      .def_readwrite("resolution", &GridSpec::resolution)
      .def_readwrite("width", &GridSpec::width)
      .def_readwrite("height", &GridSpec::height)
      .def("validate", &GridSpec::validate);

  m.def(
      "rasterize_groups",
      [](const std::vector<InteractionGroup>& groups, const GridSpec& grid,
         double inflation_radius, double decay_rate) {
        const RasterizeResult r =
            rasterize_groups(groups, grid, CostmapOptions{inflation_radius, decay_rate});
        return py::make_tuple(cells_array(r.map), r.warnings);
      },
      py::arg("groups"), py::arg("grid") = GridSpec{}, py::arg("inflation_radius") = 0.5,
      py::arg("decay_rate") = 3.0,
      "Returns (cells, warnings); cells is a (height, width) uint8 array "
      "indexed [iy, ix].");
  m.def(
      "load_costmap",
      [](const std::string& path) {
        const SocialCostmap map = load_costmap(path);
        return py::make_tuple(cells_array(map), map.spec());
      },
      py::arg("path"), "Returns (cells, grid).");

  m.def("builtin_scenarios", [] {
    std::vector<std::string> names;
    for (const auto& s : builtin_scenarios()) names.push_back(s.name);
    return names;
  });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int status = 0;
        {
          py::gil_scoped_release release;
          status = cli::run_cli(args, out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), "Runs a command line; returns (status, stdout, stderr).");
}
