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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "groupsense/calibration_io.hpp"
#include "groupsense/error.hpp"
#include "groupsense/metrics.hpp"
#include "groupsense/pipeline.hpp"
#include "groupsense/synth.hpp"

namespace groupsense::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Failure carrying an exit status and a short kind label.
struct Failure {
  int code;
  std::string kind;
  std::string message;
};

[[noreturn]] void fail(int code, std::string kind, std::string message) {
  throw Failure{code, std::move(kind), std::move(message)};
}

[[noreturn]] void fail(int code, const Error& e) {
  throw Failure{code, std::string(to_string(e.kind())), e.what()};
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string default_output_dir(const char* fallback) {
  if (const char* env = std::getenv("GROUPSENSE_OUTPUT_DIR"); env != nullptr && *env) {
    return env;
  }
  return fallback;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(kExitFailure, "io", "cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(kExitFailure, "io", "cannot write " + path.string());
  return out;
}

std::string frame_file_name(std::int64_t id) {
  std::ostringstream os;
  os << "frame_" << std::setw(6) << std::setfill('0') << id << ".smap";
  return os.str();
}

// ---------------------------------------------------------------- run

struct RunOptions {
  std::string calib;
  std::string frames;
  std::string out;
  PipelineConfig config;
  std::string facing_rule = "body_axis";
  bool no_costmaps = false;
  bool no_timestamp = false;
  int jobs = 1;
  bool verbose = false;
};

void add_config_flags(CLI::App* app, PipelineConfig& c, std::string& facing_rule) {
  auto& g = c.grouping;
  app->add_option("--epsilon", g.epsilon, "DBSCAN radius (m)")->capture_default_str();
  app->add_option("--n-min", g.n_min, "DBSCAN minimum neighbors, self included")
      ->capture_default_str();
  app->add_option("--area-threshold", g.area_threshold, "Interaction area threshold (m^2)")
      ->capture_default_str();
  app->add_option("--dispersion-threshold", g.dispersion_threshold,
                  "Dispersion threshold (m)")
      ->capture_default_str();
  app->add_option("--max-ray-length", g.max_ray_length, "Facing ray length (m)")
      ->capture_default_str();
  app->add_option("--mutual-facing-tolerance", g.mutual_facing_tolerance,
                  "Angle from antiparallel for face-to-face pairs (rad)")
      ->capture_default_str();
  app->add_option("--min-confidence", c.localization.min_confidence,
                  "Keypoint confidence threshold")
      ->capture_default_str();
  app->add_option("--min-valid", c.localization.min_valid_keypoints,
                  "Minimum usable keypoints per person")
      ->capture_default_str();
  app->add_option("--facing-rule", facing_rule, "body_axis or lateral")
      ->check(CLI::IsMember({"body_axis", "lateral"}))
      ->capture_default_str();
  app->add_option("--grid-origin-x", c.grid.origin.x(), "Costmap origin x (m)")
      ->capture_default_str();
  app->add_option("--grid-origin-y", c.grid.origin.y(), "Costmap origin y (m)")
      ->capture_default_str();
  app->add_option("--grid-resolution", c.grid.resolution, "Cell size (m)")
      ->capture_default_str();
  app->add_option("--grid-width", c.grid.width, "Cells along x")->capture_default_str();
  app->add_option("--grid-height", c.grid.height, "Cells along y")->capture_default_str();
  app->add_option("--inflation-radius", c.costmap.inflation_radius, "Inflation band (m)")
      ->capture_default_str();
  app->add_option("--decay-rate", c.costmap.decay_rate, "Inflation decay (1/m)")
      ->capture_default_str();
}

void resolve_config(PipelineConfig& c, const std::string& facing_rule) {
  c.orientation.rule =
      facing_rule == "lateral" ? FacingRule::kLateralCoordinate : FacingRule::kBodyAxis;
  try {
    c.validate();
  } catch (const Error& e) {
    fail(kExitUsage, e);
  }
}

std::vector<FrameResult> process_all(const std::vector<FrameRecord>& frames,
                                     const CameraCalibration& calib,
                                     const PipelineConfig& config, int jobs) {
  std::vector<FrameResult> results(frames.size());
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                              std::max<std::size_t>(frames.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      results[i] = process_frame(frames[i], calib, config);
    }
    return results;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < frames.size(); i += workers) {
        results[i] = process_frame(frames[i], calib, config);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

int cmd_run(RunOptions& o, std::ostream& out, std::ostream& err) {
  resolve_config(o.config, o.facing_rule);
  CameraCalibration calib;
  try {
    calib = load_calibration(o.calib);
  } catch (const Error& e) {
    fail(kExitCalibration, e);
  }
  FrameParseResult parsed;
  try {
    parsed = load_frames(o.frames);
  } catch (const Error& e) {
    fail(kExitFrames, e);
  }

  const auto results = process_all(parsed.frames, calib, o.config, o.jobs);

  const fs::path dir(o.out);
  make_dirs(dir);
  const std::string stamp = o.no_timestamp ? std::string("-") : utc_now();
  {
    auto ann = open_out(dir / "annotations.jsonl");
    for (const auto& r : results) ann << format_annotation(r) << '\n';
  }

  json warnings = json::array();
  std::size_t person_count = 0, group_count = 0, dropped_count = 0;
  if (!o.no_costmaps) make_dirs(dir / "costmaps");
  for (const auto& r : results) {
    person_count += r.persons.size();
    group_count += r.recognition.groups.size();
    dropped_count += r.dropped.size();
    if (o.no_costmaps) continue;
    const RasterizeResult map = frame_costmap(r, o.config);
    for (const auto& w : map.warnings) {
      warnings.push_back("frame " + std::to_string(r.frame_id) + ": " + w);
    }
    auto f = open_out(dir / "costmaps" / frame_file_name(r.frame_id), std::ios::binary);
    write_costmap(f, map.map, stamp);
  }

  json rejected = json::array();
  for (const auto& rj : parsed.rejected) {
    rejected.push_back({{"line", rj.line}, {"message", rj.message}});
  }
  json summary = {{"calibration", o.calib},
                  {"frames_file", o.frames},
                  {"config", config_json(o.config)},
                  {"frames", results.size()},
                  {"persons", person_count},
                  {"dropped_persons", dropped_count},
                  {"interacting_groups", group_count},
                  {"rejected_records", std::move(rejected)},
                  {"warnings", std::move(warnings)},
                  {"costmaps", !o.no_costmaps},
                  {"generated", stamp}};
  open_out(dir / "summary.json") << summary.dump(2) << '\n';

  if (o.verbose) {
    for (const auto& r : results) {
      out << "frame " << r.frame_id << ": " << r.persons.size() << " persons, "
          << r.recognition.groups.size() << " groups\n";
      for (const auto& d : r.dropped) {
        err << "frame " << r.frame_id << ": dropped person " << d.person_id << ": "
            << d.reason << '\n';
      }
    }
  }
  for (const auto& rj : parsed.rejected) {
    err << "warning: frames line " << rj.line << " rejected: " << rj.message << '\n';
  }
  out << "processed " << results.size() << " frames, " << group_count
      << " interacting groups -> " << dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string scenario;
  std::string spec;
  std::optional<double> sigma_px;
  std::optional<double> sigma_depth;
  std::optional<std::uint64_t> seed;
  std::optional<int> frames;
  std::string out;
};

ScenarioSpec resolve_scenario(const std::string& name, const std::string& spec_path) {
  if (!spec_path.empty()) {
    try {
      return load_scenario_spec(spec_path);
    } catch (const Error& e) {
      fail(kExitUsage, e);
    }
  }
  if (name.empty()) fail(kExitUsage, "invalid_argument", "a scenario name or --spec is required");
  auto s = builtin_scenario(name);
  if (!s) fail(kExitUsage, "invalid_argument", "unknown scenario '" + name + "' (S1-S5)");
  return *s;
}

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec = resolve_scenario(o.scenario, o.spec);
  if (o.sigma_px) spec.noise.pixel_sigma = *o.sigma_px;
  if (o.sigma_depth) spec.noise.depth_sigma = *o.sigma_depth;
  if (o.seed) spec.seed = *o.seed;
  if (o.frames) spec.frame_count = *o.frames;
  SyntheticScenario sc;
  try {
    sc = synthesize_scenario(spec);
  } catch (const Error& e) {
    fail(kExitUsage, e);
  }
  const fs::path dir(o.out);
  make_dirs(dir);
  save_frames(dir / "frames.jsonl", sc.frames);
  save_truth(dir / "truth.json", sc.truth);
  save_calibration(dir / "calibration.txt", spec.calibration);
  for (const auto& w : sc.warnings) err << "warning: " << w << '\n';
  out << "scenario " << spec.name << ": " << sc.frames.size() << " frames, "
      << spec.persons.size() << " persons -> " << dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string run;
  std::string truth;
  std::string out;
};

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream&) {
  if (!fs::exists(o.truth)) fail(kExitEvaluation, "io", "truth file " + o.truth + " not found");
  ScenarioTruth truth;
  try {
    truth = load_truth(o.truth);
  } catch (const Error& e) {
    fail(kExitEvaluation, e);
  }
  std::vector<FrameResult> results;
  try {
    results = load_annotations(fs::path(o.run) / "annotations.jsonl");
  } catch (const Error& e) {
    fail(kExitEvaluation, e);
  }

  std::set<std::int64_t> have;
  for (const auto& r : results) have.insert(r.frame_id);
  const std::set<std::int64_t> want(truth.frame_ids.begin(), truth.frame_ids.end());
  std::string missing, extra;
  for (auto id : want) {
    if (!have.count(id)) missing += " " + std::to_string(id);
  }
  for (auto id : have) {
    if (!want.count(id)) extra += " " + std::to_string(id);
  }
  if (!missing.empty() || !extra.empty()) {
    fail(kExitEvaluation, "frame_mismatch",
         "frames missing from run:" + (missing.empty() ? std::string(" none") : missing) +
             "; frames not in truth:" + (extra.empty() ? std::string(" none") : extra));
  }

  const auto keypoints = keypoint_errors(collect_keypoint_samples(results, truth));
  const ScenarioError scenario = scenario_errors(results, truth);
  const fs::path dir(o.out.empty() ? default_output_dir(o.run.c_str()) : o.out);
  make_dirs(dir);
  {
    auto f = open_out(dir / "report.txt");
    write_report(f, keypoints, scenario);
  }
  {
    auto f = open_out(dir / "keypoints.csv");
    write_keypoint_csv(f, keypoints);
  }
  {
    auto f = open_out(dir / "scenario.csv");
    write_scenario_csv(f, scenario);
  }
  write_report(out, keypoints, scenario);
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchOptions {
  std::string scenario = "S4";
  std::string frames;
  std::string calib;
  int frames_count = 1000;
  int repetitions = 1;
  int warmup = 50;
  double sigma_px = 2.0;
  double sigma_depth = 0.01;
  std::uint64_t seed = 1;
  bool no_depth_image = false;
  bool enforce = false;
  double budget_ms = 1.0;
  std::string out;
  PipelineConfig config;
  std::string facing_rule = "body_axis";
};

int cmd_bench(BenchOptions& o, std::ostream& out, std::ostream&) {
  if (o.repetitions <= 0) fail(kExitUsage, "invalid_argument", "repetitions must be positive");
  if (o.frames_count <= 0) fail(kExitUsage, "invalid_argument", "frames-count must be positive");
  if (o.warmup < 0) fail(kExitUsage, "invalid_argument", "warmup must be nonnegative");
  resolve_config(o.config, o.facing_rule);

  std::vector<FrameRecord> frames;
  CameraCalibration calib;
  std::optional<DepthImage> depth;
  std::string source;
  if (!o.frames.empty()) {
    if (o.calib.empty()) fail(kExitUsage, "invalid_argument", "--frames requires --calib");
    try {
      calib = load_calibration(o.calib);
    } catch (const Error& e) {
      fail(kExitCalibration, e);
    }
    try {
      frames = load_frames(o.frames).frames;
    } catch (const Error& e) {
      fail(kExitFrames, e);
    }
    source = o.frames;
  } else {
    ScenarioSpec spec = resolve_scenario(o.scenario, "");
    spec.noise = {o.sigma_px, o.sigma_depth};
    spec.seed = o.seed;
    spec.frame_count = o.frames_count;
    frames = synthesize_scenario(spec).frames;
    calib = spec.calibration;
    if (!o.no_depth_image) depth = render_depth_image(spec);
    source = "scenario " + spec.name;
  }

  TimingOptions topts;
  topts.warmup = static_cast<std::size_t>(o.warmup);
  topts.repetitions = static_cast<std::size_t>(o.repetitions);
  topts.depth = depth ? &*depth : nullptr;
  const auto timings = time_stages(frames, calib, o.config, topts);

  std::size_t persons = 0, groups = 0;
  for (const auto& f : frames) {
    const FrameResult r = process_frame(f, calib, o.config);
    persons += r.persons.size();
    groups += r.recognition.groups.size();
  }

  out << "bench: " << source << ", " << frames.size() << " frames x " << o.repetitions
      << " repetitions, warmup " << o.warmup
      << (depth ? ", full depth alignment per frame" : ", record depths") << '\n';
  out << "persons/frame " << (frames.empty() ? 0.0 : double(persons) / frames.size())
      << ", groups/frame " << (frames.empty() ? 0.0 : double(groups) / frames.size())
      << '\n';
  write_timing_table(out, timings);

  const auto geometry =
      std::find_if(timings.begin(), timings.end(),
                   [](const StageTiming& t) { return t.stage == "alignment+geometry"; });
  const bool within = geometry == timings.end() || geometry->mean_ms <= o.budget_ms;
  out << "budget " << o.budget_ms << " ms: " << (within ? "met" : "exceeded") << '\n';

  if (!o.out.empty()) {
    make_dirs(o.out);
    auto f = open_out(fs::path(o.out) / "timing.csv");
    f << "stage,samples,mean_ms,p95_ms,max_ms\n" << std::setprecision(17);
    for (const auto& t : timings) {
      f << t.stage << ',' << t.samples << ',' << t.mean_ms << ',' << t.p95_ms << ','
        << t.max_ms << '\n';
    }
  }
  if (o.enforce && !within) {
    std::ostringstream msg;
    msg << "alignment+geometry mean " << geometry->mean_ms << " ms exceeds budget " << o.budget_ms
        << " ms";
    fail(kExitBudget, "budget", msg.str());
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Social group interaction recognition from RGB-D keypoints", "groupsense"};
  app.require_subcommand(1);

  RunOptions run;
  run.out = default_output_dir("groupsense_out");
  auto* run_cmd = app.add_subcommand("run", "Recognize interaction groups in a frame file");
  run_cmd->add_option("--calib", run.calib, "Calibration file")->required();
  run_cmd->add_option("--frames", run.frames, "Frame file (JSON Lines)")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  add_config_flags(run_cmd, run.config, run.facing_rule);
  run_cmd->add_flag("--no-costmaps", run.no_costmaps, "Skip costmap files");
  run_cmd->add_flag("--no-timestamp", run.no_timestamp, "Omit wall-clock timestamps");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("-v,--verbose", run.verbose, "Per-frame progress");

  SynthOptions synth;
  synth.out = default_output_dir("groupsense_synth");
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth_cmd->add_option("scenario", synth.scenario, "Builtin scenario S1-S5");
  synth_cmd->add_option("--spec", synth.spec, "Scenario description file (JSON)");
  synth_cmd->add_option("--sigma-px", synth.sigma_px, "Pixel noise (px)");
  synth_cmd->add_option("--sigma-depth", synth.sigma_depth, "Depth noise (m)");
  synth_cmd->add_option("--seed", synth.seed, "Noise seed");
  synth_cmd->add_option("--frames", synth.frames, "Frame count");
  synth_cmd->add_option("--out", synth.out, "Output directory")->capture_default_str();

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compare a run against ground truth");
  eval_cmd->add_option("--run", eval.run, "Run output directory")->required();
  eval_cmd->add_option("--truth", eval.truth, "Truth file")->required();
  eval_cmd->add_option("--out", eval.out, "Report directory (default: run directory)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline stages");
  bench_cmd->add_option("--scenario", bench.scenario, "Builtin scenario")->capture_default_str();
  bench_cmd->add_option("--frames", bench.frames, "Frame file instead of a scenario");
  bench_cmd->add_option("--calib", bench.calib, "Calibration for --frames");
  bench_cmd->add_option("--frames-count", bench.frames_count, "Synthetic frames")
      ->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions, "Passes over the frames")
      ->capture_default_str();
  bench_cmd->add_option("--warmup", bench.warmup, "Discarded warm-up frames")
      ->capture_default_str();
  bench_cmd->add_option("--sigma-px", bench.sigma_px, "Pixel noise (px)")->capture_default_str();
  bench_cmd->add_option("--sigma-depth", bench.sigma_depth, "Depth noise (m)")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Noise seed")->capture_default_str();
  bench_cmd->add_flag("--no-depth-image", bench.no_depth_image,
                      "Use record depths instead of aligning a rendered depth image");
  bench_cmd->add_flag("--enforce", bench.enforce, "Fail when the budget is exceeded");
  bench_cmd->add_option("--budget-ms", bench.budget_ms, "Geometry budget per frame (ms)")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Write timing.csv here");
  add_config_flags(bench_cmd, bench.config, bench.facing_rule);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error code=" << kExitUsage << " kind=usage " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    if (synth_cmd->parsed()) return cmd_synth(synth, out, err);
    if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
  } catch (const Failure& f) {
    err << "error code=" << f.code << " kind=" << f.kind << ' ' << one_line(f.message) << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "error code=" << kExitFailure << " kind=" << to_string(e.kind()) << ' '
        << one_line(e.what()) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error code=" << kExitFailure << " kind=internal " << one_line(e.what()) << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace groupsense::cli
