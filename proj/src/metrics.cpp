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

#include "groupsense/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

namespace groupsense {

namespace {

struct Accumulator {
  double sum_sq = 0.0;
  std::size_t n = 0;
  void add(double e) {
    sum_sq += e * e;
    ++n;
  }
  double rmse() const { return n == 0 ? 0.0 : std::sqrt(sum_sq / n); }
};

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

std::vector<Vec2> positions_of(std::span<const PersonState> persons) {
  std::vector<Vec2> out;
  out.reserve(persons.size());
  for (const auto& p : persons) out.push_back(p.position);
  return out;
}

struct PresentTruth {
  std::vector<const TruthPerson*> persons;
  std::vector<Vec2> positions;
};

PresentTruth present_truth(const ScenarioTruth& truth) {
  PresentTruth t;
  for (const auto& p : truth.persons) {
    if (p.omitted) continue;
    t.persons.push_back(&p);
    t.positions.push_back(p.position);
  }
  return t;
}

}  // namespace

std::vector<KeypointError> keypoint_errors(std::span<const KeypointSample> samples) {
  struct Sums {
    double abs = 0.0, sq = 0.0, pe = 0.0;
    std::size_t n = 0;
  };
  std::map<int, Sums> by_index;
  for (const auto& s : samples) {
    const double e = (s.predicted - s.truth).norm();
    Sums& acc = by_index[s.index];
    acc.abs += e;
    acc.sq += e * e;
    const double range = s.truth.norm();
    acc.pe += range > 0.0 ? e / range : 0.0;
    ++acc.n;
  }
  std::vector<KeypointError> out;
  for (const auto& [index, acc] : by_index) {
    const double n = static_cast<double>(acc.n);
    out.push_back({index, acc.n, acc.abs / n, std::sqrt(acc.sq / n), acc.pe / n});
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> match_points(
    std::span<const Vec2> truth, std::span<const Vec2> predicted, double gate) {
  struct Candidate {
    double d;
    std::size_t t, p;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = 0; j < predicted.size(); ++j) {
      const double d = (truth[i] - predicted[j]).norm();
      if (d <= gate) candidates.push_back({d, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.t != b.t) return a.t < b.t;
    return a.p < b.p;
  });
  std::vector<bool> used_t(truth.size()), used_p(predicted.size());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& c : candidates) {
    if (used_t[c.t] || used_p[c.p]) continue;
    used_t[c.t] = used_p[c.p] = true;
    out.emplace_back(c.t, c.p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double angle_difference_deg(double a_rad, double b_rad) {
  double d = std::remainder(a_rad - b_rad, 2.0 * std::numbers::pi);
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d * 180.0 / std::numbers::pi;
}

ScenarioError scenario_errors(std::span<const FrameResult> results,
                              const ScenarioTruth& truth) {
  ScenarioError out;
  const PresentTruth present = present_truth(truth);
  Accumulator iza, ipx, ipy, hpx, hpy, hfd;
  std::vector<Vec2> truth_ip;
  for (const auto& g : truth.groups) truth_ip.push_back(g.interest_point);

  for (const auto& r : results) {
    ++out.frames;
    const auto predicted = positions_of(r.persons);
    const auto pairs = match_points(present.positions, predicted, kMatchGate);
    out.unmatched_persons += present.positions.size() - pairs.size();
    for (const auto& [ti, pi] : pairs) {
      const TruthPerson& t = *present.persons[ti];
      const PersonState& p = r.persons[pi];
      hpx.add(p.position.x() - t.position.x());
      hpy.add(p.position.y() - t.position.y());
      hfd.add(angle_difference_deg(p.theta, t.theta));
      ++out.person_samples;
    }

    const auto& groups = r.recognition.groups;
    if (groups.size() != truth.groups.size()) {
      out.detection_failures.push_back(r.frame_id);
      continue;
    }
    std::vector<Vec2> centroids;
    for (const auto& g : groups) centroids.push_back(g.centroid);
    const auto gpairs =
        match_points(truth_ip, centroids, std::numeric_limits<double>::infinity());
    for (const auto& [ti, pi] : gpairs) {
      iza.add(groups[pi].area - truth.groups[ti].area);
      ipx.add(groups[pi].centroid.x() - truth_ip[ti].x());
      ipy.add(groups[pi].centroid.y() - truth_ip[ti].y());
      ++out.group_samples;
    }
  }
  out.iza = iza.rmse();
  out.ipx = ipx.rmse();
  out.ipy = ipy.rmse();
  out.hpx = hpx.rmse();
  out.hpy = hpy.rmse();
  out.hfd = hfd.rmse();
  return out;
}

std::vector<KeypointSample> collect_keypoint_samples(std::span<const FrameResult> results,
                                                     const ScenarioTruth& truth) {
  const PresentTruth present = present_truth(truth);
  std::vector<KeypointSample> out;
  for (const auto& r : results) {
    const auto predicted = positions_of(r.persons);
    for (const auto& [ti, pi] : match_points(present.positions, predicted, kMatchGate)) {
      const auto& tk = present.persons[ti]->keypoints;
      for (const auto& k : r.persons[pi].keypoints) {
        auto it = std::find_if(tk.begin(), tk.end(),
                               [&](const Keypoint3D& t) { return t.index == k.index; });
        if (it != tk.end()) out.push_back({k.index, k.camera, it->camera});
      }
    }
  }
  return out;
}

StageTiming summarize_timing(std::string stage, std::span<const double> ms) {
  StageTiming t;
  t.stage = std::move(stage);
  t.samples = ms.size();
  if (ms.empty()) return t;
  std::vector<double> sorted(ms.begin(), ms.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  t.mean_ms = sum / sorted.size();
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * sorted.size()));
  t.p95_ms = sorted[std::max<std::size_t>(rank, 1) - 1];
  t.max_ms = sorted.back();
  return t;
}

std::vector<StageTiming> time_stages(std::span<const FrameRecord> frames,
                                     const CameraCalibration& calib,
                                     const PipelineConfig& config,
                                     const TimingOptions& options) {
  if (frames.empty()) return {};
  DepthImage aligned;
  std::vector<PersonState> persons;
  std::vector<DroppedPerson> dropped;
  std::vector<double> align_ms, localize_ms, group_ms, costmap_ms, geometry_ms, total_ms;
  std::size_t checksum = 0;

  auto run = [&](const FrameRecord& frame, bool record) {
    persons.clear();
    dropped.clear();
    const auto ta = Clock::now();
    if (options.depth != nullptr) align_depth_to_color(calib, *options.depth, aligned);
    const auto t0 = Clock::now();
    localize_persons(frame, calib, config, options.depth ? &aligned : nullptr, persons,
                     dropped);
    const auto t1 = Clock::now();
    const RecognitionResult rec = recognize_groups(persons, config.grouping);
    const auto t2 = Clock::now();
    const RasterizeResult map = rasterize_groups(rec.groups, config.grid, config.costmap);
    const auto t3 = Clock::now();
    checksum += rec.groups.size() + map.map.cells()[0];
    if (!record) return;
    align_ms.push_back(ms_between(ta, t0));
    localize_ms.push_back(ms_between(t0, t1));
    group_ms.push_back(ms_between(t1, t2));
    costmap_ms.push_back(ms_between(t2, t3));
    geometry_ms.push_back(ms_between(t0, t2));
    total_ms.push_back(ms_between(ta, t2));
  };

  for (std::size_t i = 0; i < options.warmup; ++i) run(frames[i % frames.size()], false);
  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    for (const auto& f : frames) run(f, true);
  }
  // Keeps the measured work observable.
  volatile std::size_t sink = checksum;
  (void)sink;

  return {summarize_timing("alignment", align_ms),
          summarize_timing("localization", localize_ms),
          summarize_timing("grouping", group_ms),
          summarize_timing("costmap", costmap_ms),
          summarize_timing("geometry", geometry_ms),
          summarize_timing("alignment+geometry", total_ms)};
}

void write_report(std::ostream& out, const std::vector<KeypointError>& keypoints,
                  const ScenarioError& s) {
  out << std::fixed;
  out << "Per-keypoint error\n";
  out << std::setw(8) << "index" << std::setw(10) << "samples" << std::setw(12) << "MAE(m)"
      << std::setw(12) << "RMSE(m)" << std::setw(12) << "PE" << '\n';
  for (const auto& k : keypoints) {
    out << std::setw(8) << k.index << std::setw(10) << k.samples << std::setprecision(6)
        << std::setw(12) << k.mae << std::setw(12) << k.rmse << std::setw(12) << k.pe
        << '\n';
  }
  out << "\nScenario RMSE\n";
  out << std::setw(12) << "IZA(m2)" << std::setw(12) << "IPX(m)" << std::setw(12)
      << "IPY(m)" << std::setw(12) << "HPX(m)" << std::setw(12) << "HPY(m)"
      << std::setw(12) << "HFD(deg)" << '\n';
  out << std::setprecision(6) << std::setw(12) << s.iza << std::setw(12) << s.ipx
      << std::setw(12) << s.ipy << std::setw(12) << s.hpx << std::setw(12) << s.hpy
      << std::setw(12) << s.hfd << '\n';
  out << "\nframes " << s.frames << ", person samples " << s.person_samples
      << ", group samples " << s.group_samples << ", unmatched persons "
      << s.unmatched_persons << ", detection failures " << s.detection_failures.size()
      << '\n';
  if (!s.detection_failures.empty()) {
    out << "detection failure frames:";
    for (auto id : s.detection_failures) out << ' ' << id;
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_keypoint_csv(std::ostream& out, const std::vector<KeypointError>& keypoints) {
  out << "index,samples,mae_m,rmse_m,pe\n";
  out << std::setprecision(17);
  for (const auto& k : keypoints) {
    out << k.index << ',' << k.samples << ',' << k.mae << ',' << k.rmse << ',' << k.pe
        << '\n';
  }
}

void write_scenario_csv(std::ostream& out, const ScenarioError& s) {
  out << "iza_m2,ipx_m,ipy_m,hpx_m,hpy_m,hfd_deg,frames,person_samples,group_samples,"
         "unmatched_persons,detection_failures\n";
  out << std::setprecision(17) << s.iza << ',' << s.ipx << ',' << s.ipy << ',' << s.hpx
      << ',' << s.hpy << ',' << s.hfd << ',' << s.frames << ',' << s.person_samples << ','
      << s.group_samples << ',' << s.unmatched_persons << ','
      << s.detection_failures.size() << '\n';
}

void write_timing_table(std::ostream& out, const std::vector<StageTiming>& timings) {
  out << std::left << std::setw(26) << "stage" << std::right << std::setw(10) << "samples"
      << std::setw(12) << "mean(ms)" << std::setw(12) << "p95(ms)" << std::setw(12)
      << "max(ms)" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& t : timings) {
    out << std::left << std::setw(26) << t.stage << std::right << std::setw(10)
        << t.samples << std::setw(12) << t.mean_ms << std::setw(12) << t.p95_ms
        << std::setw(12) << t.max_ms << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace groupsense
