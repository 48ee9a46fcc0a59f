// Copyright 2026 The Clom Authors.
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

#include "clom/motion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace clom {
namespace {

std::string fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

}  // namespace

MotionFormat::MotionFormat(int line, const std::string& what)
    : Error("motion line " + std::to_string(line) + ": " + what) {}
MissingColumn::MissingColumn(const std::string& column)
    : Error("motion table is missing required column \"" + column + "\"") {}
NonUniformSampling::NonUniformSampling(int row, double dt, double nominal_dt)
    : Error("non-uniform sampling at row " + std::to_string(row) + ": " +
            fmt("spacing %.6f s vs nominal %.6f s", dt, nominal_dt)) {}
TooFewSamples::TooFewSamples(std::size_t count)
    : Error("motion track needs at least 2 samples, got " +
            std::to_string(count)) {}
WindowOutOfRange::WindowOutOfRange(double lo, double hi, double track_lo,
                                   double track_hi)
    : Error(fmt("window [%.3f, %.3f] outside track span [%.3f, %.3f]", lo, hi,
                track_lo, track_hi)) {}
SliceTooShort::SliceTooShort(std::size_t count, std::size_t needed)
    : Error("slice has " + std::to_string(count) + " samples, needs " +
            std::to_string(needed)) {}
MissingClap::MissingClap(const std::string& trial)
    : Error("trial " + trial + " has no clap header, cannot sync motion") {}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(cell);
  for (std::string& c : cells) {
    std::size_t b = c.find_first_not_of(" \t");
    std::size_t e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

double parse_cell(const std::string& cell, int line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value))
    throw MotionFormat(line_no, "bad number \"" + cell + "\"");
  return value;
}

}  // namespace

MotionTrack load_motion(std::string_view csv_text,
                        std::vector<std::string>* warnings) {
  std::istringstream in{std::string(csv_text)};
  std::string line;
  int line_no = 0;

  // Header.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw TooFewSamples(0);

  static const char* const kRequired[] = {"time", "lh_x", "lh_y", "lh_z",
                                          "rh_x", "rh_y", "rh_z"};
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = (int)i;
  for (const char* name : kRequired)
    if (col.find(name) == col.end()) throw MissingColumn(name);
  if (warnings != nullptr) {
    for (const std::string& name : header) {
      bool required = false;
      for (const char* r : kRequired) required |= name == r;
      if (!required)
        warnings->push_back("motion table: ignoring extra column \"" + name +
                            "\"");
    }
  }

  MotionTrack track;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw MotionFormat(line_no, "expected " + std::to_string(header.size()) +
                                      " cells, got " +
                                      std::to_string(cells.size()));
    auto cell = [&](const char* name) {
      return parse_cell(cells[col[name]], line_no);
    };
    track.times.push_back(cell("time"));
    track.lh.emplace_back(cell("lh_x"), cell("lh_y"), cell("lh_z"));
    track.rh.emplace_back(cell("rh_x"), cell("rh_y"), cell("rh_z"));
  }
  if (track.times.size() < 2) throw TooFewSamples(track.times.size());

  std::vector<double> dts(track.times.size() - 1);
  for (std::size_t i = 0; i + 1 < track.times.size(); ++i)
    dts[i] = track.times[i + 1] - track.times[i];
  std::vector<double> sorted = dts;
  std::sort(sorted.begin(), sorted.end());
  const double nominal = sorted[sorted.size() / 2];
  if (nominal <= 0.0) throw NonUniformSampling(1, nominal, nominal);
  for (std::size_t i = 0; i < dts.size(); ++i)
    if (std::abs(dts[i] - nominal) > 0.01 * nominal)
      throw NonUniformSampling((int)i + 2, dts[i], nominal);
  track.rate_hz = 1.0 / nominal;
  return track;
}

namespace {

// Velocity and acceleration at every index with a full stencil, namely
// [w+1, n-2-w]: positions get a centered moving average of width 2w+1,
// velocity is the central difference of the smoothed positions, and
// acceleration the central difference of the midpoint velocities.
struct Derivatives {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> v;
  std::vector<Eigen::Vector3d> a;
};

Derivatives differentiate(const std::vector<double>& times,
                          const std::vector<Eigen::Vector3d>& pos, int w,
                          double dt) {
  const std::size_t n = pos.size();
  const std::size_t needed = 2 * (std::size_t)w + 3;
  if (n < needed) throw SliceTooShort(n, needed);

  // Summed per window rather than via prefix sums: every position then
  // rounds identically, so a constant signal differentiates to exact zeros.
  auto smooth = [&](std::size_t i) -> Eigen::Vector3d {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (std::size_t j = i - (std::size_t)w; j <= i + (std::size_t)w; ++j)
      sum += pos[j];
    return sum / double(2 * w + 1);
  };

  Derivatives out;
  for (std::size_t i = w + 1; i + w + 1 < n; ++i) {
    const Eigen::Vector3d prev = smooth(i - 1);
    const Eigen::Vector3d here = smooth(i);
    const Eigen::Vector3d next = smooth(i + 1);
    out.times.push_back(times[i]);
    out.v.push_back((next - prev) / (2.0 * dt));
    out.a.push_back((next - 2.0 * here + prev) / (dt * dt));
  }
  return out;
}

double slice_dt(const std::vector<double>& times) {
  return (times.back() - times.front()) / double(times.size() - 1);
}

}  // namespace

SyncResult detect_clap(const MotionTrack& track,
                       std::optional<std::pair<double, double>> window,
                       int smoothing_half_width,
                       std::vector<std::string>* warnings) {
  if (smoothing_half_width < 0)
    throw std::invalid_argument("smoothing half-width must be >= 0");
  if (track.times.size() < 2) throw TooFewSamples(track.times.size());
  const double t0 = track.times.front();
  const double t1 = track.times.back();
  double lo = t0, hi = std::min(t1, t0 + 20.0);
  if (window.has_value()) {
    lo = window->first;
    hi = window->second;
    if (lo >= hi || lo < t0 - 1e-9 || hi > t1 + 1e-9)
      throw WindowOutOfRange(lo, hi, t0, t1);
  }

  const double dt = slice_dt(track.times);
  Derivatives dl = differentiate(track.times, track.lh, smoothing_half_width, dt);
  Derivatives dr = differentiate(track.times, track.rh, smoothing_half_width, dt);

  double best = -1.0, best_time = 0.0;
  std::vector<std::pair<double, double>> in_window;  // (time, value)
  for (std::size_t i = 0; i < dl.times.size(); ++i) {
    const double t = dl.times[i];
    if (t < lo || t > hi) continue;
    const double value = dl.a[i].norm() + dr.a[i].norm();
    in_window.emplace_back(t, value);
    if (value > best) {  // strict: earliest maximum wins
      best = value;
      best_time = t;
    }
  }
  if (in_window.empty())
    throw WindowOutOfRange(lo, hi, dl.times.front(), dl.times.back());

  for (const auto& [t, value] : in_window) {
    if (std::abs(t - best_time) <= 0.5) continue;
    if (value >= 0.95 * best) {
      if (warnings != nullptr)
        warnings->push_back(fmt(
            "ambiguous clap peak: %.2f m/s^2 at %.3f s rivals %.2f m/s^2 at "
            "%.3f s",
            value, t, best, best_time));
      break;
    }
  }
  return SyncResult{best_time, best, best_time};
}

std::vector<MotionSlice> segment_motion(const MotionTrack& track,
                                        const Trial& trial,
                                        const SyncResult& sync,
                                        std::vector<std::string>* warnings) {
  if (!trial.clap_video_time.has_value())
    throw MissingClap(trial.subject_id + "/" + trial.task_id + "/" +
                      std::to_string(trial.trial_index));
  const double clap_video = *trial.clap_video_time;
  auto to_motion = [&](double video_time) {
    return video_time - clap_video + sync.offset;
  };

  std::vector<MotionSlice> slices;
  const auto& times = track.times;
  for (std::size_t i = 0; i < trial.segments.size(); ++i) {
    const double start = to_motion(trial.segments[i].t_start);
    const bool last = i + 1 == trial.segments.size();
    const double stop = last ? times.back() + 1.0
                             : to_motion(trial.segments[i + 1].t_start);
    auto lo = std::lower_bound(times.begin(), times.end(), start);
    auto hi = std::lower_bound(times.begin(), times.end(), stop);
    if (warnings != nullptr &&
        (start < times.front() - 1e-9 || (!last && stop > times.back() + 1e-9) ||
         lo == times.end())) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "segment %zu of trial %s/%s/%d reaches outside the "
                    "recording, truncated",
                    i, trial.subject_id.c_str(), trial.task_id.c_str(),
                    trial.trial_index);
      warnings->push_back(buf);
    }
    MotionSlice slice;
    for (auto it = lo; it != hi; ++it) {
      const std::size_t idx = (std::size_t)(it - times.begin());
      slice.times.push_back(times[idx]);
      slice.lh.push_back(track.lh[idx]);
      slice.rh.push_back(track.rh[idx]);
    }
    slices.push_back(std::move(slice));
  }
  return slices;
}

PerHandStats kinematics(const MotionSlice& slice, int smoothing_half_width) {
  if (smoothing_half_width < 0)
    throw std::invalid_argument("smoothing half-width must be >= 0");
  const std::size_t needed = 2 * (std::size_t)smoothing_half_width + 3;
  if (slice.times.size() < needed)
    throw SliceTooShort(slice.times.size(), needed);
  const double dt = slice_dt(slice.times);

  auto stats_for = [&](const std::vector<Eigen::Vector3d>& pos) {
    Derivatives d = differentiate(slice.times, pos, smoothing_half_width, dt);
    KinematicStats s;
    double v_sum = 0.0, a_sum = 0.0;
    for (std::size_t i = 0; i < d.v.size(); ++i) {
      const double v = d.v[i].norm();
      const double a = d.a[i].norm();
      s.v_max = std::max(s.v_max, v);
      s.a_max = std::max(s.a_max, a);
      v_sum += v;
      a_sum += a;
    }
    s.v_mean = v_sum / double(d.v.size());
    s.a_mean = a_sum / double(d.a.size());
    return s;
  };
  return PerHandStats{stats_for(slice.lh), stats_for(slice.rh)};
}

CloMGraph attach_stats(const CloMGraph& graph, const std::vector<Trial>& trials,
                       const std::vector<MotionTrack>& tracks,
                       const AttachOptions& options,
                       std::vector<std::string>* warnings) {
  if (trials.size() != tracks.size())
    throw std::invalid_argument("attach_stats: " + std::to_string(trials.size()) +
                                " trials but " + std::to_string(tracks.size()) +
                                " tracks");
  auto warn = [&](const std::string& message) {
    if (warnings != nullptr) warnings->push_back(message);
  };

  struct Prepared {
    Trial canon;
    std::vector<MotionSlice> slices;
  };
  std::map<std::tuple<std::string, std::string, int>, Prepared> prepared;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& trial = trials[i];
    auto key = std::make_tuple(trial.subject_id, trial.task_id,
                               trial.trial_index);
    if (prepared.count(key) != 0) {
      warn("duplicate trial " + trial.subject_id + "/" + trial.task_id + "/" +
           std::to_string(trial.trial_index) + ", keeping the first");
      continue;
    }
    try {
      const MotionTrack& track = tracks[i];
      SyncResult sync = detect_clap(track, options.clap_window,
                                    options.smoothing_half_width, warnings);
      CanonicalTrial canon =
          canonicalize_trial(trial, options.symmetry, options.vocab);
      std::vector<MotionSlice> slices =
          segment_motion(track, canon.trial, sync, warnings);
      prepared.emplace(key, Prepared{std::move(canon.trial), std::move(slices)});
    } catch (const Error& e) {
      warn("trial " + trial.subject_id + "/" + trial.task_id + "/" +
           std::to_string(trial.trial_index) + " skipped: " + e.what());
    }
  }

  CloMGraph out = graph;
  for (auto& [prim, rec] : out.edges) {
    PerHandStats sum;
    int scored = 0;
    for (const Occurrence& occ : rec.occurrences) {
      auto it = prepared.find(
          std::make_tuple(occ.subject_id, occ.task_id, occ.trial_index));
      std::string where = occ.subject_id + "/" + occ.task_id + "/" +
                          std::to_string(occ.trial_index) + " segment " +
                          std::to_string(occ.segment_index);
      if (it == prepared.end()) {
        warn("occurrence " + where + ": no usable motion trial");
        continue;
      }
      const Prepared& prep = it->second;
      if (occ.segment_index < 0 ||
          (std::size_t)occ.segment_index >= prep.slices.size()) {
        warn("occurrence " + where + ": segment index out of range");
        continue;
      }
      if (!(prep.canon.segments[occ.segment_index].state == prim.origin)) {
        warn("occurrence " + where +
             ": canonical state mismatch (symmetry options differ from the "
             "graph build?)");
        continue;
      }
      try {
        PerHandStats s = kinematics(prep.slices[occ.segment_index],
                                    options.smoothing_half_width);
        for (auto field : {&KinematicStats::v_max, &KinematicStats::v_mean,
                           &KinematicStats::a_max, &KinematicStats::a_mean}) {
          sum.lh.*field += s.lh.*field;
          sum.rh.*field += s.rh.*field;
        }
        ++scored;
      } catch (const Error& e) {
        warn("occurrence " + where + ": " + e.what());
      }
    }
    if (scored == 0) {
      rec.stats.reset();
      continue;
    }
    for (auto field : {&KinematicStats::v_max, &KinematicStats::v_mean,
                       &KinematicStats::a_max, &KinematicStats::a_mean}) {
      sum.lh.*field /= scored;
      sum.rh.*field /= scored;
    }
    rec.stats = sum;
  }
  return out;
}

}  // namespace clom
