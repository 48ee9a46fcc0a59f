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

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "clom/graph.hpp"
#include "clom/motion.hpp"
#include "clom/stateparse.hpp"
#include "testutil.hpp"

using namespace clom;
using testutil::S;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string csv_row(double t, const Eigen::Vector3d& lh,
                    const Eigen::Vector3d& rh) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", t,
                lh.x(), lh.y(), lh.z(), rh.x(), rh.y(), rh.z());
  return buf;
}

// 100 Hz track of length `seconds`, positions from the two callables.
template <typename LH, typename RH>
MotionTrack make_track(double seconds, LH lh, RH rh, double rate = 100.0) {
  MotionTrack track;
  const int n = static_cast<int>(std::lround(seconds * rate)) + 1;
  for (int i = 0; i < n; ++i) {
    const double t = i / rate;
    track.times.push_back(t);
    track.lh.push_back(lh(t));
    track.rh.push_back(rh(t));
  }
  track.rate_hz = rate;
  return track;
}

Eigen::Vector3d still(double) { return Eigen::Vector3d::Zero(); }

// A sharp clap: one-sample displacement of the left hand at time `at`.
MotionTrack track_with_spikes(double seconds,
                              const std::vector<double>& spike_times) {
  MotionTrack track = make_track(seconds, still, still);
  for (double at : spike_times) {
    const auto idx = static_cast<std::size_t>(std::lround(at * 100.0));
    track.lh[idx].x() += 0.01;
  }
  return track;
}

Trial sync_trial(double clap_video, const std::vector<double>& video_times,
                 const std::vector<const char*>& states) {
  Trial t;
  t.subject_id = "s01";
  t.task_id = "wave";
  t.trial_index = 1;
  t.clap_video_time = clap_video;
  for (std::size_t i = 0; i < video_times.size(); ++i) {
    Segment seg;
    seg.t_start = video_times[i];
    seg.state = S(states[i]);
    if (i + 1 < video_times.size()) seg.action = MotionLabel("go");
    t.segments.push_back(std::move(seg));
  }
  return t;
}

}  // namespace

TEST_CASE("load_motion reads rate and per-hand positions") {
  std::ostringstream csv;
  csv << "time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n";
  for (int i = 0; i < 1000; ++i) {
    const double t = i / 100.0;
    csv << csv_row(t, {t, 2 * t, 3 * t}, {-t, 0.0, 1.0});
  }
  std::vector<std::string> warnings;
  MotionTrack track = load_motion(csv.str(), &warnings);
  CHECK(warnings.empty());
  CHECK(track.rate_hz == doctest::Approx(100.0));
  REQUIRE(track.times.size() == 1000);
  CHECK(track.times[10] == doctest::Approx(0.1));
  CHECK(track.lh[10].y() == doctest::Approx(0.2));
  CHECK(track.rh[10].x() == doctest::Approx(-0.1));
  CHECK(track.rh[10].z() == doctest::Approx(1.0));
}

TEST_CASE("column order is free, extras warn, required ones are enforced") {
  const char* shuffled =
      "rh_z,time,lh_z,lh_x,lh_y,rh_x,rh_y\n"
      "9,0.00,3,1,2,7,8\n"
      "9,0.01,3,1,2,7,8\n"
      "9,0.02,3,1,2,7,8\n";
  MotionTrack track = load_motion(shuffled);
  CHECK(track.lh[0].isApprox(Eigen::Vector3d(1, 2, 3)));
  CHECK(track.rh[0].isApprox(Eigen::Vector3d(7, 8, 9)));

  std::vector<std::string> warnings;
  const char* extra =
      "time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z,confidence\n"
      "0.00,0,0,0,0,0,0,0.9\n"
      "0.01,0,0,0,0,0,0,0.8\n";
  load_motion(extra, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0] == "motion table: ignoring extra column \"confidence\"");

  const char* missing =
      "time,lh_x,lh_y,lh_z,rh_x,rh_y\n"
      "0.00,0,0,0,0,0\n"
      "0.01,0,0,0,0,0\n";
  CHECK_THROWS_AS(load_motion(missing), MissingColumn);
  CHECK_THROWS_WITH(load_motion(missing),
                    "motion table is missing required column \"rh_z\"");
}

TEST_CASE("irregular sampling and malformed rows are rejected") {
  std::ostringstream csv;
  csv << "time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n";
  for (int i = 0; i < 100; ++i) {
    double t = i / 100.0;
    if (i > 50) t += 0.5;  // half-second gap between rows 51 and 52
    csv << csv_row(t, {0, 0, 0}, {0, 0, 0});
  }
  CHECK_THROWS_AS(load_motion(csv.str()), NonUniformSampling);
  try {
    load_motion(csv.str());
  } catch (const NonUniformSampling& e) {
    CHECK(std::string(e.what()).find("row 52") != std::string::npos);
    CHECK(std::string(e.what()).find("0.510000") != std::string::npos);
  }

  CHECK_THROWS_AS(load_motion(""), TooFewSamples);
  CHECK_THROWS_AS(load_motion("time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n"),
                  TooFewSamples);
  CHECK_THROWS_AS(load_motion("time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n"
                              "0,0,0,0,0,0,0\n"),
                  TooFewSamples);
  CHECK_THROWS_AS(load_motion("time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n"
                              "0,0,0,0,0,0,0\n"
                              "0.01,0,0,0,0,0\n"),
                  MotionFormat);  // short row
  CHECK_THROWS_AS(load_motion("time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n"
                              "0,0,0,0,0,0,0\n"
                              "0.01,zero,0,0,0,0,0\n"),
                  MotionFormat);  // bad number
}

TEST_CASE("detect_clap locates a gaussian impact") {
  const double sigma = 0.03, amp = 0.08;
  auto bump = [&](double t) {
    const double d = t - 2.0;
    return Eigen::Vector3d(amp * std::exp(-d * d / (2 * sigma * sigma)), 0, 0);
  };
  MotionTrack track = make_track(10.0, bump, still);
  std::vector<std::string> warnings;
  SyncResult sync = detect_clap(track, std::nullopt, 2, &warnings);
  CHECK(warnings.empty());
  CHECK(sync.peak_time == doctest::Approx(2.0).epsilon(0.01));
  CHECK(sync.offset == sync.peak_time);
  CHECK(sync.peak_value > 10.0);  // A/sigma^2 before smoothing is ~89 m/s^2
}

TEST_CASE("a flat track is reported as ambiguous") {
  MotionTrack track = make_track(5.0, still, still);
  std::vector<std::string> warnings;
  SyncResult sync = detect_clap(track, std::nullopt, 2, &warnings);
  CHECK(sync.peak_value == 0.0);
  // Earliest index with a full stencil: w + 1 samples in.
  CHECK(sync.peak_time == doctest::Approx(0.03));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("ambiguous clap peak") != std::string::npos);
}

TEST_CASE("equal spikes resolve to the earlier with a warning") {
  MotionTrack track = track_with_spikes(10.0, {1.0, 6.0});
  std::vector<std::string> warnings;
  SyncResult sync = detect_clap(track, std::nullopt, 2, &warnings);
  CHECK(sync.peak_time == doctest::Approx(1.0).epsilon(0.05));
  REQUIRE_FALSE(warnings.empty());
  CHECK(warnings[0].find("ambiguous clap peak") != std::string::npos);

  // An explicit window designates the later spike instead.
  warnings.clear();
  SyncResult late =
      detect_clap(track, std::pair{5.5, 6.5}, 2, &warnings);
  CHECK(late.peak_time == doctest::Approx(6.0).epsilon(0.01));
  CHECK(warnings.empty());
}

TEST_CASE("window bounds are validated against the track span") {
  MotionTrack track = track_with_spikes(10.0, {1.0});
  CHECK_THROWS_AS(detect_clap(track, std::pair{-1.0, 5.0}),
                  WindowOutOfRange);
  CHECK_THROWS_AS(detect_clap(track, std::pair{3.0, 2.0}), WindowOutOfRange);
  CHECK_THROWS_AS(detect_clap(track, std::pair{0.0, 30.0}),
                  WindowOutOfRange);
}

TEST_CASE("clap detection is translation equivariant") {
  MotionTrack track = track_with_spikes(10.0, {1.0});
  MotionTrack shifted = track;
  for (double& t : shifted.times) t += 100.0;
  const SyncResult base = detect_clap(track);
  const SyncResult moved = detect_clap(shifted);
  CHECK(moved.peak_time == doctest::Approx(base.peak_time + 100.0));
  CHECK(moved.peak_value == doctest::Approx(base.peak_value));
}

TEST_CASE("segment_motion maps video intervals onto the motion clock") {
  auto ramp = [](double t) { return Eigen::Vector3d(t, 0, 0); };
  MotionTrack track = make_track(10.0, ramp, still);
  // Clap at motion 2.0 and video 5.0: video time v lands at motion v - 3.
  SyncResult sync{2.0, 50.0, 2.0};
  Trial trial = sync_trial(5.0, {5.0, 6.0, 8.0},
                           {"Pie | - | Crumpled", "PP | LC | Crumpled",
                            "Pie | - | Flat"});
  std::vector<std::string> warnings;
  std::vector<MotionSlice> slices =
      segment_motion(track, trial, sync, &warnings);
  CHECK(warnings.empty());
  REQUIRE(slices.size() == 3);
  CHECK(slices[0].times.size() == 100);  // [2.0, 3.0) at 100 Hz
  CHECK(slices[0].times.front() == doctest::Approx(2.0));
  CHECK(slices[0].times.back() == doctest::Approx(2.99));
  CHECK(slices[1].times.size() == 200);  // [3.0, 5.0)
  // The final segment runs to the end of the track, inclusive.
  CHECK(slices[2].times.size() == 501);  // [5.0, 10.0]
  CHECK(slices[2].times.back() == doctest::Approx(10.0));
  // Identity of samples: positions are the track's own samples.
  for (std::size_t k = 0; k < slices[0].times.size(); ++k)
    CHECK(slices[0].lh[k].x() == doctest::Approx(slices[0].times[k]));
}

TEST_CASE("segments outside the recording are truncated with a warning") {
  MotionTrack track = make_track(5.0, still, still);
  SyncResult sync{1.0, 50.0, 1.0};
  Trial trial = sync_trial(1.0, {-2.0, 3.0},
                           {"Pie | - | Crumpled", "Pie | - | Flat"});
  std::vector<std::string> warnings;
  std::vector<MotionSlice> slices =
      segment_motion(track, trial, sync, &warnings);
  REQUIRE(slices.size() == 2);
  CHECK(slices[0].times.front() == doctest::Approx(0.0));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0] ==
        "segment 0 of trial s01/wave/1 reaches outside the recording, "
        "truncated");

  Trial no_clap = trial;
  no_clap.clap_video_time.reset();
  CHECK_THROWS_AS(segment_motion(track, no_clap, sync), MissingClap);
}

TEST_CASE("kinematics matches the closed form of a sinusoid") {
  const double amp = 0.3, freq = 0.5;
  auto wave = [&](double t) {
    return Eigen::Vector3d(amp * std::sin(2 * kPi * freq * t), 0, 0);
  };
  MotionTrack track = make_track(10.0, wave, [&](double t) {
    return Eigen::Vector3d(0, amp * std::sin(2 * kPi * freq * t), 0);
  });
  MotionSlice slice{track.times, track.lh, track.rh};
  PerHandStats stats = kinematics(slice, 2);

  const double v_peak = 2 * kPi * freq * amp;          // 0.9425 m/s
  const double a_peak = 2 * kPi * freq * v_peak;       // 2.9609 m/s^2
  const double two_over_pi = 2.0 / kPi;
  for (const KinematicStats& hand : {stats.lh, stats.rh}) {
    CHECK(hand.v_max == doctest::Approx(v_peak).epsilon(0.03));
    CHECK(hand.v_mean == doctest::Approx(two_over_pi * v_peak).epsilon(0.03));
    CHECK(hand.a_max == doctest::Approx(a_peak).epsilon(0.03));
    CHECK(hand.a_mean == doctest::Approx(two_over_pi * a_peak).epsilon(0.03));
  }
}

TEST_CASE("a constant slice has exactly zero kinematics") {
  MotionTrack track = make_track(1.0, still, still);
  MotionSlice slice{track.times, track.lh, track.rh};
  PerHandStats stats = kinematics(slice, 2);
  CHECK(stats.lh.v_max == 0.0);
  CHECK(stats.lh.v_mean == 0.0);
  CHECK(stats.lh.a_max == 0.0);
  CHECK(stats.rh.a_mean == 0.0);
}

TEST_CASE("the minimum slice length is exactly 2w + 3") {
  auto ramp = [](double t) { return Eigen::Vector3d(t, 0, 0); };
  for (int w : {0, 1, 2, 4}) {
    const std::size_t needed = 2 * (std::size_t)w + 3;
    MotionTrack track = make_track((double)(needed - 1) / 100.0, ramp, still);
    REQUIRE(track.times.size() == needed);
    MotionSlice slice{track.times, track.lh, track.rh};
    PerHandStats stats = kinematics(slice, w);
    CHECK(stats.lh.v_max == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(stats.lh.v_mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(stats.lh.a_max < 1e-6);

    MotionSlice short_slice = slice;
    short_slice.times.pop_back();
    short_slice.lh.pop_back();
    short_slice.rh.pop_back();
    CHECK_THROWS_AS(kinematics(short_slice, w), SliceTooShort);
  }
  MotionSlice empty;
  CHECK_THROWS_AS(kinematics(empty, 2), SliceTooShort);
  CHECK_THROWS_AS(kinematics(empty, -1), std::invalid_argument);
}

TEST_CASE("scaling the trajectory scales every statistic linearly") {
  const double alpha = 2.5;
  auto wave = [](double t) {
    return Eigen::Vector3d(0.1 * std::sin(3.0 * t), 0.05 * std::cos(2.0 * t),
                           0.02 * t);
  };
  MotionTrack track = make_track(4.0, wave, wave);
  MotionSlice base{track.times, track.lh, track.rh};
  MotionSlice scaled = base;
  for (auto& p : scaled.lh) p *= alpha;
  for (auto& p : scaled.rh) p *= alpha;
  PerHandStats s0 = kinematics(base, 2);
  PerHandStats s1 = kinematics(scaled, 2);
  CHECK(s1.lh.v_max == doctest::Approx(alpha * s0.lh.v_max).epsilon(1e-12));
  CHECK(s1.lh.v_mean == doctest::Approx(alpha * s0.lh.v_mean).epsilon(1e-12));
  CHECK(s1.rh.a_max == doctest::Approx(alpha * s0.rh.a_max).epsilon(1e-12));
  CHECK(s1.rh.a_mean == doctest::Approx(alpha * s0.rh.a_mean).epsilon(1e-12));
}

namespace {

// A recording whose only acceleration is a clap spike at motion time 1.0;
// the left hand otherwise glides at `speed` along x.
MotionTrack glide_track(double speed) {
  auto lh = [&](double t) { return Eigen::Vector3d(speed * t, 0, 0); };
  MotionTrack track = make_track(10.0, lh, still);
  track.lh[100].y() += 0.05;  // clap at 1.00 s
  return track;
}

}  // namespace

TEST_CASE("attach_stats averages per-occurrence kinematics exactly") {
  const SymmetryConfig identity{false, false, false, false};
  // Both trials traverse the same edge; their origin segments move at
  // 1.0 m/s and 2.0 m/s, so the stored mean must be exactly 1.5 m/s.
  std::vector<Trial> trials = {
      sync_trial(1.0, {2.0, 8.0}, {"Pie | - | Crumpled", "Pie | - | Flat"}),
      sync_trial(1.0, {2.0, 8.0}, {"Pie | - | Crumpled", "Pie | - | Flat"}),
  };
  trials[1].trial_index = 2;
  std::vector<MotionTrack> tracks = {glide_track(1.0), glide_track(2.0)};

  BuildOptions build;
  build.symmetry = identity;
  CloMGraph graph = build_graph(trials, build);
  REQUIRE(graph.edges.size() == 1);

  AttachOptions attach;
  attach.symmetry = identity;
  std::vector<std::string> warnings;
  CloMGraph scored = attach_stats(graph, trials, tracks, attach, &warnings);
  const EdgeRecord& rec = scored.edges.begin()->second;
  REQUIRE(rec.stats.has_value());
  CHECK(rec.stats->lh.v_max == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(rec.stats->lh.v_mean == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(rec.stats->lh.a_max == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(rec.stats->rh.v_max == doctest::Approx(0.0));
  // The input graph is untouched.
  CHECK_FALSE(graph.edges.begin()->second.stats.has_value());
}

TEST_CASE("attach_stats turns per-trial and per-occurrence faults into "
          "warnings") {
  const SymmetryConfig identity{false, false, false, false};
  BuildOptions build;
  build.symmetry = identity;
  AttachOptions attach;
  attach.symmetry = identity;

  SUBCASE("mismatched vector lengths are a usage error") {
    CloMGraph g;
    CHECK_THROWS_AS(attach_stats(g, {Trial{}}, {}, attach),
                    std::invalid_argument);
  }

  SUBCASE("a trial without a clap header is skipped whole") {
    std::vector<Trial> trials = {sync_trial(
        1.0, {2.0, 8.0}, {"Pie | - | Crumpled", "Pie | - | Flat"})};
    CloMGraph graph = build_graph(trials, build);
    trials[0].clap_video_time.reset();
    std::vector<std::string> warnings;
    CloMGraph scored = attach_stats(graph, trials, {glide_track(1.0)}, attach,
                                    &warnings);
    CHECK_FALSE(scored.edges.begin()->second.stats.has_value());
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].find("trial s01/wave/1 skipped:") == 0);
    CHECK(warnings[1].find("no usable motion trial") != std::string::npos);
  }

  SUBCASE("a too-short slice skips only its occurrence") {
    std::vector<Trial> trials = {
        sync_trial(1.0, {2.0, 2.03, 8.0},
                   {"Pie | - | Crumpled", "PP | LC | Crumpled",
                    "Pie | - | Flat"})};
    CloMGraph graph = build_graph(trials, build);
    REQUIRE(graph.edges.size() == 2);
    std::vector<std::string> warnings;
    CloMGraph scored = attach_stats(graph, trials, {glide_track(1.0)}, attach,
                                    &warnings);
    int with = 0, without = 0;
    for (const auto& [prim, rec] : scored.edges)
      rec.stats.has_value() ? ++with : ++without;
    CHECK(with == 1);
    CHECK(without == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("samples, needs") != std::string::npos);
  }

  SUBCASE("duplicate trial identity keeps the first pairing") {
    std::vector<Trial> trials = {
        sync_trial(1.0, {2.0, 8.0}, {"Pie | - | Crumpled", "Pie | - | Flat"}),
        sync_trial(1.0, {2.0, 8.0}, {"Pie | - | Crumpled", "Pie | - | Flat"}),
    };
    CloMGraph graph = build_graph({trials[0]}, build);
    std::vector<std::string> warnings;
    CloMGraph scored = attach_stats(
        graph, trials, {glide_track(1.0), glide_track(2.0)}, attach,
        &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0] == "duplicate trial s01/wave/1, keeping the first");
    const EdgeRecord& rec = scored.edges.begin()->second;
    REQUIRE(rec.stats.has_value());
    CHECK(rec.stats->lh.v_max == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("symmetry mismatch with the graph build is reported") {
    std::vector<Trial> trials = {sync_trial(
        1.0, {2.0, 8.0}, {"PP | RC | Crumpled", "2PP | LC+RC | Flat"})};
    CloMGraph graph = build_graph(trials, build);  // identity build
    AttachOptions mirrored;                        // default symmetry
    std::vector<std::string> warnings;
    CloMGraph scored =
        attach_stats(graph, trials, {glide_track(1.0)}, mirrored, &warnings);
    CHECK_FALSE(scored.edges.begin()->second.stats.has_value());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("canonical state mismatch") != std::string::npos);
  }
}
