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

#ifndef CLOM_MOTION_HPP
#define CLOM_MOTION_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "clom/error.hpp"
#include "clom/model.hpp"
#include "clom/symmetry.hpp"

namespace clom {

// Motion file: UTF-8 CSV, header row required, columns time, lh_x, lh_y,
// lh_z, rh_x, rh_y, rh_z in any order (extras ignored with a warning).
// Units are seconds and meters.

struct MotionFormat : Error {
  MotionFormat(int line, const std::string& what);
};
struct MissingColumn : Error {
  explicit MissingColumn(const std::string& column);
};
struct NonUniformSampling : Error {
  NonUniformSampling(int row, double dt, double nominal_dt);
};
struct TooFewSamples : Error {
  explicit TooFewSamples(std::size_t count);
};
struct WindowOutOfRange : Error {
  WindowOutOfRange(double lo, double hi, double track_lo, double track_hi);
};
struct SliceTooShort : Error {
  SliceTooShort(std::size_t count, std::size_t needed);
};
struct MissingClap : Error {
  explicit MissingClap(const std::string& trial);
};

/// Per-hand 3D trajectory on the motion clock, nominally uniform sampling.
struct MotionTrack {
  std::vector<double> times;          // strictly increasing, seconds
  std::vector<Eigen::Vector3d> lh;    // meters
  std::vector<Eigen::Vector3d> rh;
  double rate_hz = 0.0;
};

MotionTrack load_motion(std::string_view csv_text,
                        std::vector<std::string>* warnings = nullptr);

/// Clap synchronization: video_time = motion_time - offset + clap_video_time.
struct SyncResult {
  double offset = 0.0;      // motion-clock time of the clap
  double peak_value = 0.0;  // m/s^2, summed hands
  double peak_time = 0.0;   // == offset
};

/// Finds the global maximum of |a_lh| + |a_rh| inside `window` (motion-clock
/// interval; default the first 20 s of the track). Acceleration comes from
/// the same smoothing and differencing used by kinematics(). Earliest sample
/// wins a tie; a rival value within 5% of the maximum more than 0.5 s away
/// yields an "ambiguous clap peak" warning.
SyncResult detect_clap(
    const MotionTrack& track,
    std::optional<std::pair<double, double>> window = std::nullopt,
    int smoothing_half_width = 2, std::vector<std::string>* warnings = nullptr);

/// Contiguous sample range of a track; may be shorter than a full stencil.
struct MotionSlice {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> lh;
  std::vector<Eigen::Vector3d> rh;
};

/// Cuts the track into one slice per trial segment. Segment i covers the
/// video interval [t_i, t_{i+1}) mapped onto the motion clock; the final
/// segment runs to the end of the track. Segments reaching outside the
/// recording are truncated with a warning.
std::vector<MotionSlice> segment_motion(const MotionTrack& track,
                                        const Trial& trial,
                                        const SyncResult& sync,
                                        std::vector<std::string>* warnings =
                                            nullptr);

/// Max and mean of |v| and |a| per hand over the slice. Positions are
/// smoothed by a centered moving average of width 2w+1, velocity by central
/// differences, acceleration by central differences of velocity; only
/// indices with a full stencil count, so the slice needs >= 2w+3 samples.
PerHandStats kinematics(const MotionSlice& slice, int smoothing_half_width = 2);

struct AttachOptions {
  /// Must match the options the graph was built with, or occurrence segment
  /// indices will not line up.
  SymmetryConfig symmetry;
  int smoothing_half_width = 2;
  std::optional<std::pair<double, double>> clap_window;
  Vocabulary vocab = Vocabulary::standard();
};

/// Computes per-occurrence kinematics on each edge's origin segment and
/// stores the per-hand arithmetic means across occurrences. trials[i] pairs
/// with tracks[i]. Per-occurrence failures become warnings; edges with no
/// scorable occurrence keep absent stats.
CloMGraph attach_stats(const CloMGraph& graph, const std::vector<Trial>& trials,
                       const std::vector<MotionTrack>& tracks,
                       const AttachOptions& options = {},
                       std::vector<std::string>* warnings = nullptr);

}  // namespace clom

#endif  // CLOM_MOTION_HPP
