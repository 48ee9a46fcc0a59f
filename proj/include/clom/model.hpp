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

#ifndef CLOM_MODEL_HPP
#define CLOM_MODEL_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clom/error.hpp"

namespace clom {

// ---------------------------------------------------------------------------
// Grasp geometry and grasp type
// ---------------------------------------------------------------------------

/// Geometry of one virtual finger: point, line or plane. The declared order
/// is the canonical token order (P < L < Pi).
enum class GraspShape { Point, Line, Plane };

/// One contact geometry. `extrinsic` marks contacts provided by the
/// environment (table, hanger) rather than the subject.
struct GraspGeometry {
  GraspShape shape = GraspShape::Point;
  bool extrinsic = false;

  auto operator<=>(const GraspGeometry&) const = default;
};

/// One grasp unit: two opposing geometries form a prehensile unit, a single
/// geometry is a non-prehensile support contact opposed by gravity (e.g.
/// cloth resting on a table plane). Geometries are kept in canonical order.
struct GraspUnit {
  std::vector<GraspGeometry> geometries;

  bool prehensile() const { return geometries.size() == 2; }
  auto operator<=>(const GraspUnit&) const = default;
};

/// Multiset of grasp units, never empty: every cloth state realizes a grasp.
/// Units are kept sorted so equal multisets compare and serialize equal.
struct GraspType {
  std::vector<GraspUnit> units;

  auto operator<=>(const GraspType&) const = default;
};

// ---------------------------------------------------------------------------
// Grasp bindings (locations on the cloth)
// ---------------------------------------------------------------------------

enum class Hand { Left, Right };

/// Location token vocabulary. The default is {LC, RC, FL, FR, I}; extra
/// tokens may be appended via configuration and rank after the defaults in
/// declaration order. Ranks define the canonical sort of bindings.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> tokens);

  static const Vocabulary& standard();
  /// Standard tokens plus `extras` appended in declaration order.
  static Vocabulary with_extras(const std::vector<std::string>& extras);

  std::optional<int> rank(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
};

/// Raised when a location token is not in the active vocabulary.
class UnknownLocation : public Error {
 public:
  UnknownLocation(std::string token, std::size_t offset);
  std::string token;
  std::size_t offset;
};

/// A grasped location on the cloth. `layer` absent means all layers are
/// grasped; `layer = k` means only layer k (k >= 1). `location_rank` is the
/// vocabulary rank assigned at construction and drives canonical ordering.
struct GraspBinding {
  int location_rank = 0;
  std::string location;
  std::optional<int> layer;
  std::optional<Hand> hand;

  auto operator<=>(const GraspBinding&) const = default;
};

/// Builds a binding with the rank looked up in `vocab`; throws
/// UnknownLocation for tokens outside the vocabulary.
GraspBinding make_binding(std::string_view location,
                          std::optional<int> layer = std::nullopt,
                          std::optional<Hand> hand = std::nullopt,
                          const Vocabulary& vocab = Vocabulary::standard());

// ---------------------------------------------------------------------------
// Scene state
// ---------------------------------------------------------------------------

/// Simplified cloth configuration categories, in canonical order.
enum class ClothConfig { Crumpled, Flat, Folded, SemiFolded, SemiFlat };

/// The scene-state tuple: grasp type, grasp locations, cloth configuration.
/// Node identity of the graph. Fields are normalized (sorted multisets), so
/// default member-wise equality coincides with byte equality of the
/// canonical serialization.
struct SceneState {
  GraspType grasp_type;
  std::vector<GraspBinding> bindings;
  ClothConfig config = ClothConfig::Crumpled;

  auto operator<=>(const SceneState&) const = default;
};

/// Normalizes `state` in place: sorts geometries within units, units within
/// the grasp type, bindings by (rank, layer, hand); re-ranks binding
/// locations against `vocab`. Throws UnknownLocation / std::invalid_argument
/// on invariant violations (empty grasp type, unit with 0 or >2 geometries).
void normalize_state(SceneState& state,
                     const Vocabulary& vocab = Vocabulary::standard());

/// Convenience factory: normalizes and returns.
SceneState make_state(GraspType grasp_type, std::vector<GraspBinding> bindings,
                      ClothConfig config,
                      const Vocabulary& vocab = Vocabulary::standard());

/// Non-fatal consistency checks. Currently: empty bindings while some
/// prehensile unit has a subject-side (non-extrinsic) geometry.
std::vector<std::string> lint_state(const SceneState& state);

// ---------------------------------------------------------------------------
// Motion labels and primitives
// ---------------------------------------------------------------------------

/// Free-form action label. Identity is case-insensitive after whitespace
/// normalization; `text()` keeps the original casing for display.
class MotionLabel {
 public:
  MotionLabel() = default;
  explicit MotionLabel(std::string_view raw);

  const std::string& text() const { return text_; }
  const std::string& key() const { return key_; }
  bool empty() const { return key_.empty(); }

  friend bool operator==(const MotionLabel& a, const MotionLabel& b) {
    return a.key_ == b.key_;
  }
  friend std::strong_ordering operator<=>(const MotionLabel& a,
                                          const MotionLabel& b) {
    return a.key_ <=> b.key_;
  }

 private:
  std::string text_;  // trimmed, inner whitespace collapsed
  std::string key_;   // text_ lowercased
};

/// Edge identity of the graph: origin state, destination state, motion
/// label. Origin and destination always differ (segmentation happens only
/// at state changes).
struct ManipulationPrimitive {
  SceneState origin;
  SceneState destination;
  MotionLabel label;

  friend bool operator==(const ManipulationPrimitive& a,
                         const ManipulationPrimitive& b) {
    return a.origin == b.origin && a.destination == b.destination &&
           a.label == b.label;
  }
  friend std::strong_ordering operator<=>(const ManipulationPrimitive& a,
                                          const ManipulationPrimitive& b) {
    if (auto c = a.origin <=> b.origin; c != 0) return c;
    if (auto c = a.destination <=> b.destination; c != 0) return c;
    return a.label <=> b.label;
  }
};

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

/// One labeled segment: the scene state holds from `t_start` until the next
/// segment; `action` names the transition out of it (absent on the last).
struct Segment {
  double t_start = 0.0;
  SceneState state;
  std::optional<MotionLabel> action;
};

/// One demonstration: metadata plus ordered timestamped segments.
struct Trial {
  std::string subject_id;
  std::string task_id;
  int trial_index = 1;
  std::optional<double> clap_video_time;
  std::vector<Segment> segments;
  /// Header keys other than subject/task/trial/clap, preserved verbatim.
  std::map<std::string, std::string> metadata;
};

// ---------------------------------------------------------------------------
// Graph types
// ---------------------------------------------------------------------------

/// Where an edge was observed. `segment_index` is the 0-based index of the
/// origin segment within the (canonicalized) trial.
struct Occurrence {
  std::string subject_id;
  std::string task_id;
  int trial_index = 1;
  int segment_index = 0;

  auto operator<=>(const Occurrence&) const = default;
};

/// Per-occurrence statistic means; magnitudes of velocity/acceleration.
struct KinematicStats {
  double v_max = 0.0;
  double v_mean = 0.0;
  double a_max = 0.0;
  double a_mean = 0.0;

  bool operator==(const KinematicStats&) const = default;
};

struct PerHandStats {
  KinematicStats lh;
  KinematicStats rh;

  bool operator==(const PerHandStats&) const = default;
};

struct EdgeRecord {
  int multiplicity = 0;  // always == occurrences.size()
  /// Canonical display spelling: lexicographically least whitespace-collapsed
  /// raw label observed among occurrences.
  std::string display_label;
  std::vector<Occurrence> occurrences;
  std::optional<PerHandStats> stats;

  bool operator==(const EdgeRecord&) const = default;
};

/// Distinct states and primitives with multiplicities and provenance.
struct CloMGraph {
  std::set<SceneState> nodes;
  std::map<ManipulationPrimitive, EdgeRecord> edges;
  int trial_count = 0;

  bool operator==(const CloMGraph&) const = default;
};

}  // namespace clom

#endif  // CLOM_MODEL_HPP
