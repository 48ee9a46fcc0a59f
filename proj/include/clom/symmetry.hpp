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

#ifndef CLOM_SYMMETRY_HPP
#define CLOM_SYMMETRY_HPP

#include <string>
#include <vector>

#include "clom/model.hpp"

namespace clom {

/// Which simplifications to apply when canonicalizing states. Defaults match
/// the two rules the folding-task analysis uses: left/right identification
/// and dropping the grasping-hand annotation.
struct SymmetryConfig {
  bool drop_hands = true;
  bool mirror_lr = true;
  bool rotate_180 = false;
  bool drop_layers = false;

  bool operator==(const SymmetryConfig&) const = default;
};

/// Reflects the scene left/right: LC<->RC, FL<->FR in binding locations and
/// LH<->RH in hands. Grasp type and cloth configuration are unchanged.
/// Involution: mirror_lr(mirror_lr(s)) == s.
SceneState mirror_lr(const SceneState& state,
                     const Vocabulary& vocab = Vocabulary::standard());

/// Rotates the cloth frame half a turn: LC<->FR, RC<->FL. Hands unchanged.
SceneState rotate_180(const SceneState& state,
                      const Vocabulary& vocab = Vocabulary::standard());

/// Applies the drop projections, then returns the state whose serialization
/// is lexicographically least over the orbit under the enabled symmetry
/// group. Idempotent; constant on orbits; never changes the configuration.
SceneState canonicalize(const SceneState& state, const SymmetryConfig& config,
                        const Vocabulary& vocab = Vocabulary::standard());

/// One adjacent-segment merge performed by canonicalize_trial.
struct TrialMerge {
  int segment_index = 0;       // 0-based index of the removed segment
  double t_start_removed = 0.0;
  std::string dropped_action;  // transition that vanished in the merge
};

struct CanonicalTrial {
  Trial trial;
  std::vector<TrialMerge> merges;
};

/// Canonicalizes every segment state; adjacent segments that become equal
/// are merged (earliest t_start kept, the inner transition reported).
CanonicalTrial canonicalize_trial(const Trial& trial,
                                  const SymmetryConfig& config,
                                  const Vocabulary& vocab = Vocabulary::standard());

}  // namespace clom

#endif  // CLOM_SYMMETRY_HPP
