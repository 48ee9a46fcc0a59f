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

#include "clom/symmetry.hpp"

#include <algorithm>

#include "clom/stateparse.hpp"

namespace clom {

namespace {

std::string swap_location(const std::string& loc, const char* const (*pairs)[2],
                          std::size_t n_pairs) {
  for (std::size_t i = 0; i < n_pairs; ++i) {
    if (loc == pairs[i][0]) return pairs[i][1];
    if (loc == pairs[i][1]) return pairs[i][0];
  }
  return loc;  // interior point and vocabulary extensions are fixed points
}

SceneState apply_location_map(const SceneState& state,
                              const char* const (*pairs)[2],
                              std::size_t n_pairs, bool swap_hands,
                              const Vocabulary& vocab) {
  SceneState out = state;
  for (auto& b : out.bindings) {
    b.location = swap_location(b.location, pairs, n_pairs);
    if (swap_hands && b.hand)
      b.hand = (b.hand == Hand::Left) ? Hand::Right : Hand::Left;
  }
  normalize_state(out, vocab);
  return out;
}

}  // namespace

SceneState mirror_lr(const SceneState& state, const Vocabulary& vocab) {
  static const char* const pairs[][2] = {{"LC", "RC"}, {"FL", "FR"}};
  return apply_location_map(state, pairs, 2, /*swap_hands=*/true, vocab);
}

SceneState rotate_180(const SceneState& state, const Vocabulary& vocab) {
  static const char* const pairs[][2] = {{"LC", "FR"}, {"RC", "FL"}};
  return apply_location_map(state, pairs, 2, /*swap_hands=*/false, vocab);
}

SceneState canonicalize(const SceneState& state, const SymmetryConfig& config,
                        const Vocabulary& vocab) {
  SceneState projected = state;
  for (auto& b : projected.bindings) {
    if (config.drop_hands) b.hand.reset();
    if (config.drop_layers) b.layer.reset();
  }
  normalize_state(projected, vocab);

  std::vector<SceneState> orbit;
  orbit.push_back(projected);
  if (config.mirror_lr) orbit.push_back(mirror_lr(projected, vocab));
  if (config.rotate_180) orbit.push_back(rotate_180(projected, vocab));
  if (config.mirror_lr && config.rotate_180)
    orbit.push_back(rotate_180(mirror_lr(projected, vocab), vocab));

  const SceneState* best = &orbit[0];
  std::string best_text = serialize_state(orbit[0]);
  for (std::size_t i = 1; i < orbit.size(); ++i) {
    std::string text = serialize_state(orbit[i]);
    if (text < best_text) {
      best_text = std::move(text);
      best = &orbit[i];
    }
  }
  return *best;
}

CanonicalTrial canonicalize_trial(const Trial& trial,
                                  const SymmetryConfig& config,
                                  const Vocabulary& vocab) {
  CanonicalTrial result;
  result.trial = trial;
  result.trial.segments.clear();

  for (std::size_t i = 0; i < trial.segments.size(); ++i) {
    Segment seg = trial.segments[i];
    seg.state = canonicalize(seg.state, config, vocab);
    if (!result.trial.segments.empty() &&
        result.trial.segments.back().state == seg.state) {
      // The transition between the merged segments vanishes; the merged
      // segment keeps the earliest t_start and the outgoing action.
      TrialMerge merge;
      merge.segment_index = static_cast<int>(i);
      merge.t_start_removed = seg.t_start;
      if (result.trial.segments.back().action)
        merge.dropped_action = result.trial.segments.back().action->text();
      result.merges.push_back(merge);
      result.trial.segments.back().action = seg.action;
    } else {
      result.trial.segments.push_back(std::move(seg));
    }
  }
  return result;
}

}  // namespace clom
