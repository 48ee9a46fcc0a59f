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

#ifndef CLOM_CORPUSGEN_HPP
#define CLOM_CORPUSGEN_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clom/error.hpp"
#include "clom/model.hpp"

namespace clom {

struct NoAbsorbingState : Error {
  NoAbsorbingState();
};

/// A probabilistic graph to sample trials from. Goal states are absorbing
/// (no out-edges); every other node's out-probabilities sum to 1.
struct GroundTruth {
  std::set<SceneState> nodes;
  std::map<ManipulationPrimitive, double> edges;  // transition probability
  std::vector<std::pair<SceneState, double>> start;  // start distribution
  std::set<SceneState> goals;
};

/// Reads the clom-graph/1 JSON extension with per-edge "prob" plus root
/// "start" and "goals" arrays (see docs/graph-schema.md). Validates the
/// distributions, rejects self-loops, dead ends, and non-absorbing goals.
GroundTruth load_ground_truth(std::string_view json_text,
                              const Vocabulary& vocab = Vocabulary::standard());

struct CorpusGenOptions {
  int n_subjects = 8;      // trials are dealt round-robin to s01, s02, ...
  double rate_hz = 60.0;
  double min_segment_s = 2.0;
  double max_segment_s = 5.0;
  std::string task_id = "task";
  int max_walk_steps = 200;
};

struct GeneratedTrial {
  std::string clom_name;        // e.g. task_s01_t1.clom
  std::string motion_name;      // e.g. task_s01_t1_motion.csv
  std::string annotation_text;  // .clom contents
  std::string motion_csv;       // motion table contents
};

/// Samples n_trials start-to-goal walks and renders each as an annotation
/// file plus a matching synthetic motion table (smooth waypoint-to-waypoint
/// hand paths, a clap spike before the first segment, randomized clock
/// offset between video and motion). Byte-deterministic given the seed.
std::vector<GeneratedTrial> generate_corpus(
    const GroundTruth& ground_truth, int n_trials, std::uint64_t seed,
    const CorpusGenOptions& options = {});

}  // namespace clom

#endif  // CLOM_CORPUSGEN_HPP
