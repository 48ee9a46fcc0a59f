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

#ifndef CLOM_GRAPH_HPP
#define CLOM_GRAPH_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clom/model.hpp"
#include "clom/symmetry.hpp"

namespace clom {

struct BuildOptions {
  SymmetryConfig symmetry;
  /// When set, only trials whose task_id is in the list are ingested.
  std::optional<std::vector<std::string>> task_filter;
  Vocabulary vocab = Vocabulary::standard();
};

/// Builds the graph of all distinct canonical states and primitives seen in
/// the trials, counting multiplicity and keeping full provenance. The trial
/// list order never affects the result.
CloMGraph build_graph(const std::vector<Trial>& trials,
                      const BuildOptions& options = {},
                      std::vector<std::string>* warnings = nullptr);

/// Keeps edges with multiplicity >= min_support, then drops nodes left
/// without an incident edge. min_support must be >= 1.
CloMGraph filter_graph(const CloMGraph& graph, int min_support);

/// All edges whose motion label matches `label` (case-insensitive), plus the
/// forward closure from their destinations; nodes in `absorbing` are kept
/// but never expanded. Multiplicities and provenance are preserved.
CloMGraph subgraph_by_label(const CloMGraph& graph, std::string_view label,
                            const std::set<SceneState>& absorbing,
                            std::vector<std::string>* warnings = nullptr);

/// A simple path start -> goal with its empirical likelihood: the product
/// over edges of multiplicity(e) / total out-multiplicity of e's origin.
struct StrategyPath {
  std::vector<ManipulationPrimitive> edges;
  double likelihood = 0.0;
  int bottleneck_support = 0;
  int length = 0;
};

/// Up to k simple paths from start to goal, ranked by exact-rational
/// likelihood (ties: shorter first, then lexicographic edge labels). Returns
/// an empty list when goal is unreachable or equal to start. Enumeration
/// stops after `max_paths` complete paths (warning emitted).
std::vector<StrategyPath> rank_strategies(
    const CloMGraph& graph, const SceneState& start, const SceneState& goal,
    int k, int max_paths = 10000, std::vector<std::string>* warnings = nullptr);

struct ComplexityMetrics {
  int node_count = 0;
  int edge_count = 0;
  long long total_multiplicity = 0;
  int sink_count = 0;  // nodes with no out-edge, excluded from means
  double mean_out_degree = 0.0;
  double mean_out_entropy_bits = 0.0;  // weighted by node out-multiplicity
  double edges_per_trial = 0.0;
};

ComplexityMetrics complexity_metrics(const CloMGraph& graph);

}  // namespace clom

#endif  // CLOM_GRAPH_HPP
