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

#ifndef CLOM_EXPORT_HPP
#define CLOM_EXPORT_HPP

#include <optional>
#include <string>
#include <string_view>

#include "clom/error.hpp"
#include "clom/model.hpp"

namespace clom {

struct SchemaMismatch : Error {
  explicit SchemaMismatch(const std::string& found);
};
struct GraphJsonError : Error {
  explicit GraphJsonError(const std::string& what);
};

/// Graphviz text, byte-deterministic: nodes and edges in sorted order, node
/// ids short stable hashes of the canonical state text. Edge labels read
/// "Label (count)" plus a per-hand stats line when stats are attached. An
/// edge seen at least red_threshold times is red (penwidth 2.4), at least
/// orange_threshold times orange (1.7), otherwise black. Defaults:
/// red = ceil(trial_count/2), orange = ceil(trial_count/4); with no trials
/// and no explicit thresholds nothing is colored.
std::string export_dot(const CloMGraph& graph,
                       std::optional<int> red_threshold = std::nullopt,
                       std::optional<int> orange_threshold = std::nullopt);

/// Lossless, deterministic JSON (schema "clom-graph/1"); see
/// docs/graph-schema.md for the field-by-field layout.
std::string export_json(const CloMGraph& graph);

/// Inverse of export_json. Rejects other schema versions; validates counts
/// and re-sorts occurrence lists.
CloMGraph import_json(std::string_view text,
                      const Vocabulary& vocab = Vocabulary::standard());

/// The DOT node identifier used for a state ("n" + 12 hex digits).
std::string dot_node_id(const SceneState& state);

}  // namespace clom

#endif  // CLOM_EXPORT_HPP
