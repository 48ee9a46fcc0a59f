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

#include "clom/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "clom/stateparse.hpp"

namespace clom {
namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::rational<BigInt>;

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr) warnings->push_back(std::move(message));
}

std::string trial_name(const Trial& t) {
  return t.subject_id + "/" + t.task_id + "/" + std::to_string(t.trial_index);
}

}  // namespace

CloMGraph build_graph(const std::vector<Trial>& trials,
                      const BuildOptions& options,
                      std::vector<std::string>* warnings) {
  CloMGraph graph;
  for (const Trial& raw : trials) {
    if (options.task_filter.has_value()) {
      const auto& wanted = *options.task_filter;
      if (std::find(wanted.begin(), wanted.end(), raw.task_id) == wanted.end())
        continue;
    }
    ++graph.trial_count;
    CanonicalTrial canon =
        canonicalize_trial(raw, options.symmetry, options.vocab);
    const Trial& trial = canon.trial;
    for (const Segment& segment : trial.segments)
      graph.nodes.insert(segment.state);
    if (trial.segments.size() < 2) {
      warn(warnings, "trial " + trial_name(trial) +
                         ": every segment merged into one state, no "
                         "transitions recorded");
      continue;
    }
    for (std::size_t i = 0; i + 1 < trial.segments.size(); ++i) {
      const Segment& from = trial.segments[i];
      const Segment& to = trial.segments[i + 1];
      // parse_trial guarantees the action on every non-final segment.
      ManipulationPrimitive prim{from.state, to.state, *from.action};
      EdgeRecord& rec = graph.edges[prim];
      if (rec.multiplicity == 0 || from.action->text() < rec.display_label)
        rec.display_label = from.action->text();
      ++rec.multiplicity;
      rec.occurrences.push_back(Occurrence{trial.subject_id, trial.task_id,
                                           trial.trial_index,
                                           static_cast<int>(i)});
    }
  }
  for (auto& [prim, rec] : graph.edges)
    std::sort(rec.occurrences.begin(), rec.occurrences.end());
  if (graph.trial_count == 0) warn(warnings, "empty corpus: no trials ingested");
  return graph;
}

CloMGraph filter_graph(const CloMGraph& graph, int min_support) {
  if (min_support < 1)
    throw std::invalid_argument("min_support must be >= 1, got " +
                                std::to_string(min_support));
  CloMGraph out;
  out.trial_count = graph.trial_count;
  for (const auto& [prim, rec] : graph.edges) {
    if (rec.multiplicity < min_support) continue;
    out.edges.emplace(prim, rec);
    out.nodes.insert(prim.origin);
    out.nodes.insert(prim.destination);
  }
  return out;
}

CloMGraph subgraph_by_label(const CloMGraph& graph, std::string_view label,
                            const std::set<SceneState>& absorbing,
                            std::vector<std::string>* warnings) {
  MotionLabel wanted(label);
  CloMGraph out;
  out.trial_count = graph.trial_count;

  std::set<SceneState> frontier;
  for (const auto& [prim, rec] : graph.edges) {
    if (prim.label != wanted) continue;
    out.edges.emplace(prim, rec);
    out.nodes.insert(prim.origin);
    out.nodes.insert(prim.destination);
    frontier.insert(prim.destination);
  }
  if (out.edges.empty()) {
    warn(warnings, "label not found: \"" + std::string(label) + "\"");
    return out;
  }

  std::set<SceneState> expanded;
  while (!frontier.empty()) {
    SceneState node = *frontier.begin();
    frontier.erase(frontier.begin());
    if (!expanded.insert(node).second) continue;
    if (absorbing.count(node) != 0) continue;
    for (const auto& [prim, rec] : graph.edges) {
      if (!(prim.origin == node)) continue;
      if (out.edges.emplace(prim, rec).second) {
        out.nodes.insert(prim.destination);
        if (expanded.count(prim.destination) == 0)
          frontier.insert(prim.destination);
      }
    }
  }
  return out;
}

namespace {

struct RankedPath {
  StrategyPath path;
  BigRational likelihood{0};
  std::vector<std::string> label_keys;
  std::vector<std::string> dest_texts;
};

bool ranked_before(const RankedPath& a, const RankedPath& b) {
  if (a.likelihood != b.likelihood) return a.likelihood > b.likelihood;
  if (a.path.length != b.path.length) return a.path.length < b.path.length;
  if (a.label_keys != b.label_keys) return a.label_keys < b.label_keys;
  return a.dest_texts < b.dest_texts;
}

struct PathSearch {
  const CloMGraph& graph;
  const SceneState& goal;
  int max_paths;
  std::map<SceneState, long long> out_mult = {};
  std::vector<const std::pair<const ManipulationPrimitive, EdgeRecord>*> stack = {};
  std::set<SceneState> on_path = {};
  std::vector<RankedPath> found = {};
  bool capped = false;

  void record() {
    if (static_cast<int>(found.size()) >= max_paths) {
      capped = true;
      return;
    }
    RankedPath rp;
    BigRational like{1};
    int bottleneck = 0;
    for (const auto* entry : stack) {
      const ManipulationPrimitive& prim = entry->first;
      const EdgeRecord& rec = entry->second;
      rp.path.edges.push_back(prim);
      rp.label_keys.push_back(prim.label.key());
      rp.dest_texts.push_back(serialize_state(prim.destination));
      like *= BigRational(BigInt(rec.multiplicity),
                          BigInt(out_mult.at(prim.origin)));
      bottleneck = bottleneck == 0 ? rec.multiplicity
                                   : std::min(bottleneck, rec.multiplicity);
    }
    rp.likelihood = like;
    rp.path.length = static_cast<int>(rp.path.edges.size());
    rp.path.bottleneck_support = bottleneck;
    found.push_back(std::move(rp));
  }

  void dfs(const SceneState& node) {
    if (capped) return;
    if (node == goal) {
      record();
      return;
    }
    on_path.insert(node);
    for (const auto& entry : graph.edges) {
      if (capped) break;
      if (!(entry.first.origin == node)) continue;
      if (on_path.count(entry.first.destination) != 0) continue;
      stack.push_back(&entry);
      dfs(entry.first.destination);
      stack.pop_back();
    }
    on_path.erase(node);
  }
};

}  // namespace

std::vector<StrategyPath> rank_strategies(const CloMGraph& graph,
                                          const SceneState& start,
                                          const SceneState& goal, int k,
                                          int max_paths,
                                          std::vector<std::string>* warnings) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (max_paths < 1) throw std::invalid_argument("max_paths must be >= 1");
  if (start == goal) {
    warn(warnings, "start equals goal: no non-trivial strategies");
    return {};
  }
  PathSearch search{graph, goal, max_paths};
  for (const auto& [prim, rec] : graph.edges)
    search.out_mult[prim.origin] += rec.multiplicity;
  search.dfs(start);
  if (search.capped)
    warn(warnings, "path enumeration capped at " + std::to_string(max_paths) +
                       " complete paths; ranking may be incomplete");
  if (search.found.empty()) {
    warn(warnings, "goal unreachable from start");
    return {};
  }
  std::sort(search.found.begin(), search.found.end(), ranked_before);
  std::vector<StrategyPath> out;
  for (auto& rp : search.found) {
    if (static_cast<int>(out.size()) >= k) break;
    rp.path.likelihood =
        static_cast<double>(rp.likelihood.numerator()) /
        static_cast<double>(rp.likelihood.denominator());
    out.push_back(std::move(rp.path));
  }
  return out;
}

ComplexityMetrics complexity_metrics(const CloMGraph& graph) {
  ComplexityMetrics m;
  m.node_count = static_cast<int>(graph.nodes.size());
  m.edge_count = static_cast<int>(graph.edges.size());

  std::map<SceneState, std::pair<int, long long>> out;  // degree, multiplicity
  std::map<SceneState, std::vector<int>> out_counts;
  for (const auto& [prim, rec] : graph.edges) {
    m.total_multiplicity += rec.multiplicity;
    auto& [deg, mult] = out[prim.origin];
    ++deg;
    mult += rec.multiplicity;
    out_counts[prim.origin].push_back(rec.multiplicity);
  }

  long long degree_sum = 0;
  long long weight_sum = 0;
  double entropy_weighted = 0.0;
  int non_sink = 0;
  for (const SceneState& node : graph.nodes) {
    auto it = out.find(node);
    if (it == out.end()) {
      ++m.sink_count;
      continue;
    }
    ++non_sink;
    degree_sum += it->second.first;
    const long long total = it->second.second;
    double h = 0.0;
    for (int c : out_counts[node]) {
      const double p = static_cast<double>(c) / static_cast<double>(total);
      h -= p * std::log2(p);
    }
    entropy_weighted += static_cast<double>(total) * h;
    weight_sum += total;
  }
  if (non_sink > 0)
    m.mean_out_degree = static_cast<double>(degree_sum) / non_sink;
  if (weight_sum > 0) m.mean_out_entropy_bits = entropy_weighted / weight_sum;
  if (graph.trial_count > 0)
    m.edges_per_trial = static_cast<double>(m.total_multiplicity) /
                        static_cast<double>(graph.trial_count);
  return m;
}

}  // namespace clom
