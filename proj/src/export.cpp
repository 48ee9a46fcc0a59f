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

#include "clom/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "clom/stateparse.hpp"

namespace clom {

SchemaMismatch::SchemaMismatch(const std::string& found)
    : Error("unsupported graph schema \"" + found +
            "\", expected \"clom-graph/1\"") {}
GraphJsonError::GraphJsonError(const std::string& what)
    : Error("bad graph JSON: " + what) {}

namespace {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string stats_line(const PerHandStats& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "v %.2f/%.2f, a %.2f/%.2f — LH; "
                "v %.2f/%.2f, a %.2f/%.2f — RH",
                s.lh.v_max, s.lh.v_mean, s.lh.a_max, s.lh.a_mean, s.rh.v_max,
                s.rh.v_mean, s.rh.a_max, s.rh.a_mean);
  return buf;
}

int ceil_div(int num, int den) { return (num + den - 1) / den; }

}  // namespace

std::string dot_node_id(const SceneState& state) {
  // Low 48 bits keep ids short and diff-able; collisions would need on the
  // order of 2^24 distinct states.
  const std::uint64_t h = fnv1a64(serialize_state(state)) & 0xFFFFFFFFFFFFull;
  char buf[16];
  std::snprintf(buf, sizeof buf, "n%012llx", (unsigned long long)h);
  return buf;
}

std::string export_dot(const CloMGraph& graph, std::optional<int> red_threshold,
                       std::optional<int> orange_threshold) {
  int red = std::numeric_limits<int>::max();
  int orange = std::numeric_limits<int>::max();
  if (red_threshold.has_value()) {
    red = *red_threshold;
  } else if (graph.trial_count > 0) {
    red = ceil_div(graph.trial_count, 2);
  }
  if (orange_threshold.has_value()) {
    orange = *orange_threshold;
  } else if (graph.trial_count > 0) {
    orange = ceil_div(graph.trial_count, 4);
  }

  std::string out = "digraph clom {\n";
  for (const SceneState& node : graph.nodes) {
    out += "  " + dot_node_id(node) + " [label=\"" +
           dot_escape(serialize_state(node)) + "\"];\n";
  }
  for (const auto& [prim, rec] : graph.edges) {
    std::string label =
        rec.display_label + " (" + std::to_string(rec.multiplicity) + ")";
    if (rec.stats.has_value()) label += "\n" + stats_line(*rec.stats);
    const char* color = "black";
    const char* penwidth = "1.0";
    if (rec.multiplicity >= red) {
      color = "red";
      penwidth = "2.4";
    } else if (rec.multiplicity >= orange) {
      color = "orange";
      penwidth = "1.7";
    }
    std::string escaped;
    for (char ch : dot_escape(label))
      if (ch == '\n')
        escaped += "\\n";
      else
        escaped += ch;
    out += "  " + dot_node_id(prim.origin) + " -> " +
           dot_node_id(prim.destination) + " [label=\"" + escaped +
           "\", color=" + color + ", penwidth=" + penwidth + "];\n";
  }
  out += "}\n";
  return out;
}

namespace {

using Json = nlohmann::ordered_json;

Json stats_to_json(const KinematicStats& s) {
  return Json{{"v_max", s.v_max},
              {"v_mean", s.v_mean},
              {"a_max", s.a_max},
              {"a_mean", s.a_mean}};
}

KinematicStats stats_from_json(const Json& j) {
  KinematicStats s;
  s.v_max = j.at("v_max").get<double>();
  s.v_mean = j.at("v_mean").get<double>();
  s.a_max = j.at("a_max").get<double>();
  s.a_mean = j.at("a_mean").get<double>();
  return s;
}

}  // namespace

std::string export_json(const CloMGraph& graph) {
  Json root;
  root["schema"] = "clom-graph/1";
  root["trial_count"] = graph.trial_count;
  Json nodes = Json::array();
  for (const SceneState& node : graph.nodes) nodes.push_back(serialize_state(node));
  root["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& [prim, rec] : graph.edges) {
    Json edge;
    edge["origin"] = serialize_state(prim.origin);
    edge["destination"] = serialize_state(prim.destination);
    edge["label"] = rec.display_label;
    edge["multiplicity"] = rec.multiplicity;
    Json occurrences = Json::array();
    for (const Occurrence& occ : rec.occurrences) {
      occurrences.push_back(Json{{"subject", occ.subject_id},
                                 {"task", occ.task_id},
                                 {"trial", occ.trial_index},
                                 {"segment", occ.segment_index}});
    }
    edge["occurrences"] = std::move(occurrences);
    if (rec.stats.has_value()) {
      edge["stats"] = Json{{"lh", stats_to_json(rec.stats->lh)},
                           {"rh", stats_to_json(rec.stats->rh)}};
    }
    edges.push_back(std::move(edge));
  }
  root["edges"] = std::move(edges);
  return root.dump(2) + "\n";
}

CloMGraph import_json(std::string_view text, const Vocabulary& vocab) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::exception& e) {
    throw GraphJsonError(e.what());
  }
  try {
    if (!root.is_object() || !root.contains("schema"))
      throw GraphJsonError("missing \"schema\" field");
    const std::string schema = root.at("schema").get<std::string>();
    if (schema != "clom-graph/1") throw SchemaMismatch(schema);

    CloMGraph graph;
    graph.trial_count = root.at("trial_count").get<int>();
    if (graph.trial_count < 0) throw GraphJsonError("negative trial_count");
    for (const Json& node : root.at("nodes"))
      graph.nodes.insert(parse_state(node.get<std::string>(), vocab));
    for (const Json& edge : root.at("edges")) {
      ManipulationPrimitive prim{
          parse_state(edge.at("origin").get<std::string>(), vocab),
          parse_state(edge.at("destination").get<std::string>(), vocab),
          MotionLabel(edge.at("label").get<std::string>())};
      EdgeRecord rec;
      rec.display_label = edge.at("label").get<std::string>();
      rec.multiplicity = edge.at("multiplicity").get<int>();
      for (const Json& occ : edge.at("occurrences")) {
        rec.occurrences.push_back(
            Occurrence{occ.at("subject").get<std::string>(),
                       occ.at("task").get<std::string>(),
                       occ.at("trial").get<int>(),
                       occ.at("segment").get<int>()});
      }
      std::sort(rec.occurrences.begin(), rec.occurrences.end());
      if (rec.multiplicity != static_cast<int>(rec.occurrences.size()))
        throw GraphJsonError("edge \"" + rec.display_label +
                             "\": multiplicity " +
                             std::to_string(rec.multiplicity) +
                             " does not match " +
                             std::to_string(rec.occurrences.size()) +
                             " occurrences");
      if (edge.contains("stats")) {
        rec.stats = PerHandStats{stats_from_json(edge.at("stats").at("lh")),
                                 stats_from_json(edge.at("stats").at("rh"))};
      }
      graph.nodes.insert(prim.origin);
      graph.nodes.insert(prim.destination);
      if (!graph.edges.emplace(prim, std::move(rec)).second)
        throw GraphJsonError("duplicate edge for origin \"" +
                             edge.at("origin").get<std::string>() + "\"");
    }
    return graph;
  } catch (const Json::exception& e) {
    throw GraphJsonError(e.what());
  }
}

}  // namespace clom
