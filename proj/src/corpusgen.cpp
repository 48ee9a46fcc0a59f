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

#include "clom/corpusgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Core>

#include "json.hpp"

#include "clom/annotation.hpp"
#include "clom/export.hpp"
#include "clom/stateparse.hpp"

namespace clom {

NoAbsorbingState::NoAbsorbingState()
    : Error("ground truth needs a non-empty set of absorbing goal states") {}

GroundTruth load_ground_truth(std::string_view json_text,
                              const Vocabulary& vocab) {
  using Json = nlohmann::ordered_json;
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw GraphJsonError(e.what());
  }
  try {
    const std::string schema = root.at("schema").get<std::string>();
    if (schema != "clom-graph/1") throw SchemaMismatch(schema);

    GroundTruth gt;
    for (const Json& node : root.at("nodes"))
      gt.nodes.insert(parse_state(node.get<std::string>(), vocab));
    for (const Json& edge : root.at("edges")) {
      ManipulationPrimitive prim{
          parse_state(edge.at("origin").get<std::string>(), vocab),
          parse_state(edge.at("destination").get<std::string>(), vocab),
          MotionLabel(edge.at("label").get<std::string>())};
      if (prim.origin == prim.destination)
        throw GraphJsonError(
            "self-loop at \"" + serialize_state(prim.origin) +
            "\": a trial cannot repeat a state in consecutive segments");
      const double prob = edge.at("prob").get<double>();
      if (!(prob > 0.0 && prob <= 1.0))
        throw GraphJsonError("edge probability must be in (0, 1], got " +
                             std::to_string(prob));
      gt.nodes.insert(prim.origin);
      gt.nodes.insert(prim.destination);
      if (!gt.edges.emplace(prim, prob).second)
        throw GraphJsonError("duplicate ground-truth edge from \"" +
                             serialize_state(prim.origin) + "\"");
    }
    double start_sum = 0.0;
    for (const Json& entry : root.at("start")) {
      SceneState state = parse_state(entry.at("state").get<std::string>(), vocab);
      const double prob = entry.at("prob").get<double>();
      if (gt.nodes.count(state) == 0)
        throw GraphJsonError("start state \"" + serialize_state(state) +
                             "\" is not a node");
      gt.start.emplace_back(std::move(state), prob);
      start_sum += prob;
    }
    if (gt.start.empty() || std::abs(start_sum - 1.0) > 1e-6)
      throw GraphJsonError("start probabilities must sum to 1");
    for (const Json& goal : root.at("goals"))
      gt.goals.insert(parse_state(goal.get<std::string>(), vocab));
    if (gt.goals.empty()) throw NoAbsorbingState();

    // Per-node validation: goals absorb, everything else moves on.
    std::map<SceneState, double> out_sum;
    for (const auto& [prim, prob] : gt.edges) {
      if (gt.goals.count(prim.origin) != 0) throw NoAbsorbingState();
      out_sum[prim.origin] += prob;
    }
    for (const SceneState& node : gt.nodes) {
      if (gt.goals.count(node) != 0) continue;
      auto it = out_sum.find(node);
      if (it == out_sum.end())
        throw GraphJsonError("dead end at non-goal state \"" +
                             serialize_state(node) + "\"");
      if (std::abs(it->second - 1.0) > 1e-6)
        throw GraphJsonError("out-probabilities at \"" + serialize_state(node) +
                             "\" sum to " + std::to_string(it->second));
    }
    for (const auto& [state, prob] : gt.start)
      if (gt.goals.count(state) != 0)
        throw GraphJsonError("start state \"" + serialize_state(state) +
                             "\" is a goal; trials would have one segment");
    return gt;
  } catch (const Json::exception& e) {
    throw GraphJsonError(e.what());
  }
}

namespace {

// Bit-stable uniforms: the distributions in <random> differ across standard
// libraries, so corpora would not be byte-identical everywhere.
double u01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

Eigen::Vector3d random_waypoint(std::mt19937_64& rng) {
  return {uniform(rng, -0.5, 0.5), uniform(rng, -0.3, 0.6),
          uniform(rng, 0.7, 1.4)};
}

const SceneState* sample_state(
    std::mt19937_64& rng, const std::vector<std::pair<SceneState, double>>& dist) {
  double total = 0.0;
  for (const auto& [state, prob] : dist) total += prob;
  double x = u01(rng) * total;
  for (const auto& [state, prob] : dist) {
    x -= prob;
    if (x <= 0.0) return &state;
  }
  return &dist.back().first;
}

std::string two_digit_id(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, index);
  return buf;
}

}  // namespace

std::vector<GeneratedTrial> generate_corpus(const GroundTruth& ground_truth,
                                            int n_trials, std::uint64_t seed,
                                            const CorpusGenOptions& options) {
  if (n_trials < 0) throw std::invalid_argument("n_trials must be >= 0");
  if (options.n_subjects < 1)
    throw std::invalid_argument("n_subjects must be >= 1");
  if (!(options.rate_hz > 0.0) || !(options.min_segment_s > 0.0) ||
      options.max_segment_s < options.min_segment_s)
    throw std::invalid_argument("bad timing options");
  if (ground_truth.goals.empty()) throw NoAbsorbingState();
  if (ground_truth.start.empty())
    throw std::invalid_argument("ground truth has no start distribution");

  // Out-edges per state in map order, so draws are reproducible.
  std::map<SceneState, std::vector<std::pair<const ManipulationPrimitive*, double>>>
      out;
  for (const auto& [prim, prob] : ground_truth.edges)
    out[prim.origin].emplace_back(&prim, prob);

  std::mt19937_64 rng(seed);
  std::vector<GeneratedTrial> corpus;
  for (int i = 0; i < n_trials; ++i) {
    const std::string subject =
        two_digit_id("s", i % options.n_subjects + 1);
    const int trial_index = i / options.n_subjects + 1;

    const double clap_video = uniform(rng, 0.5, 1.5);
    const double clap_motion = uniform(rng, 0.8, 1.2);
    const double gap = uniform(rng, 0.5, 1.0);

    // Sampled walk start -> goal.
    std::vector<const SceneState*> states{
        sample_state(rng, ground_truth.start)};
    std::vector<std::string> actions;
    while (ground_truth.goals.count(*states.back()) == 0) {
      if ((int)actions.size() >= options.max_walk_steps)
        throw Error("sampled walk exceeded " +
                    std::to_string(options.max_walk_steps) +
                    " steps without reaching a goal");
      auto it = out.find(*states.back());
      if (it == out.end())
        throw Error("dead end at \"" + serialize_state(*states.back()) + "\"");
      double total = 0.0;
      for (const auto& [prim, prob] : it->second) total += prob;
      double x = u01(rng) * total;
      const ManipulationPrimitive* picked = it->second.back().first;
      for (const auto& [prim, prob] : it->second) {
        x -= prob;
        if (x <= 0.0) {
          picked = prim;
          break;
        }
      }
      actions.push_back(picked->label.text());
      states.push_back(&picked->destination);
    }

    // Video-clock boundaries: one per segment plus the end of the last.
    std::vector<double> video(states.size() + 1);
    video[0] = clap_video + gap;
    for (std::size_t j = 0; j < states.size(); ++j)
      video[j + 1] =
          video[j] + uniform(rng, options.min_segment_s, options.max_segment_s);

    Trial trial;
    trial.subject_id = subject;
    trial.task_id = options.task_id;
    trial.trial_index = trial_index;
    trial.clap_video_time = clap_video;
    trial.metadata["generator"] = "gen-corpus seed " + std::to_string(seed);
    for (std::size_t j = 0; j < states.size(); ++j) {
      Segment seg;
      seg.t_start = video[j];
      seg.state = *states[j];
      if (j < actions.size()) seg.action = MotionLabel(actions[j]);
      trial.segments.push_back(std::move(seg));
    }

    // Hand paths: rest through the clap, then cosine blends between random
    // waypoints at each segment boundary.
    auto to_motion = [&](double t) { return t - clap_video + clap_motion; };
    const double track_end = to_motion(video.back()) + 0.5;
    std::vector<double> wp_times{0.0, clap_motion + 0.2};
    for (double v : video) wp_times.push_back(to_motion(v));
    wp_times.push_back(track_end);

    const Eigen::Vector3d rest_lh(-0.2, 0.0, 1.0);
    const Eigen::Vector3d rest_rh(0.2, 0.0, 1.0);
    std::vector<Eigen::Vector3d> wp_lh{rest_lh, rest_lh};
    std::vector<Eigen::Vector3d> wp_rh{rest_rh, rest_rh};
    for (std::size_t j = 0; j < video.size(); ++j) {
      wp_lh.push_back(random_waypoint(rng));
      wp_rh.push_back(random_waypoint(rng));
    }
    wp_lh.push_back(wp_lh.back());  // hold the final pose
    wp_rh.push_back(wp_rh.back());

    auto position = [&](const std::vector<Eigen::Vector3d>& wp, double t) {
      if (t <= wp_times.front()) return wp.front();
      for (std::size_t j = 0; j + 1 < wp_times.size(); ++j) {
        if (t >= wp_times[j + 1]) continue;
        const double u = (t - wp_times[j]) / (wp_times[j + 1] - wp_times[j]);
        const double blend = 0.5 * (1.0 - std::cos(M_PI * u));
        return Eigen::Vector3d(wp[j] + blend * (wp[j + 1] - wp[j]));
      }
      return wp.back();
    };
    // Clap spike: sharp gaussian bump on both hands, about 89 m/s^2 of
    // peak acceleration before smoothing, far above the blend motion.
    const double kSigma = 0.03, kAmp = 0.08;
    auto clap_bump = [&](double t) {
      const double d = t - clap_motion;
      return kAmp * std::exp(-d * d / (2.0 * kSigma * kSigma));
    };

    std::string csv = "time,lh_x,lh_y,lh_z,rh_x,rh_y,rh_z\n";
    const long samples = std::lround(track_end * options.rate_hz) + 1;
    for (long n = 0; n < samples; ++n) {
      const double t = double(n) / options.rate_hz;
      Eigen::Vector3d lh = position(wp_lh, t);
      Eigen::Vector3d rh = position(wp_rh, t);
      const double bump = clap_bump(t);
      lh.x() += bump;
      rh.x() += bump;
      char row[160];
      std::snprintf(row, sizeof row, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", t,
                    lh.x(), lh.y(), lh.z(), rh.x(), rh.y(), rh.z());
      csv += row;
    }

    GeneratedTrial generated;
    const std::string stem = options.task_id + "_" + subject + "_t" +
                             std::to_string(trial_index);
    generated.clom_name = stem + ".clom";
    generated.motion_name = stem + "_motion.csv";
    generated.annotation_text = serialize_trial(trial);
    generated.motion_csv = std::move(csv);
    corpus.push_back(std::move(generated));
  }
  return corpus;
}

}  // namespace clom
