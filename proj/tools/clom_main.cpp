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

// clom: batch front end. Subcommands compose through the clom-graph/1 JSON
// format; diagnostics go to stderr, machine output to stdout. Exit codes:
// 0 success, 1 validation failure, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clom/annotation.hpp"
#include "clom/corpusgen.hpp"
#include "clom/export.hpp"
#include "clom/graph.hpp"
#include "clom/model.hpp"
#include "clom/motion.hpp"
#include "clom/stateparse.hpp"
#include "clom/symmetry.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw clom::Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw clom::Error("cannot write " + path);
  out << text;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

// Key=value config file; '#' starts a comment. Recognized keys:
// drop_hands, mirror_lr, rotate_180, drop_layers, smoothing_width,
// red_threshold, orange_threshold, extra_locations (comma separated).
struct Config {
  clom::SymmetryConfig symmetry;
  int smoothing_width = 2;
  std::optional<int> red_threshold;
  std::optional<int> orange_threshold;
  std::vector<std::string> extra_locations;
};

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw clom::Error("config key " + key + ": bad boolean \"" + value + "\"");
}

Config load_config(const std::string& path) {
  Config config;
  std::istringstream in(slurp(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw clom::Error(path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      const std::size_t x = s.find_first_not_of(" \t\r");
      const std::size_t y = s.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "drop_hands") config.symmetry.drop_hands = parse_bool(value, key);
    else if (key == "mirror_lr") config.symmetry.mirror_lr = parse_bool(value, key);
    else if (key == "rotate_180") config.symmetry.rotate_180 = parse_bool(value, key);
    else if (key == "drop_layers") config.symmetry.drop_layers = parse_bool(value, key);
    else if (key == "smoothing_width") config.smoothing_width = std::stoi(value);
    else if (key == "red_threshold") config.red_threshold = std::stoi(value);
    else if (key == "orange_threshold") config.orange_threshold = std::stoi(value);
    else if (key == "extra_locations") {
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ','))
        if (std::string t = item; !t.empty()) {
          const std::size_t x = t.find_first_not_of(" \t");
          const std::size_t y = t.find_last_not_of(" \t");
          if (x != std::string::npos)
            config.extra_locations.push_back(t.substr(x, y - x + 1));
        }
    } else {
      throw clom::Error(path + ":" + std::to_string(line_no) +
                        ": unknown config key \"" + key + "\"");
    }
  }
  return config;
}

// Options shared by the graph-facing subcommands. Precedence: built-in
// defaults, then the config file (--config or $CLOM_CONFIG), then any flag
// the user actually passed.
struct Common {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string input = "-";
  std::string output = "-";
  Config config;
  clom::SymmetryConfig flag_symmetry;  // raw flag bindings
  int flag_smoothing = 2;
  clom::Vocabulary vocab = clom::Vocabulary::standard();

  void add_io(CLI::App* c, bool with_input = true) {
    cmd = c;
    c->add_option("--config", config_path, "key=value config file");
    if (with_input) c->add_option("-i,--input", input, "input file, - for stdin");
    c->add_option("-o,--output", output, "output file, - for stdout");
  }

  void add_symmetry(CLI::App* c) {
    c->add_flag("--drop-hands,!--keep-hands", flag_symmetry.drop_hands,
                "ignore which hand grasps (default on)");
    c->add_flag("--mirror-lr,!--no-mirror-lr", flag_symmetry.mirror_lr,
                "identify left/right mirror images (default on)");
    c->add_flag("--rotate-180,!--no-rotate-180", flag_symmetry.rotate_180,
                "identify half-turn rotations (default off)");
    c->add_flag("--drop-layers,!--keep-layers", flag_symmetry.drop_layers,
                "ignore layer subscripts (default off)");
  }

  void add_smoothing(CLI::App* c) {
    c->add_option("--smoothing-width", flag_smoothing,
                  "moving-average half-width for kinematics (default 2)");
  }

  bool flag_given(const char* name) const {
    const CLI::Option* opt = cmd == nullptr ? nullptr : cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  }

  // Call once after parsing, before using config or vocab.
  void resolve() {
    std::string path = config_path;
    if (path.empty())
      if (const char* env = std::getenv("CLOM_CONFIG")) path = env;
    if (!path.empty()) config = load_config(path);
    if (flag_given("--drop-hands")) config.symmetry.drop_hands = flag_symmetry.drop_hands;
    if (flag_given("--mirror-lr")) config.symmetry.mirror_lr = flag_symmetry.mirror_lr;
    if (flag_given("--rotate-180")) config.symmetry.rotate_180 = flag_symmetry.rotate_180;
    if (flag_given("--drop-layers")) config.symmetry.drop_layers = flag_symmetry.drop_layers;
    if (flag_given("--smoothing-width")) config.smoothing_width = flag_smoothing;
    if (!config.extra_locations.empty())
      vocab = clom::Vocabulary::with_extras(config.extra_locations);
  }
};

clom::CloMGraph read_graph(const Common& common) {
  return clom::import_json(slurp(common.input), common.vocab);
}

std::vector<clom::Trial> read_trials(const std::vector<std::string>& paths,
                                     const clom::Vocabulary& vocab,
                                     bool* any_failed = nullptr) {
  std::vector<clom::Trial> trials;
  for (const std::string& path : paths) {
    try {
      trials.push_back(clom::parse_trial(slurp(path), vocab));
    } catch (const clom::Error& e) {
      std::cerr << path << ": " << e.what() << "\n";
      if (any_failed == nullptr) throw;
      *any_failed = true;
    }
  }
  return trials;
}

int run_validate(const std::vector<std::string>& paths,
                 const clom::Vocabulary& vocab) {
  bool failed = false;
  for (const std::string& path : paths) {
    try {
      clom::Trial trial = clom::parse_trial(slurp(path), vocab);
      for (std::size_t i = 0; i < trial.segments.size(); ++i)
        for (const std::string& w : clom::lint_state(trial.segments[i].state))
          std::cerr << path << ": segment " << i + 1 << ": lint: " << w << "\n";
      std::cout << "ok " << path << " (" << trial.segments.size()
                << " segments)\n";
    } catch (const clom::Error& e) {
      std::cerr << path << ": " << e.what() << "\n";
      failed = true;
    }
  }
  return failed ? 1 : 0;
}

nlohmann::ordered_json metrics_json(const clom::ComplexityMetrics& m) {
  return nlohmann::ordered_json{{"node_count", m.node_count},
                                {"edge_count", m.edge_count},
                                {"total_multiplicity", m.total_multiplicity},
                                {"sink_count", m.sink_count},
                                {"mean_out_degree", m.mean_out_degree},
                                {"mean_out_entropy_bits", m.mean_out_entropy_bits},
                                {"edges_per_trial", m.edges_per_trial}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloth manipulation graph toolkit"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand("validate", "parse and lint .clom files");
  std::vector<std::string> validate_files;
  validate->add_option("files", validate_files, "annotation files")->required();
  Common validate_common;
  validate_common.cmd = validate;
  validate->add_option("--config", validate_common.config_path,
                       "key=value config file");

  // build
  auto* build = app.add_subcommand("build", "trials to graph JSON");
  std::vector<std::string> build_files;
  std::vector<std::string> build_tasks;
  int build_min_support = 1;
  build->add_option("files", build_files, "annotation files")->required();
  build->add_option("--task", build_tasks, "only ingest these task ids");
  build->add_option("--min-support", build_min_support,
                    "drop edges seen fewer times");
  Common build_common;
  build_common.add_io(build, /*with_input=*/false);
  build_common.add_symmetry(build);

  // filter
  auto* filter = app.add_subcommand("filter", "prune rare edges");
  int filter_min_support = 1;
  filter->add_option("--min-support", filter_min_support, "keep edges seen at least this often")
      ->required();
  Common filter_common;
  filter_common.add_io(filter);

  // subgraph
  auto* subgraph = app.add_subcommand(
      "subgraph", "edges with a label plus everything reachable after them");
  std::string subgraph_label;
  std::vector<std::string> subgraph_absorbing;
  subgraph->add_option("--label", subgraph_label, "motion label (case-insensitive)")
      ->required();
  subgraph->add_option("--absorbing", subgraph_absorbing,
                       "states not expanded during closure");
  Common subgraph_common;
  subgraph_common.add_io(subgraph);
  subgraph_common.add_symmetry(subgraph);

  // stats
  auto* stats = app.add_subcommand(
      "stats", "attach kinematic statistics from motion tables");
  std::vector<std::string> stats_files;
  std::string stats_motion_dir;
  stats->add_option("files", stats_files, "annotation files")->required();
  stats->add_option("--motion-dir", stats_motion_dir,
                    "directory with <stem>_motion.csv per <stem>.clom")
      ->required();
  Common stats_common;
  stats_common.add_io(stats);
  stats_common.add_symmetry(stats);
  stats_common.add_smoothing(stats);

  // plan
  auto* plan = app.add_subcommand("plan", "rank start-to-goal strategies");
  std::string plan_from, plan_to;
  int plan_k = 5, plan_max_paths = 10000;
  plan->add_option("--from", plan_from, "start state")->required();
  plan->add_option("--to", plan_to, "goal state")->required();
  plan->add_option("-k", plan_k, "number of strategies");
  plan->add_option("--max-paths", plan_max_paths, "enumeration cap");
  Common plan_common;
  plan_common.add_io(plan);
  plan_common.add_symmetry(plan);

  // metrics
  auto* metrics = app.add_subcommand("metrics", "graph complexity measures");
  Common metrics_common;
  metrics_common.add_io(metrics);

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "graph JSON to Graphviz DOT");
  Common dot_common;
  dot_common.add_io(dot);
  std::optional<int> dot_red, dot_orange;
  dot->add_option("--red", dot_red, "red threshold (default ceil(trials/2))");
  dot->add_option("--orange", dot_orange,
                  "orange threshold (default ceil(trials/4))");

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "sample a synthetic corpus");
  std::string gen_truth, gen_dir = ".";
  int gen_trials = 24;
  std::uint64_t gen_seed = 1;
  clom::CorpusGenOptions gen_options;
  gen->add_option("--ground-truth", gen_truth, "probabilistic graph JSON")
      ->required();
  gen->add_option("--out-dir", gen_dir, "output directory");
  gen->add_option("--trials", gen_trials, "number of trials");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--subjects", gen_options.n_subjects, "subject count");
  gen->add_option("--rate", gen_options.rate_hz, "motion sampling rate, Hz");
  gen->add_option("--min-seg", gen_options.min_segment_s, "min segment length, s");
  gen->add_option("--max-seg", gen_options.max_segment_s, "max segment length, s");
  gen->add_option("--task", gen_options.task_id, "task id");
  Common gen_common;
  gen_common.cmd = gen;
  gen->add_option("--config", gen_common.config_path, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) {
      validate_common.resolve();
      return run_validate(validate_files, validate_common.vocab);
    }

    if (*build) {
      build_common.resolve();
      bool failed = false;
      std::vector<clom::Trial> trials =
          read_trials(build_files, build_common.vocab, &failed);
      if (failed) return 1;
      clom::BuildOptions options;
      options.symmetry = build_common.config.symmetry;
      options.vocab = build_common.vocab;
      if (!build_tasks.empty()) options.task_filter = build_tasks;
      std::vector<std::string> warnings;
      clom::CloMGraph graph = clom::build_graph(trials, options, &warnings);
      if (build_min_support > 1)
        graph = clom::filter_graph(graph, build_min_support);
      print_warnings(warnings);
      spill(build_common.output, clom::export_json(graph));
      return 0;
    }

    if (*filter) {
      filter_common.resolve();
      clom::CloMGraph graph = read_graph(filter_common);
      spill(filter_common.output,
            clom::export_json(clom::filter_graph(graph, filter_min_support)));
      return 0;
    }

    if (*subgraph) {
      subgraph_common.resolve();
      clom::CloMGraph graph = read_graph(subgraph_common);
      std::set<clom::SceneState> absorbing;
      for (const std::string& text : subgraph_absorbing)
        absorbing.insert(clom::canonicalize(
            clom::parse_state(text, subgraph_common.vocab),
            subgraph_common.config.symmetry, subgraph_common.vocab));
      std::vector<std::string> warnings;
      clom::CloMGraph result =
          clom::subgraph_by_label(graph, subgraph_label, absorbing, &warnings);
      print_warnings(warnings);
      spill(subgraph_common.output, clom::export_json(result));
      return 0;
    }

    if (*stats) {
      stats_common.resolve();
      clom::CloMGraph graph = read_graph(stats_common);
      std::vector<clom::Trial> trials;
      std::vector<clom::MotionTrack> tracks;
      std::vector<std::string> warnings;
      for (const std::string& path : stats_files) {
        clom::Trial trial = clom::parse_trial(slurp(path), stats_common.vocab);
        fs::path motion = fs::path(stats_motion_dir) /
                          (fs::path(path).stem().string() + "_motion.csv");
        if (!fs::exists(motion)) {
          warnings.push_back("no motion table for " + path + " (expected " +
                             motion.string() + ")");
          continue;
        }
        tracks.push_back(clom::load_motion(slurp(motion.string()), &warnings));
        trials.push_back(std::move(trial));
      }
      clom::AttachOptions options;
      options.symmetry = stats_common.config.symmetry;
      options.smoothing_half_width = stats_common.config.smoothing_width;
      options.vocab = stats_common.vocab;
      clom::CloMGraph result =
          clom::attach_stats(graph, trials, tracks, options, &warnings);
      print_warnings(warnings);
      spill(stats_common.output, clom::export_json(result));
      return 0;
    }

    if (*plan) {
      plan_common.resolve();
      clom::CloMGraph graph = read_graph(plan_common);
      const clom::SymmetryConfig& sym = plan_common.config.symmetry;
      clom::SceneState from = clom::canonicalize(
          clom::parse_state(plan_from, plan_common.vocab), sym, plan_common.vocab);
      clom::SceneState to = clom::canonicalize(
          clom::parse_state(plan_to, plan_common.vocab), sym, plan_common.vocab);
      std::vector<std::string> warnings;
      std::vector<clom::StrategyPath> ranked = clom::rank_strategies(
          graph, from, to, plan_k, plan_max_paths, &warnings);
      print_warnings(warnings);
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      for (const clom::StrategyPath& path : ranked) {
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const clom::ManipulationPrimitive& prim : path.edges) {
          steps.push_back({{"origin", clom::serialize_state(prim.origin)},
                           {"destination", clom::serialize_state(prim.destination)},
                           {"label", prim.label.text()}});
        }
        out.push_back({{"likelihood", path.likelihood},
                       {"length", path.length},
                       {"bottleneck_support", path.bottleneck_support},
                       {"steps", std::move(steps)}});
      }
      spill(plan_common.output, out.dump(2) + "\n");
      return 0;
    }

    if (*metrics) {
      metrics_common.resolve();
      clom::CloMGraph graph = read_graph(metrics_common);
      spill(metrics_common.output,
            metrics_json(clom::complexity_metrics(graph)).dump(2) + "\n");
      return 0;
    }

    if (*dot) {
      dot_common.resolve();
      clom::CloMGraph graph = read_graph(dot_common);
      std::optional<int> red = dot_red, orange = dot_orange;
      if (!red.has_value()) red = dot_common.config.red_threshold;
      if (!orange.has_value()) orange = dot_common.config.orange_threshold;
      spill(dot_common.output, clom::export_dot(graph, red, orange));
      return 0;
    }

    if (*gen) {
      gen_common.resolve();
      clom::GroundTruth truth =
          clom::load_ground_truth(slurp(gen_truth), gen_common.vocab);
      std::vector<clom::GeneratedTrial> corpus =
          clom::generate_corpus(truth, gen_trials, gen_seed, gen_options);
      fs::create_directories(gen_dir);
      for (const clom::GeneratedTrial& trial : corpus) {
        spill((fs::path(gen_dir) / trial.clom_name).string(),
              trial.annotation_text);
        spill((fs::path(gen_dir) / trial.motion_name).string(),
              trial.motion_csv);
        std::cout << trial.clom_name << "\n" << trial.motion_name << "\n";
      }
      return 0;
    }
  } catch (const clom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
