#include "rankfeed/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "rankfeed/csv.hpp"

namespace rankfeed {

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kOnline: return "online";
    case Scenario::kGame: return "game";
    case Scenario::kLlmRouting: return "llm_routing";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "online") return Scenario::kOnline;
  if (name == "game") return Scenario::kGame;
  if (name == "llm_routing") return Scenario::kLlmRouting;
  throw Error("unknown scenario '" + name + "'");
}

std::string to_string(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::kStationary: return "stationary";
    case EnvironmentKind::kBoundedVariation: return "bounded_variation";
    case EnvironmentKind::kNoiseShift: return "noise_shift";
    case EnvironmentKind::kTheorem1: return "theorem1";
    case EnvironmentKind::kTheorem3: return "theorem3";
    case EnvironmentKind::kFile: return "file";
  }
  return "unknown";
}

EnvironmentKind parse_environment_kind(const std::string& name) {
  if (name == "stationary") return EnvironmentKind::kStationary;
  if (name == "bounded_variation") return EnvironmentKind::kBoundedVariation;
  if (name == "noise_shift") return EnvironmentKind::kNoiseShift;
  if (name == "theorem1") return EnvironmentKind::kTheorem1;
  if (name == "theorem3") return EnvironmentKind::kTheorem3;
  if (name == "file") return EnvironmentKind::kFile;
  throw Error("unknown environment kind '" + name + "'");
}

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"name", "scenario", "horizon", "seeds", "workers", "output_dir", "trace"}},
      {"environment",
       {"kind", "num_actions", "utilities", "q", "scale", "noise", "sigma", "instance", "path",
        "tau", "basis"}},
      {"learner",
       {"feedback", "K", "gamma", "window_m", "block_M", "oracle", "lambda", "delta",
        "variation_budget"}},
      {"game", {"path", "action_sizes", "game_seed"}},
      {"scores", {"path"}},
      {"grid", {"window_m", "block_M", "gamma", "lambda"}},
  };
  return keys;
}

std::vector<std::string> tokens(const std::string& value) {
  std::vector<std::string> out;
  std::string normalized = value;
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(normalized);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::size_t to_count(const std::string& text, const std::string& key) {
  const long long v = parse_integer(text, key);
  if (v < 0) throw Error("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> count_list(const std::string& text, const std::string& key) {
  std::vector<std::size_t> out;
  for (const std::string& t : tokens(text)) out.push_back(to_count(t, key));
  if (out.empty()) throw Error("'" + key + "' list is empty");
  return out;
}

std::vector<double> double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const std::string& t : tokens(text)) out.push_back(parse_double(t, key));
  if (out.empty()) throw Error("'" + key + "' list is empty");
  return out;
}

bool is_theory(const std::string& text) { return trim(text) == "theory"; }

}  // namespace

void ExperimentConfig::validate() const {
  if (horizon < 1) throw Error("horizon must be at least 1");
  if (seeds.empty()) throw Error("seeds must be nonempty");
  if (workers < 1) throw Error("workers must be at least 1");
  RankingParams{environment.tau}.validate();
  if (learner.K < 1) throw Error("K must be at least 1");
  if (!(learner.delta > 0.0 && learner.delta < 1.0)) throw Error("delta must lie in (0, 1)");
  if (scenario == Scenario::kOnline) {
    if (environment.num_actions < 2) throw Error("num_actions must be at least 2");
    if (environment.kind == EnvironmentKind::kStationary &&
        environment.utilities.size() != environment.num_actions) {
      throw Error("stationary utilities must list num_actions values");
    }
    if (environment.kind == EnvironmentKind::kFile && environment.path.empty()) {
      throw Error("file environment needs a path");
    }
  }
  if (scenario == Scenario::kLlmRouting && scores_path.empty()) {
    throw Error("llm_routing needs [scores] path");
  }
  if (scenario == Scenario::kGame && game.path.empty() && game.action_sizes.size() < 1) {
    throw Error("random game needs action_sizes");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(std::string("malformed config: ") + e.message() + " at line " +
                std::to_string(e.line()));
  }
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    auto it = keys.find(section);
    if (it == keys.end()) throw Error("unknown config section [" + section + "]");
    if (!body.data().empty() && body.empty()) {
      throw Error("config key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw Error("unknown config key '" + section + "." + key + "'");
      if (!value.empty()) throw Error("nested config key under '" + section + "." + key + "'");
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
      std::string text = trim(*v);
      if (!text.empty()) return text;
    }
    return std::nullopt;
  };

  ExperimentConfig c;
  if (auto v = get("experiment.name")) c.name = *v;
  if (auto v = get("experiment.scenario")) c.scenario = parse_scenario(*v);
  if (auto v = get("experiment.horizon")) c.horizon = to_count(*v, "horizon");
  if (auto v = get("experiment.seeds")) {
    c.seeds.clear();
    for (std::size_t s : count_list(*v, "seeds")) c.seeds.push_back(s);
  }
  if (auto v = get("experiment.workers")) c.workers = to_count(*v, "workers");
  if (auto v = get("experiment.output_dir")) c.output_dir = *v;
  if (auto v = get("experiment.trace")) {
    if (*v == "full") {
      c.trace = TraceDetail::kFull;
    } else if (*v == "checkpoints") {
      c.trace = TraceDetail::kCheckpoints;
    } else {
      throw Error("trace must be 'full' or 'checkpoints'");
    }
  }

  EnvironmentSpec& e = c.environment;
  if (auto v = get("environment.kind")) e.kind = parse_environment_kind(*v);
  if (auto v = get("environment.num_actions")) e.num_actions = to_count(*v, "num_actions");
  if (auto v = get("environment.utilities")) {
    e.utilities = double_list(*v, "utilities");
    if (!get("environment.num_actions")) e.num_actions = e.utilities.size();
  }
  if (auto v = get("environment.q")) e.q = parse_double(*v, "q");
  if (auto v = get("environment.scale")) e.scale = parse_double(*v, "scale");
  if (auto v = get("environment.noise")) e.noise = parse_noise_kind(*v);
  if (auto v = get("environment.sigma")) e.sigma = parse_double(*v, "sigma");
  if (auto v = get("environment.instance")) {
    e.instance = static_cast<int>(parse_integer(*v, "instance"));
    if (e.instance != 1 && e.instance != 2) throw Error("instance must be 1 or 2");
  }
  if (auto v = get("environment.path")) e.path = *v;
  if (auto v = get("environment.tau")) e.tau = parse_double(*v, "tau");
  if (auto v = get("environment.basis")) {
    if (*v == "auto") {
      e.basis.reset();
    } else {
      e.basis = parse_ranking_basis(*v);
    }
  }

  LearnerSpec& l = c.learner;
  if (auto v = get("learner.feedback")) l.feedback = parse_feedback_mode(*v);
  if (auto v = get("learner.K")) l.K = to_count(*v, "K");
  if (auto v = get("learner.gamma"); v && !is_theory(*v)) l.gamma = parse_double(*v, "gamma");
  if (auto v = get("learner.window_m"); v && !is_theory(*v)) l.window_m = to_count(*v, "window_m");
  if (auto v = get("learner.block_M"); v && !is_theory(*v)) l.block_M = to_count(*v, "block_M");
  if (auto v = get("learner.oracle")) l.oracle = parse_oracle_kind(*v);
  if (auto v = get("learner.lambda"); v && !is_theory(*v)) l.lambda = parse_double(*v, "lambda");
  if (auto v = get("learner.delta")) l.delta = parse_double(*v, "delta");
  if (auto v = get("learner.variation_budget"); v && *v != "measured") {
    l.variation_budget = parse_double(*v, "variation_budget");
  }

  if (auto v = get("game.path")) c.game.path = *v;
  if (auto v = get("game.action_sizes")) c.game.action_sizes = count_list(*v, "action_sizes");
  if (auto v = get("game.game_seed")) c.game.game_seed = to_count(*v, "game_seed");

  if (auto v = get("scores.path")) c.scores_path = *v;

  if (auto v = get("grid.window_m")) c.grid.window_m = count_list(*v, "grid.window_m");
  if (auto v = get("grid.block_M")) c.grid.block_M = count_list(*v, "grid.block_M");
  if (auto v = get("grid.gamma")) c.grid.gamma = double_list(*v, "grid.gamma");
  if (auto v = get("grid.lambda")) c.grid.lambda = double_list(*v, "grid.lambda");

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  return parse_config(in);
}

void write_default_config(std::ostream& out) {
  out << "; rankfeed experiment config. Values shown are the defaults.\n"
         "[experiment]\n"
         "name = experiment\n"
         "; online | game | llm_routing\n"
         "scenario = online\n"
         "horizon = 1\n"
         "; space or comma separated\n"
         "seeds = 1\n"
         "workers = 1\n"
         "; empty: $RANKFEED_OUTPUT_ROOT/<name>, else ./<name>\n"
         "output_dir =\n"
         "; full | checkpoints\n"
         "trace = full\n"
         "\n"
         "[environment]\n"
         "; stationary | bounded_variation | noise_shift | theorem1 | theorem3 | file\n"
         "kind = stationary\n"
         "num_actions = 2\n"
         "; stationary vector with the reference (last) entry 0\n"
         "utilities = 0.5 0\n"
         "q = 0.5\n"
         "scale = 1\n"
         "; uniform | gaussian | gamma\n"
         "noise = gaussian\n"
         "sigma = 0.3\n"
         "instance = 1\n"
         "path =\n"
         "tau = 1\n"
         "; auto | instantaneous | time_average | empirical_mean\n"
         "basis = auto\n"
         "\n"
         "[learner]\n"
         "; inst_full | inst_bandit | avg_full | avg_bandit\n"
         "feedback = inst_full\n"
         "; forced to |A| in full-information modes\n"
         "K = 2\n"
         "gamma = theory\n"
         "window_m = theory\n"
         "block_M = theory\n"
         "; ftrl_entropy | ftrl_l2 | hedge | pgd\n"
         "oracle = hedge\n"
         "; theory means T^(-1/2)\n"
         "lambda = theory\n"
         "delta = 0.05\n"
         "variation_budget = measured\n"
         "\n"
         "[game]\n"
         "; empty path: random game\n"
         "path =\n"
         "action_sizes = 2 2\n"
         "game_seed = 1\n"
         "\n"
         "[scores]\n"
         "path =\n"
         "\n"
         "[grid]\n"
         "; window_m = 50000 100000 150000\n"
         "; block_M = 100000\n"
         "; gamma = 0.1 0.05 0.01\n"
         "; lambda = 0.01\n";
}

}  // namespace rankfeed
