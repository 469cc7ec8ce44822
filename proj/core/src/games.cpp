#include "rankfeed/games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "rankfeed/csv.hpp"
#include "rankfeed/metrics.hpp"
#include "rankfeed/ranking_model.hpp"
#include "rankfeed/rng.hpp"

namespace rankfeed {

std::size_t NormalFormGame::num_joint() const {
  std::size_t n = 1;
  for (std::size_t s : action_sizes) n *= s;
  return n;
}

std::vector<std::size_t> NormalFormGame::strides() const {
  std::vector<std::size_t> out(action_sizes.size(), 1);
  for (std::size_t i = action_sizes.size(); i-- > 1;) out[i - 1] = out[i] * action_sizes[i];
  return out;
}

std::size_t NormalFormGame::joint_index(const std::vector<ActionIndex>& actions) const {
  if (actions.size() != num_players) throw Error("joint action has the wrong length");
  std::size_t index = 0;
  for (std::size_t i = 0; i < num_players; ++i) {
    if (actions[i] >= action_sizes[i]) throw Error("joint action out of range");
    index = index * action_sizes[i] + actions[i];
  }
  return index;
}

std::vector<ActionIndex> NormalFormGame::joint_actions(std::size_t index) const {
  std::vector<ActionIndex> out(num_players);
  for (std::size_t i = num_players; i-- > 0;) {
    out[i] = index % action_sizes[i];
    index /= action_sizes[i];
  }
  return out;
}

void NormalFormGame::validate() const {
  if (num_players < 1) throw Error("game needs at least one player");
  if (action_sizes.size() != num_players) throw Error("game action_sizes length differs from N");
  for (std::size_t s : action_sizes) {
    if (s < 2) throw Error("every player needs at least two actions");
  }
  if (num_joint() > 1'000'000) throw Error("game exceeds 10^6 joint actions");
  if (utilities.size() != num_players) throw Error("game needs one utility tensor per player");
  for (const auto& u : utilities) {
    if (u.size() != num_joint()) throw Error("utility tensor shape mismatch");
    for (double x : u) {
      if (!std::isfinite(x) || x < -1.0 || x > 1.0) throw Error("game utility outside [-1, 1]");
    }
  }
}

NormalFormGame random_game(const std::vector<std::size_t>& action_sizes, std::uint64_t seed) {
  NormalFormGame g;
  g.num_players = action_sizes.size();
  g.action_sizes = action_sizes;
  Rng rng(seed);
  g.utilities.assign(g.num_players, std::vector<double>(g.num_joint()));
  for (auto& u : g.utilities) {
    for (double& x : u) x = rng.uniform(-1.0, 1.0);
  }
  g.validate();
  return g;
}

NormalFormGame matching_pennies() {
  NormalFormGame g;
  g.num_players = 2;
  g.action_sizes = {2, 2};
  g.utilities = {{1.0, -1.0, -1.0, 1.0}, {-1.0, 1.0, 1.0, -1.0}};
  return g;
}

namespace {

void check_profile(const NormalFormGame& game, const StrategyProfile& profile) {
  if (profile.size() != game.num_players) throw Error("profile has the wrong player count");
  for (std::size_t i = 0; i < game.num_players; ++i) {
    if (profile[i].size() != game.action_sizes[i]) throw Error("strategy has the wrong length");
  }
}

// Calls f(joint index, actions) for every joint action in index order.
template <typename F>
void for_each_joint(const NormalFormGame& game, F&& f) {
  std::vector<ActionIndex> actions(game.num_players, 0);
  const std::size_t total = game.num_joint();
  for (std::size_t index = 0; index < total; ++index) {
    f(index, actions);
    for (std::size_t i = game.num_players; i-- > 0;) {
      if (++actions[i] < game.action_sizes[i]) break;
      actions[i] = 0;
    }
  }
}

}  // namespace

UtilityVector expected_utility_vector(const NormalFormGame& game, std::size_t player,
                                      const StrategyProfile& profile) {
  if (player >= game.num_players) throw Error("player index out of range");
  check_profile(game, profile);
  UtilityVector u(game.action_sizes[player], 0.0);
  const std::vector<double>& U = game.utilities[player];
  for_each_joint(game, [&](std::size_t index, const std::vector<ActionIndex>& a) {
    double weight = 1.0;
    for (std::size_t j = 0; j < game.num_players; ++j) {
      if (j != player) weight *= profile[j][a[j]];
    }
    u[a[player]] += weight * U[index];
  });
  return u;
}

UtilityVector bandit_game_feedback(const NormalFormGame& game, std::size_t player,
                                   const std::vector<Proposal>& proposals) {
  if (player >= game.num_players) throw Error("player index out of range");
  if (proposals.size() != game.num_players) throw Error("need one proposal per player");
  std::size_t samples = 0;
  bool first = true;
  for (std::size_t j = 0; j < game.num_players; ++j) {
    if (j == player) continue;
    if (first) {
      samples = proposals[j].size();
      first = false;
    } else if (proposals[j].size() != samples) {
      throw Error("opponent proposals must have equal sizes");
    }
  }
  if (game.num_players == 1) samples = 1;
  if (samples == 0) throw Error("opponent proposals are empty");

  const std::vector<std::size_t> stride = game.strides();
  const std::vector<double>& U = game.utilities[player];
  UtilityVector u(game.action_sizes[player], 0.0);
  for (std::size_t k = 0; k < samples; ++k) {
    std::size_t base = 0;
    for (std::size_t j = 0; j < game.num_players; ++j) {
      if (j == player) continue;
      const ActionIndex a = proposals[j].entries[k];
      if (a >= game.action_sizes[j]) throw Error("opponent proposal out of range");
      base += a * stride[j];
    }
    for (std::size_t ai = 0; ai < u.size(); ++ai) u[ai] += U[base + ai * stride[player]];
  }
  for (double& x : u) x /= static_cast<double>(samples);
  return u;
}

JointStrategy product_joint(const NormalFormGame& game, const StrategyProfile& profile) {
  check_profile(game, profile);
  JointStrategy out;
  out.probabilities.resize(game.num_joint());
  for_each_joint(game, [&](std::size_t index, const std::vector<ActionIndex>& a) {
    double p = 1.0;
    for (std::size_t j = 0; j < game.num_players; ++j) p *= profile[j][a[j]];
    out.probabilities[index] = p;
  });
  return out;
}

JointAverager::JointAverager(const NormalFormGame& game)
    : game_(&game), sum_(game.num_joint(), 0.0) {}

void JointAverager::add(const StrategyProfile& profile) {
  const JointStrategy j = product_joint(*game_, profile);
  for (std::size_t k = 0; k < sum_.size(); ++k) sum_[k] += j.probabilities[k];
  ++count_;
}

JointStrategy JointAverager::average() const {
  JointStrategy out;
  out.probabilities = sum_;
  if (count_ > 0) {
    for (double& p : out.probabilities) p /= static_cast<double>(count_);
  }
  return out;
}

double cce_exploitability(const NormalFormGame& game, const JointStrategy& joint) {
  if (joint.probabilities.size() != game.num_joint()) throw Error("joint strategy shape mismatch");
  const std::vector<std::size_t> stride = game.strides();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < game.num_players; ++i) {
    const std::vector<double>& U = game.utilities[i];
    // deviation[d] = sum_a pi(a) U_i(d, a_-i); baseline = sum_a pi(a) U_i(a).
    std::vector<double> deviation(game.action_sizes[i], 0.0);
    double baseline = 0.0;
    for_each_joint(game, [&](std::size_t index, const std::vector<ActionIndex>& a) {
      const double p = joint.probabilities[index];
      if (p == 0.0) return;
      baseline += p * U[index];
      const std::size_t base = index - a[i] * stride[i];
      for (std::size_t d = 0; d < deviation.size(); ++d) {
        deviation[d] += p * U[base + d * stride[i]];
      }
    });
    const double top = *std::max_element(deviation.begin(), deviation.end());
    best = std::max(best, top - baseline);
  }
  return best;
}

GameTrace run_game(const NormalFormGame& game, const std::vector<LearnerConfig>& configs,
                   std::size_t horizon, std::uint64_t seed) {
  game.validate();
  const std::size_t N = game.num_players;
  if (configs.size() != N) throw Error("need one learner config per player");
  for (std::size_t i = 1; i < N; ++i) {
    if (configs[i].feedback != configs[0].feedback) {
      throw Error("all players must share the feedback mode");
    }
    if (configs[i].tau != configs[0].tau) throw Error("all players must share tau");
  }
  const FeedbackMode mode = configs[0].feedback;
  const RankingParams params{configs[0].tau};

  std::vector<Learner> learners;
  std::vector<BasisTracker> trackers;
  std::vector<RegretAccumulator> regret;
  std::vector<Rng> proposal_rng, ranking_rng;
  for (std::size_t i = 0; i < N; ++i) {
    learners.emplace_back(game.action_sizes[i], configs[i]);
    trackers.emplace_back(game.action_sizes[i], natural_basis(mode));
    regret.emplace_back(game.action_sizes[i]);
    proposal_rng.emplace_back(derive_seed(seed, 10 + 2 * i));
    ranking_rng.emplace_back(derive_seed(seed, 11 + 2 * i));
  }

  GameTrace trace;
  trace.utility_variation.assign(N, 0.0);
  std::size_t max_actions = 0;
  double joint_count = 1.0;
  for (std::size_t s : game.action_sizes) {
    max_actions = std::max(max_actions, s);
    joint_count *= static_cast<double>(s);
  }
  trace.variation_factor = std::sqrt(static_cast<double>(max_actions)) * joint_count;

  const std::vector<std::size_t> schedule = checkpoint_schedule(horizon);
  std::size_t next_checkpoint = 0;
  JointAverager averager(game);
  StrategyProfile previous_profile;
  std::vector<UtilityVector> previous_utility(N);

  for (std::size_t t = 1; t <= horizon; ++t) {
    StrategyProfile profile(N);
    std::vector<Proposal> proposals(N);
    for (std::size_t i = 0; i < N; ++i) {
      profile[i] = learners[i].strategy();
      proposals[i] = learners[i].propose(proposal_rng[i]);
    }
    averager.add(profile);
    for (std::size_t i = 0; i < N; ++i) {
      const UtilityVector u = expected_utility_vector(game, i, profile);
      const UtilityVector feedback =
          is_bandit(mode) ? bandit_game_feedback(game, i, proposals) : u;
      const UtilityVector& r = trackers[i].advance(feedback, proposals[i].entries);
      const Ranking sigma = sample_ranking(r, params, proposals[i], ranking_rng[i]);
      learners[i].update(sigma);
      regret[i].add(u, profile[i], proposals[i]);
      if (t > 1) {
        trace.utility_variation[i] += distance(u, previous_utility[i]);
        trace.strategy_variation += distance(profile[i], previous_profile[i]);
      }
      previous_utility[i] = u;
    }
    previous_profile = std::move(profile);

    if (next_checkpoint < schedule.size() && schedule[next_checkpoint] == t) {
      GameCheckpoint c;
      c.t = t;
      c.exploitability = cce_exploitability(game, averager.average());
      for (const RegretAccumulator& acc : regret) {
        c.external_regret.push_back(acc.external());
        c.bandit_regret.push_back(is_bandit(mode) ? acc.bandit() : acc.external());
      }
      trace.checkpoints.push_back(std::move(c));
      ++next_checkpoint;
    }
  }
  trace.average_joint = averager.average();
  for (const RegretAccumulator& acc : regret) trace.final_external_regret.push_back(acc.external());
  trace.final_exploitability =
      horizon == 0 ? 0.0 : cce_exploitability(game, trace.average_joint);
  return trace;
}

void write_game(std::ostream& out, const NormalFormGame& game) {
  out << "N = " << game.num_players << '\n';
  out << "action_sizes =";
  for (std::size_t s : game.action_sizes) out << ' ' << s;
  out << '\n';
  for (std::size_t i = 0; i < game.utilities.size(); ++i) {
    out << 'U' << i << " =";
    for (double x : game.utilities[i]) out << ' ' << format_double(x);
    out << '\n';
  }
}

NormalFormGame read_game(std::istream& in) {
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw Error("game file line without '=': " + text);
    const std::string key = trim(text.substr(0, eq));
    if (!fields.emplace(key, trim(text.substr(eq + 1))).second) {
      throw Error("duplicate game file key '" + key + "'");
    }
  }
  auto take = [&](const std::string& key) {
    auto it = fields.find(key);
    if (it == fields.end()) throw Error("game file is missing '" + key + "'");
    std::string value = it->second;
    fields.erase(it);
    return value;
  };
  NormalFormGame g;
  const long long n = parse_integer(take("N"), "game N");
  if (n < 1) throw Error("game N must be positive");
  g.num_players = static_cast<std::size_t>(n);
  {
    std::istringstream sizes(take("action_sizes"));
    std::string tok;
    while (sizes >> tok) {
      const long long s = parse_integer(tok, "action_sizes");
      if (s < 1) throw Error("action sizes must be positive");
      g.action_sizes.push_back(static_cast<std::size_t>(s));
    }
  }
  for (std::size_t i = 0; i < g.num_players; ++i) {
    std::istringstream values(take("U" + std::to_string(i)));
    std::vector<double> u;
    std::string tok;
    while (values >> tok) u.push_back(parse_double(tok, "U" + std::to_string(i)));
    g.utilities.push_back(std::move(u));
  }
  if (!fields.empty()) throw Error("unknown game file key '" + fields.begin()->first + "'");
  g.validate();
  return g;
}

NormalFormGame read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  return read_game(in);
}

}  // namespace rankfeed
