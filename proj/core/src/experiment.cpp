#include "rankfeed/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rankfeed/csv.hpp"
#include "rankfeed/environments.hpp"
#include "rankfeed/plot_data.hpp"
#include "rankfeed/scores.hpp"

namespace rankfeed {

std::vector<GridPoint> expand_grid(const GridSpec& grid) {
  std::vector<GridPoint> points{GridPoint{}};
  auto extend = [&points](const auto& values, auto setter) {
    if (values.empty()) return;
    std::vector<GridPoint> next;
    for (const GridPoint& p : points) {
      for (const auto& v : values) {
        GridPoint q = p;
        setter(q, v);
        next.push_back(q);
      }
    }
    points = std::move(next);
  };
  extend(grid.window_m, [](GridPoint& p, std::size_t v) { p.window_m = v; });
  extend(grid.block_M, [](GridPoint& p, std::size_t v) { p.block_M = v; });
  extend(grid.gamma, [](GridPoint& p, double v) { p.gamma = v; });
  extend(grid.lambda, [](GridPoint& p, double v) { p.lambda = v; });
  return points;
}

LearnerConfig resolve_learner(const LearnerSpec& spec, const GridPoint& point,
                              std::size_t num_actions, std::size_t horizon, double tau,
                              double variation_budget) {
  TheoryInputs in;
  in.feedback = spec.feedback;
  in.horizon = horizon;
  in.num_actions = num_actions;
  in.K = is_bandit(spec.feedback) ? spec.K : num_actions;
  in.variation_budget = spec.variation_budget.value_or(variation_budget);
  in.delta = spec.delta;
  const double lambda =
      point.lambda.value_or(spec.lambda.value_or(1.0 / std::sqrt(static_cast<double>(horizon))));
  in.oracle_L = lambda;
  const Hyperparameters theory = prescribed_hyperparameters(in);

  LearnerConfig c;
  c.feedback = spec.feedback;
  c.K = in.K;
  c.tau = tau;
  c.oracle = OracleConfig::make(spec.oracle, lambda, num_actions);
  c.window_m = point.window_m.value_or(spec.window_m.value_or(theory.window_m));
  c.gamma = is_bandit(spec.feedback) ? point.gamma.value_or(spec.gamma.value_or(theory.gamma))
                                     : 0.0;
  std::size_t block = point.block_M.value_or(spec.block_M.value_or(theory.block_M));
  if (!point.block_M && !spec.block_M) block = std::max(block, 2 * c.window_m);
  c.block_M = block;
  c.validate(num_actions);
  return c;
}

OnlineInstance make_online_instance(const ExperimentConfig& config, std::uint64_t seed) {
  const EnvironmentSpec& e = config.environment;
  const std::size_t T = config.horizon;
  const std::uint64_t env_seed = derive_seed(seed, 0);
  OnlineInstance out;
  std::optional<double> budget;
  if (config.scenario == Scenario::kLlmRouting) {
    const ScoreDataset data = ingest_scores_file(config.scores_path);
    out.sequence = routing_sequence(data, T, env_seed);
  } else {
    switch (e.kind) {
      case EnvironmentKind::kStationary:
        out.sequence = gen_stationary(e.utilities, T);
        break;
      case EnvironmentKind::kBoundedVariation: {
        BoundedVariationSequence b = gen_bounded_variation(T, e.q, env_seed, e.num_actions, e.scale);
        budget = b.budget;
        out.sequence = std::move(b.sequence);
        break;
      }
      case EnvironmentKind::kNoiseShift:
        out.sequence = gen_noise_shift(T, env_seed, e.noise, e.sigma, e.num_actions).sequence;
        break;
      case EnvironmentKind::kTheorem1:
        out.sequence = gen_theorem1_instance(e.instance, T, env_seed);
        break;
      case EnvironmentKind::kTheorem3:
        out.sequence = gen_theorem3_instance(e.instance, (T + 3) / 4);
        out.sequence.resize(T);
        break;
      case EnvironmentKind::kFile:
        out.sequence = read_sequence_file(e.path);
        if (out.sequence.size() < T) throw Error("sequence file is shorter than the horizon");
        out.sequence.resize(T);
        break;
    }
  }
  out.variation_budget = budget.value_or(variation(out.sequence));
  return out;
}

std::string resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* root = std::getenv("RANKFEED_OUTPUT_ROOT"); root && *root) {
    return (std::filesystem::path(root) / config.name).string();
  }
  return config.name;
}

namespace {

std::string join_actions(const std::vector<ActionIndex>& actions) {
  std::string out;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(actions[k]);
  }
  return out;
}

std::vector<ActionIndex> parse_actions(const std::string& cell) {
  std::vector<ActionIndex> out;
  std::istringstream in(cell);
  std::string tok;
  while (in >> tok) {
    const long long v = parse_integer(tok, "action list");
    if (v < 0) throw Error("negative action index in trace");
    out.push_back(static_cast<ActionIndex>(v));
  }
  return out;
}

double sup_variation_tail(const UtilitySequence& seq, std::size_t window) {
  double total = 0.0;
  const std::size_t T = seq.size();
  const std::size_t first = T > window ? T - window + 1 : 1;
  for (std::size_t t = std::max<std::size_t>(first, 1); t < T; ++t) {
    total += distance(seq[t], seq[t - 1], Norm::kLinf);
  }
  return total;
}

EstimationBound run_bound(const LearnerConfig& c, const UtilitySequence& seq, double delta) {
  const std::size_t A = seq.front().size();
  EstimationBoundInputs in;
  in.tau = c.tau;
  in.p = is_bandit(c.feedback)
             ? 1.0 - std::pow(1.0 - c.gamma / static_cast<double>(A), static_cast<double>(c.K))
             : 1.0;
  in.m_prime = static_cast<double>(std::min(c.window_m, seq.size()));
  in.delta = delta;
  in.window_variation = sup_variation_tail(seq, std::min(c.window_m, seq.size()));
  in.num_actions = A;
  if (!(in.p > 0.0)) return EstimationBound{};
  return estimation_error_bound(in);
}

std::string grid_label(std::size_t g) { return "g" + std::to_string(g); }

std::string trace_name(Scenario scenario, std::size_t g, std::uint64_t seed) {
  return to_string(scenario) + "_" + grid_label(g) + "_s" + std::to_string(seed) + ".csv";
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

RunResult run_online(const ExperimentConfig& config, const GridPoint& point, std::size_t g,
                     std::uint64_t seed, const std::filesystem::path& dir) {
  const std::size_t T = config.horizon;
  OnlineInstance inst = make_online_instance(config, seed);
  const std::size_t A = inst.sequence.front().size();
  RunResult r;
  r.grid_index = g;
  r.seed = seed;
  r.learner = resolve_learner(config.learner, point, A, T, config.environment.tau,
                              inst.variation_budget);
  r.realized_variation = variation(inst.sequence);
  r.bound = run_bound(r.learner, inst.sequence, config.learner.delta);

  const RankingBasis basis = config.environment.basis.value_or(natural_basis(r.learner.feedback));
  RankingEnvironment env(inst.sequence, RankingParams{config.environment.tau}, basis);

  r.trace_file = trace_name(config.scenario, g, seed);
  std::ofstream out(dir / r.trace_file);
  if (!out) throw Error("cannot write trace file in '" + dir.string() + "'");
  const std::vector<std::size_t> schedule = checkpoint_schedule(T);
  const std::size_t quarter = (T + 3) / 4;
  const std::size_t half = (T + 1) / 2;
  TraceWriter writer(out, A, r.learner.feedback);
  std::size_t next = 0;
  run_learner_streaming(env, r.learner, T, seed, [&](std::size_t t, const TraceStep& step) {
    bool on_schedule = next < schedule.size() && schedule[next] == t;
    if (on_schedule) ++next;
    writer.observe(t, step, config.trace == TraceDetail::kFull || on_schedule);
    if (t == quarter) r.avg_regret_at_quarter = writer.headline_regret() / static_cast<double>(t);
    if (t == half) r.avg_regret_at_half = writer.headline_regret() / static_cast<double>(t);
  });
  if (!out) throw Error("failed writing trace file '" + r.trace_file + "'");
  r.final_external_regret = writer.regret().external();
  r.final_bandit_regret = writer.regret().bandit();
  r.final_avg_regret = writer.headline_regret() / static_cast<double>(T);
  return r;
}

RunResult run_game_once(const ExperimentConfig& config, const NormalFormGame& game,
                        const GridPoint& point, std::size_t g, std::uint64_t seed,
                        const std::filesystem::path& dir) {
  const std::size_t T = config.horizon;
  const double budget = std::sqrt(static_cast<double>(T));
  std::vector<LearnerConfig> configs;
  for (std::size_t i = 0; i < game.num_players; ++i) {
    configs.push_back(resolve_learner(config.learner, point, game.action_sizes[i], T,
                                      config.environment.tau, budget));
  }
  const GameTrace trace = run_game(game, configs, T, seed);
  RunResult r;
  r.grid_index = g;
  r.seed = seed;
  r.learner = configs.front();
  r.trace_file = trace_name(config.scenario, g, seed);
  std::ofstream out(dir / r.trace_file);
  if (!out) throw Error("cannot write trace file in '" + dir.string() + "'");
  write_game_trace_csv(out, trace);
  if (!out) throw Error("failed writing trace file '" + r.trace_file + "'");

  const GameCheckpoint& last = trace.checkpoints.back();
  r.final_external_regret = *std::max_element(last.external_regret.begin(), last.external_regret.end());
  r.final_bandit_regret = *std::max_element(last.bandit_regret.begin(), last.bandit_regret.end());
  r.final_avg_regret = r.final_external_regret / static_cast<double>(T);
  auto avg_at = [&](std::size_t t) {
    for (const GameCheckpoint& c : trace.checkpoints) {
      if (c.t == t) {
        return *std::max_element(c.external_regret.begin(), c.external_regret.end()) /
               static_cast<double>(t);
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  r.avg_regret_at_quarter = avg_at((T + 3) / 4);
  r.avg_regret_at_half = avg_at((T + 1) / 2);
  r.realized_variation =
      *std::max_element(trace.utility_variation.begin(), trace.utility_variation.end());
  r.exploitability = trace.final_exploitability;
  return r;
}

void write_summary(const std::filesystem::path& dir, const ExperimentSummary& s) {
  std::ofstream out(dir / "summary.csv");
  if (!out) throw Error("cannot write summary.csv");
  out << "run,grid_point,seed,feedback,K,window_m,block_M,gamma,lambda,trace_file,"
         "final_external_regret,final_bandit_regret,final_avg_regret,avg_regret_at_quarter,"
         "avg_regret_at_half,realized_variation,exploitability,bound_applicable,bound_value\n";
  for (std::size_t k = 0; k < s.runs.size(); ++k) {
    const RunResult& r = s.runs[k];
    const LearnerConfig& c = r.learner;
    out << k << ',' << r.grid_index << ',' << r.seed << ',' << to_string(c.feedback) << ','
        << c.K << ',' << c.window_m << ',' << (c.feedback == FeedbackMode::kAvgBandit ? std::to_string(c.block_M) : std::string()) << ','
        << format_double(c.gamma) << ',' << format_double(c.oracle.lambda) << ',' << r.trace_file
        << ',' << format_double(r.final_external_regret) << ','
        << format_double(r.final_bandit_regret) << ',' << format_double(r.final_avg_regret) << ','
        << format_double(r.avg_regret_at_quarter) << ',' << format_double(r.avg_regret_at_half)
        << ',' << format_double(r.realized_variation) << ',' << format_optional(r.exploitability)
        << ',' << (r.bound ? (r.bound->applicable ? "1" : "0") : "") << ','
        << (r.bound && r.bound->applicable ? format_double(r.bound->value) : std::string())
        << '\n';
  }
}

void write_selection(const std::filesystem::path& dir, const ExperimentSummary& s) {
  std::ofstream out(dir / "selection.csv");
  if (!out) throw Error("cannot write selection.csv");
  out << "grid_point,window_m,block_M,gamma,lambda,mean_final_avg_regret,runs,selected\n";
  for (std::size_t g = 0; g < s.grid.size(); ++g) {
    // Report the resolved values of the first run at this grid point.
    const RunResult* first = nullptr;
    std::size_t count = 0;
    for (const RunResult& r : s.runs) {
      if (r.grid_index != g) continue;
      if (!first) first = &r;
      ++count;
    }
    const LearnerConfig& c = first->learner;
    out << g << ',' << c.window_m << ','
        << (c.feedback == FeedbackMode::kAvgBandit ? std::to_string(c.block_M) : std::string())
        << ',' << format_double(c.gamma) << ',' << format_double(c.oracle.lambda) << ','
        << format_double(s.grid_mean_final_avg_regret[g]) << ',' << count << ','
        << (g == s.selected_grid ? 1 : 0) << '\n';
  }
}

void write_metadata(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const std::optional<ScoreDataset>& scores) {
  std::ofstream out(dir / "metadata.txt");
  if (!out) throw Error("cannot write metadata.txt");
  out << "name = " << config.name << '\n';
  out << "scenario = " << to_string(config.scenario) << '\n';
  out << "horizon = " << config.horizon << '\n';
  out << "tau = " << format_double(config.environment.tau) << '\n';
  if (config.scenario == Scenario::kOnline) {
    out << "environment = " << to_string(config.environment.kind) << '\n';
  }
  if (config.scenario == Scenario::kGame) {
    if (config.game.path.empty()) {
      out << "game = random\n";
      out << "game_seed = " << config.game.game_seed << '\n';
    } else {
      out << "game = " << config.game.path << '\n';
    }
  }
  if (scores) {
    out << "scores = " << config.scores_path << '\n';
    out << "score_offset = " << format_double(scores->offset) << '\n';
    out << "score_scale = " << format_double(scores->scale) << '\n';
    out << "score_map = (x - score_offset) / score_scale\n";
    out << "reference_action = " << scores->num_models() << " (synthetic, zero utility)\n";
  }
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config, const std::string& override_dir) {
  config.validate();
  ExperimentSummary summary;
  summary.output_dir = resolve_output_dir(config, override_dir);
  const std::filesystem::path dir(summary.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error("unwritable output dir '" + summary.output_dir + "'");
  }

  std::optional<NormalFormGame> game;
  if (config.scenario == Scenario::kGame) {
    game = config.game.path.empty() ? random_game(config.game.action_sizes, config.game.game_seed)
                                    : read_game_file(config.game.path);
  }
  std::optional<ScoreDataset> scores;
  if (config.scenario == Scenario::kLlmRouting) scores = ingest_scores_file(config.scores_path);

  summary.grid = expand_grid(config.grid);
  struct Job {
    std::size_t grid_index;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t g = 0; g < summary.grid.size(); ++g) {
    for (std::uint64_t s : config.seeds) jobs.push_back({g, s});
  }
  summary.runs.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      try {
        const Job& j = jobs[k];
        const GridPoint& p = summary.grid[j.grid_index];
        summary.runs[k] = game ? run_game_once(config, *game, p, j.grid_index, j.seed, dir)
                               : run_online(config, p, j.grid_index, j.seed, dir);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(config.workers, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  summary.grid_mean_final_avg_regret.assign(summary.grid.size(), 0.0);
  std::vector<std::size_t> counts(summary.grid.size(), 0);
  for (const RunResult& r : summary.runs) {
    summary.grid_mean_final_avg_regret[r.grid_index] += r.final_avg_regret;
    ++counts[r.grid_index];
  }
  for (std::size_t g = 0; g < summary.grid.size(); ++g) {
    summary.grid_mean_final_avg_regret[g] /= static_cast<double>(counts[g]);
    if (summary.grid_mean_final_avg_regret[g] <
        summary.grid_mean_final_avg_regret[summary.selected_grid]) {
      summary.selected_grid = g;
    }
  }

  write_summary(dir, summary);
  write_selection(dir, summary);
  write_metadata(dir, config, scores);
  for (std::size_t g = 0; g < summary.grid.size(); ++g) {
    std::vector<std::string> paths;
    for (const RunResult& r : summary.runs) {
      if (r.grid_index == g) paths.push_back((dir / r.trace_file).string());
    }
    emit_plot_data(paths, (dir / ("plot_" + grid_label(g) + ".csv")).string());
  }
  return summary;
}

TraceWriter::TraceWriter(std::ostream& out, std::size_t num_actions, FeedbackMode mode)
    : out_(&out), num_actions_(num_actions), mode_(mode), regret_(num_actions) {
  out << "t,proposal,ranking,realized,expected,external_regret,bandit_regret,avg_regret,variation";
  for (const char* prefix : {"pi_", "est_", "u_"}) {
    for (std::size_t a = 0; a < num_actions; ++a) out << ',' << prefix << a;
  }
  out << '\n';
}

double TraceWriter::headline_regret() const {
  return is_bandit(mode_) ? regret_.bandit() : regret_.external();
}

void TraceWriter::observe(std::size_t t, const TraceStep& step, bool emit) {
  regret_.add(step.utility, step.strategy, step.proposal);
  if (!previous_.empty()) variation_ += distance(step.utility, previous_);
  previous_ = step.utility;
  if (!emit) return;
  std::ostream& out = *out_;
  out << t << ',' << join_actions(step.proposal.entries) << ','
      << join_actions(step.ranking.order) << ',' << format_double(step.realized) << ','
      << format_double(step.expected) << ',' << format_double(regret_.external()) << ','
      << format_double(regret_.bandit()) << ','
      << format_double(headline_regret() / static_cast<double>(t)) << ','
      << format_double(variation_) << ',' << join_doubles(step.strategy) << ','
      << join_doubles(step.estimate) << ',' << join_doubles(step.utility) << '\n';
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!read_csv_line(in, line)) throw Error("trace file is empty");
  const std::vector<std::string> header = split_csv_line(line);
  constexpr std::size_t kFixed = 9;
  if (header.size() < kFixed || (header.size() - kFixed) % 3 != 0 || trim(header[0]) != "t") {
    throw Error("unexpected trace header");
  }
  const std::size_t A = (header.size() - kFixed) / 3;
  std::vector<TraceRow> rows;
  while (read_csv_line(in, line)) {
    const std::vector<std::string> c = split_csv_line(line);
    if (c.size() != header.size()) throw Error("ragged row in trace file");
    TraceRow r;
    r.t = static_cast<std::size_t>(parse_integer(c[0], "trace t"));
    r.step.proposal.entries = parse_actions(c[1]);
    r.step.ranking.order = parse_actions(c[2]);
    r.step.realized = parse_double(c[3], "trace");
    r.step.expected = parse_double(c[4], "trace");
    r.external_regret = parse_double(c[5], "trace");
    r.bandit_regret = parse_double(c[6], "trace");
    r.avg_regret = parse_double(c[7], "trace");
    r.variation = parse_double(c[8], "trace");
    auto block = [&](std::size_t offset) {
      std::vector<double> v(A);
      for (std::size_t a = 0; a < A; ++a) v[a] = parse_double(c[kFixed + offset * A + a], "trace");
      return v;
    };
    r.step.strategy = block(0);
    r.step.estimate = block(1);
    r.step.utility = block(2);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<TraceRow> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  return read_trace_csv(in);
}

void write_game_trace_csv(std::ostream& out, const GameTrace& trace) {
  const std::size_t N = trace.final_external_regret.size();
  out << "t,exploitability,avg_regret";
  for (std::size_t i = 0; i < N; ++i) out << ",regret_" << i;
  for (std::size_t i = 0; i < N; ++i) out << ",bandit_regret_" << i;
  out << '\n';
  for (const GameCheckpoint& c : trace.checkpoints) {
    const double top = *std::max_element(c.external_regret.begin(), c.external_regret.end());
    out << c.t << ',' << format_double(c.exploitability) << ','
        << format_double(top / static_cast<double>(c.t)) << ',' << join_doubles(c.external_regret)
        << ',' << join_doubles(c.bandit_regret) << '\n';
  }
}

}  // namespace rankfeed
