#ifndef RANKFEED_EXPERIMENT_HPP_
#define RANKFEED_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankfeed/config.hpp"
#include "rankfeed/estimation.hpp"
#include "rankfeed/games.hpp"
#include "rankfeed/metrics.hpp"
#include "rankfeed/learners.hpp"

namespace rankfeed {

struct GridPoint {
  std::optional<std::size_t> window_m;
  std::optional<std::size_t> block_M;
  std::optional<double> gamma;
  std::optional<double> lambda;
};

// Cartesian product of the grid lists; a single empty point without a grid.
std::vector<GridPoint> expand_grid(const GridSpec& grid);

// Fills unset hyperparameters from the theory prescriptions.
LearnerConfig resolve_learner(const LearnerSpec& spec, const GridPoint& point,
                              std::size_t num_actions, std::size_t horizon, double tau,
                              double variation_budget);

// Environment sequence for one online run (llm_routing needs the dataset).
struct OnlineInstance {
  UtilitySequence sequence;
  double variation_budget = 0.0;  // prescribed budget, or the realized variation
};
OnlineInstance make_online_instance(const ExperimentConfig& config, std::uint64_t seed);

struct RunResult {
  std::size_t grid_index = 0;
  std::uint64_t seed = 0;
  std::string trace_file;
  LearnerConfig learner;
  double final_external_regret = 0.0;
  double final_bandit_regret = 0.0;
  double final_avg_regret = 0.0;
  double avg_regret_at_quarter = 0.0;
  double avg_regret_at_half = 0.0;
  double realized_variation = 0.0;
  std::optional<double> exploitability;  // game scenario
  std::optional<EstimationBound> bound;  // online scenarios
};

struct ExperimentSummary {
  std::string output_dir;
  std::vector<GridPoint> grid;
  std::vector<RunResult> runs;  // grid-major, then seed order
  std::vector<double> grid_mean_final_avg_regret;
  std::size_t selected_grid = 0;
};

// Explicit override, else config.output_dir, else $RANKFEED_OUTPUT_ROOT/<name>,
// else ./<name>.
std::string resolve_output_dir(const ExperimentConfig& config, const std::string& override_dir);

// Runs every (grid point, seed) pair on `config.workers` threads and writes
// trace CSVs, summary.csv, selection.csv, plot_g<k>.csv and metadata.txt.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::string& override_dir = "");

// Online trace files. Columns:
//   t,proposal,ranking,realized,expected,external_regret,bandit_regret,
//   avg_regret,variation,pi_0..,est_0..,u_0..
// proposal and ranking cells hold space-separated action indices.
struct TraceRow {
  std::size_t t = 0;
  TraceStep step;
  double external_regret = 0.0;
  double bandit_regret = 0.0;
  double avg_regret = 0.0;
  double variation = 0.0;
};

class TraceWriter {
 public:
  TraceWriter(std::ostream& out, std::size_t num_actions, FeedbackMode mode);
  // Updates the running metrics; writes a row when `emit` is true.
  void observe(std::size_t t, const TraceStep& step, bool emit);
  const RegretAccumulator& regret() const { return regret_; }
  double variation() const { return variation_; }
  double headline_regret() const;

 private:
  std::ostream* out_;
  std::size_t num_actions_;
  FeedbackMode mode_;
  RegretAccumulator regret_;
  double variation_ = 0.0;
  UtilityVector previous_;
};

std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_file(const std::string& path);

// Game trace files: t,exploitability,avg_regret,regret_0..,bandit_regret_0..
void write_game_trace_csv(std::ostream& out, const GameTrace& trace);

}  // namespace rankfeed

#endif  // RANKFEED_EXPERIMENT_HPP_
