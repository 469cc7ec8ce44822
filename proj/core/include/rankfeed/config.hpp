#ifndef RANKFEED_CONFIG_HPP_
#define RANKFEED_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankfeed/environments.hpp"
#include "rankfeed/learners.hpp"
#include "rankfeed/oracles.hpp"

namespace rankfeed {

enum class Scenario { kOnline, kGame, kLlmRouting };

std::string to_string(Scenario scenario);
Scenario parse_scenario(const std::string& name);

enum class EnvironmentKind {
  kStationary,
  kBoundedVariation,
  kNoiseShift,
  kTheorem1,
  kTheorem3,
  kFile,
};

std::string to_string(EnvironmentKind kind);
EnvironmentKind parse_environment_kind(const std::string& name);

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::kStationary;
  std::size_t num_actions = 2;
  UtilityVector utilities{0.5, 0.0};  // stationary
  double q = 0.5;           // bounded_variation
  double scale = 1.0;       // bounded_variation: budget C
  NoiseKind noise = NoiseKind::kGaussian;
  double sigma = 0.3;
  int instance = 1;  // theorem1 / theorem3
  std::string path;  // file
  double tau = 1.0;
  std::optional<RankingBasis> basis;  // unset: the learner's natural basis
};

struct GameSpec {
  std::string path;  // empty: random game
  std::vector<std::size_t> action_sizes{2, 2};
  std::uint64_t game_seed = 1;
};

// Unset optionals mean "theory": filled from prescribed_hyperparameters.
struct LearnerSpec {
  FeedbackMode feedback = FeedbackMode::kInstFull;
  std::size_t K = 2;
  std::optional<double> gamma;
  std::optional<std::size_t> window_m;
  std::optional<std::size_t> block_M;
  OracleKind oracle = OracleKind::kHedge;
  std::optional<double> lambda;
  double delta = 0.05;
  std::optional<double> variation_budget;  // unset: measured per run
};

struct GridSpec {
  std::vector<std::size_t> window_m;
  std::vector<std::size_t> block_M;
  std::vector<double> gamma;
  std::vector<double> lambda;

  bool empty() const {
    return window_m.empty() && block_M.empty() && gamma.empty() && lambda.empty();
  }
};

enum class TraceDetail { kFull, kCheckpoints };

struct ExperimentConfig {
  std::string name = "experiment";
  Scenario scenario = Scenario::kOnline;
  std::size_t horizon = 1;
  std::vector<std::uint64_t> seeds{1};
  std::size_t workers = 1;
  std::string output_dir;
  TraceDetail trace = TraceDetail::kFull;
  EnvironmentSpec environment;
  GameSpec game;
  std::string scores_path;
  LearnerSpec learner;
  GridSpec grid;

  void validate() const;
};

// INI text: sections [experiment], [environment], [learner], [game],
// [scores], [grid]. Unknown sections and keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Writes every recognised key with its default value.
void write_default_config(std::ostream& out);

}  // namespace rankfeed

#endif  // RANKFEED_CONFIG_HPP_
