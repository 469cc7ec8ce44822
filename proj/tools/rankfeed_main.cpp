#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rankfeed/config.hpp"
#include "rankfeed/csv.hpp"
#include "rankfeed/estimation.hpp"
#include "rankfeed/experiment.hpp"
#include "rankfeed/plot_data.hpp"
#include "rankfeed/scores.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& output,
                std::size_t workers, const std::vector<std::uint64_t>& seeds) {
  rankfeed::ExperimentConfig config = rankfeed::load_config(config_path);
  if (workers > 0) config.workers = workers;
  if (!seeds.empty()) config.seeds = seeds;
  const rankfeed::ExperimentSummary summary = rankfeed::run_experiment(config, output);
  std::cout << "runs: " << summary.runs.size() << "\n"
            << "output: " << summary.output_dir << "\n"
            << "selected grid point: " << summary.selected_grid << " (mean final average regret "
            << rankfeed::format_double(summary.grid_mean_final_avg_regret[summary.selected_grid])
            << ")\n";
  return 0;
}

int ingest_command(const std::string& path, const std::string& output) {
  const rankfeed::ScoreDataset data = rankfeed::ingest_scores_file(path);
  std::cout << "models: " << data.num_models() << " (+1 zero reference)\n"
            << "rows: " << data.utilities.size() << "\n"
            << "offset: " << rankfeed::format_double(data.offset) << "\n"
            << "scale: " << rankfeed::format_double(data.scale) << "\n";
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw rankfeed::Error("cannot write '" + output + "'");
    rankfeed::write_scores(out, data);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning from ranking feedback: simulations and experiments"};
  app.require_subcommand(1);

  std::string config_path, output;
  std::size_t workers = 0;
  std::vector<std::uint64_t> seeds;
  bool print_defaults = false;
  auto* run = app.add_subcommand("run", "Run an experiment described by an INI config");
  run->add_option("-c,--config", config_path, "Config file");
  run->add_option("-o,--output", output, "Output directory (overrides the config)");
  run->add_option("-w,--workers", workers, "Worker threads");
  run->add_option("-s,--seeds", seeds, "Seed list (overrides the config)");
  run->add_flag("--print-defaults", print_defaults, "Print a config with every default and exit");

  std::string scores_path, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Rescale a model score CSV into utilities");
  ingest->add_option("scores", scores_path, "Score CSV (step,model_1,...)")->required();
  ingest->add_option("-o,--output", ingest_out, "Write the rescaled dataset here");

  std::vector<std::string> traces;
  std::string plot_out;
  auto* plot = app.add_subcommand("plotdata", "Aggregate trace CSVs into a regret curve");
  plot->add_option("traces", traces, "Trace CSV files")->required();
  plot->add_option("-o,--output", plot_out, "Plot-data CSV")->required();

  rankfeed::EstimationBoundInputs bound_in;
  auto* bound = app.add_subcommand("bound", "Estimation error bound for a sliding window");
  bound->add_option("--tau", bound_in.tau, "Temperature")->required();
  bound->add_option("--p", bound_in.p, "Per-step proposal probability lower bound");
  bound->add_option("--m", bound_in.m_prime, "Window length")->required();
  bound->add_option("--delta", bound_in.delta, "Failure probability");
  bound->add_option("--variation", bound_in.window_variation, "Sup-norm variation in the window");
  bound->add_option("--actions", bound_in.num_actions, "Number of actions")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (print_defaults) {
        rankfeed::write_default_config(std::cout);
        return 0;
      }
      if (config_path.empty()) throw rankfeed::Error("run needs --config");
      return run_command(config_path, output, workers, seeds);
    }
    if (*ingest) return ingest_command(scores_path, ingest_out);
    if (*plot) {
      rankfeed::emit_plot_data(traces, plot_out);
      return 0;
    }
    if (*bound) {
      const rankfeed::EstimationBound b = rankfeed::estimation_error_bound(bound_in);
      if (!b.applicable) {
        std::cout << "not applicable: m p^4 < 2 log(2/delta)\n";
        return 0;
      }
      std::cout << rankfeed::format_double(b.value) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "rankfeed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
