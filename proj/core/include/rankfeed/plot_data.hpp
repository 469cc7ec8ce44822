#ifndef RANKFEED_PLOT_DATA_HPP_
#define RANKFEED_PLOT_DATA_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace rankfeed {

// Average regret of one run at its checkpoints.
struct RegretCurve {
  std::vector<std::size_t> t;
  std::vector<double> avg_regret;
};

struct PlotRow {
  std::size_t t = 0;
  double mean_avg_regret = 0.0;
  double ci_halfwidth = 0.0;  // 1.96 * sample sd / sqrt(n); 0 for one run
};

// Pointwise mean and 95% normal-approximation half-width across runs.
std::vector<PlotRow> aggregate_curves(const std::vector<RegretCurve>& curves);

// Columns exactly `t,mean_avg_regret,ci_halfwidth`.
void write_plot_data(std::ostream& out, const std::vector<PlotRow>& rows);

// Reads the `t` and `avg_regret` columns of a trace CSV, keeping the rows
// on the checkpoint schedule of the final t.
RegretCurve read_trace_curve(std::istream& in);
RegretCurve read_trace_curve_file(const std::string& path);

// Aggregates trace files into one plot-data file.
void emit_plot_data(const std::vector<std::string>& trace_paths, const std::string& out_path);

}  // namespace rankfeed

#endif  // RANKFEED_PLOT_DATA_HPP_
