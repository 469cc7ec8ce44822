#include "rankfeed/plot_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "rankfeed/csv.hpp"
#include "rankfeed/metrics.hpp"
#include "rankfeed/types.hpp"

namespace rankfeed {

std::vector<PlotRow> aggregate_curves(const std::vector<RegretCurve>& curves) {
  if (curves.empty()) throw Error("no traces to aggregate");
  const std::vector<std::size_t>& ts = curves.front().t;
  for (const RegretCurve& c : curves) {
    if (c.t != ts || c.avg_regret.size() != ts.size()) {
      throw Error("traces do not share a checkpoint schedule");
    }
  }
  const double n = static_cast<double>(curves.size());
  std::vector<PlotRow> rows(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double sum = 0.0;
    for (const RegretCurve& c : curves) sum += c.avg_regret[k];
    const double mean = sum / n;
    double ss = 0.0;
    for (const RegretCurve& c : curves) ss += (c.avg_regret[k] - mean) * (c.avg_regret[k] - mean);
    rows[k].t = ts[k];
    rows[k].mean_avg_regret = mean;
    rows[k].ci_halfwidth = curves.size() < 2 ? 0.0 : 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return rows;
}

void write_plot_data(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << "t,mean_avg_regret,ci_halfwidth\n";
  for (const PlotRow& r : rows) {
    out << r.t << ',' << format_double(r.mean_avg_regret) << ',' << format_double(r.ci_halfwidth)
        << '\n';
  }
}

RegretCurve read_trace_curve(std::istream& in) {
  std::string line;
  if (!read_csv_line(in, line)) throw Error("trace file is empty");
  const std::vector<std::string> header = split_csv_line(line);
  std::size_t t_col = header.size();
  std::size_t r_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trim(header[c]);
    if (name == "t") t_col = c;
    if (name == "avg_regret") r_col = c;
  }
  if (t_col == header.size() || r_col == header.size()) {
    throw Error("trace file lacks t or avg_regret columns");
  }
  RegretCurve all;
  while (read_csv_line(in, line)) {
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) throw Error("ragged row in trace file");
    const long long t = parse_integer(cells[t_col], "trace t");
    if (t < 1) throw Error("trace t must be positive");
    all.t.push_back(static_cast<std::size_t>(t));
    all.avg_regret.push_back(parse_double(cells[r_col], "trace avg_regret"));
  }
  if (all.t.empty()) throw Error("trace file has no rows");
  const std::vector<std::size_t> schedule = checkpoint_schedule(all.t.back());
  RegretCurve out;
  for (std::size_t k = 0; k < all.t.size(); ++k) {
    if (std::binary_search(schedule.begin(), schedule.end(), all.t[k])) {
      out.t.push_back(all.t[k]);
      out.avg_regret.push_back(all.avg_regret[k]);
    }
  }
  return out;
}

RegretCurve read_trace_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  return read_trace_curve(in);
}

void emit_plot_data(const std::vector<std::string>& trace_paths, const std::string& out_path) {
  if (trace_paths.empty()) throw Error("no traces to aggregate");
  std::vector<RegretCurve> curves;
  for (const std::string& p : trace_paths) curves.push_back(read_trace_curve_file(p));
  const std::vector<PlotRow> rows = aggregate_curves(curves);
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write '" + out_path + "'");
  write_plot_data(out, rows);
  if (!out) throw Error("failed writing '" + out_path + "'");
}

}  // namespace rankfeed
