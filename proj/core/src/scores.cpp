#include "rankfeed/scores.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "rankfeed/csv.hpp"
#include "rankfeed/rng.hpp"

namespace rankfeed {

ScoreDataset ingest_scores(std::istream& in) {
  std::string line;
  if (!read_csv_line(in, line)) throw Error("score file is empty");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3) throw Error("score file needs a step column and at least two models");
  if (trim(header[0]) != "step") throw Error("score header must start with 'step'");

  ScoreDataset data;
  for (std::size_t c = 1; c < header.size(); ++c) data.model_names.push_back(trim(header[c]));
  const std::size_t k = data.model_names.size();

  std::vector<std::vector<double>> raw;
  double lo = 0.0;
  double hi = 0.0;
  while (read_csv_line(in, line)) {
    const std::vector<std::string> cells = split_csv_line(line);
    const std::string context = "score row " + std::to_string(raw.size() + 1);
    if (cells.size() != k + 1) throw Error("ragged " + context);
    data.step_ids.push_back(parse_integer(cells[0], context));
    std::vector<double> row(k);
    for (std::size_t c = 0; c < k; ++c) {
      row[c] = parse_double(cells[c + 1], context);
      if (!std::isfinite(row[c])) throw Error("non-finite score in " + context);
    }
    const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
    if (raw.empty()) {
      lo = *mn;
      hi = *mx;
    } else {
      lo = std::min(lo, *mn);
      hi = std::max(hi, *mx);
    }
    raw.push_back(std::move(row));
  }
  if (raw.empty()) throw Error("score file has no rows");

  if (hi > lo) {
    data.offset = 0.5 * (hi + lo);
    data.scale = 0.5 * (hi - lo);
  } else {
    data.offset = lo;
    data.scale = 1.0;
  }
  data.model_names.push_back(kReferenceModelName);
  data.utilities.reserve(raw.size());
  for (const auto& row : raw) {
    UtilityVector u(k + 1, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      u[c] = std::clamp((row[c] - data.offset) / data.scale, -1.0, 1.0);
    }
    data.utilities.push_back(std::move(u));
  }
  return data;
}

ScoreDataset ingest_scores_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  return ingest_scores(in);
}

void write_scores(std::ostream& out, const ScoreDataset& data) {
  out << "step";
  for (const std::string& name : data.model_names) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < data.utilities.size(); ++r) {
    out << data.step_ids[r] << ',' << join_doubles(data.utilities[r]) << '\n';
  }
}

UtilitySequence routing_sequence(const ScoreDataset& data, std::size_t horizon,
                                 std::uint64_t seed) {
  if (data.utilities.empty()) throw Error("score dataset is empty");
  Rng rng(seed);
  UtilitySequence out;
  out.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    out.push_back(data.utilities[rng.index(data.utilities.size())]);
  }
  return out;
}

}  // namespace rankfeed
