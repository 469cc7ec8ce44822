#ifndef RANKFEED_SCORES_HPP_
#define RANKFEED_SCORES_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rankfeed/types.hpp"

namespace rankfeed {

// Per-prompt model scores, affinely rescaled into [-1, 1] with one global
// map y = (x - offset) / scale, followed by an appended zero-utility
// reference column.
struct ScoreDataset {
  std::vector<std::string> model_names;  // the last name is the synthetic reference
  std::vector<long long> step_ids;
  UtilitySequence utilities;  // one row per prompt, length num_models() + 1
  double offset = 0.0;
  double scale = 1.0;

  std::size_t num_models() const { return model_names.size() - 1; }
  std::size_t num_actions() const { return model_names.size(); }
};

inline constexpr const char* kReferenceModelName = "reference";

// Header `step,<model>,...` with at least two model columns.
ScoreDataset ingest_scores(std::istream& in);
ScoreDataset ingest_scores_file(const std::string& path);

// Writes the rescaled dataset in the same layout (reference column included).
void write_scores(std::ostream& out, const ScoreDataset& data);

// T prompts drawn uniformly with replacement from the dataset rows.
UtilitySequence routing_sequence(const ScoreDataset& data, std::size_t horizon,
                                 std::uint64_t seed);

}  // namespace rankfeed

#endif  // RANKFEED_SCORES_HPP_
