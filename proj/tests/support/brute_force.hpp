#ifndef RANKFEED_TESTS_BRUTE_FORCE_HPP_
#define RANKFEED_TESTS_BRUTE_FORCE_HPP_

#include <map>
#include <vector>

#include "rankfeed/types.hpp"

namespace rankfeed::testing {

using Arrangement = std::vector<ActionIndex>;

// Every distinct ordering of a multiset, in lexicographic order.
std::vector<Arrangement> distinct_arrangements(std::vector<ActionIndex> multiset);

// PL law over action sequences built by walking all K! labeled orderings of
// the slots and summing the textbook product formula per action sequence.
std::map<Arrangement, double> labeled_pl_distribution(const std::vector<ActionIndex>& multiset,
                                                      const std::vector<double>& u, double tau);

// Exact expected number of (a ahead of b) slot pairs.
double expected_pairs_ahead(const std::map<Arrangement, double>& law, ActionIndex a,
                            ActionIndex b);

double probability_first(const std::map<Arrangement, double>& law, ActionIndex a);

double plain_sigmoid(double x);

// Chi-square statistic and p-value after pooling cells with expected count
// below `min_expected` into one cell.
struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& probabilities,
                               double min_expected = 5.0);

// Homogeneity test for two count vectors over the same categories.
ChiSquareResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace rankfeed::testing

#endif  // RANKFEED_TESTS_BRUTE_FORCE_HPP_
