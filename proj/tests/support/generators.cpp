#include "support/generators.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>

#include <unistd.h>

namespace rankfeed::testing {

UtilityVector random_utilities(Rng& rng, std::size_t n, bool reference_zero) {
  UtilityVector u(n);
  for (double& x : u) x = rng.uniform(-1.0, 1.0);
  if (reference_zero) u.back() = 0.0;
  return u;
}

UtilitySequence random_sequence(Rng& rng, std::size_t horizon, std::size_t n) {
  UtilitySequence seq;
  seq.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) seq.push_back(random_utilities(rng, n));
  return seq;
}

std::vector<ActionIndex> random_multiset(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<ActionIndex> out(k);
  for (auto& a : out) a = rng.index(n);
  return out;
}

MixedStrategy random_strategy(Rng& rng, std::size_t n) {
  MixedStrategy pi(n);
  double total = 0.0;
  for (double& p : pi) {
    p = std::exp(3.0 * rng.normal());
    total += p;
  }
  for (double& p : pi) p /= total;
  return pi;
}

namespace {

void extend(std::size_t n, std::size_t k, std::size_t lowest, std::vector<ActionIndex>& prefix,
            std::vector<std::vector<ActionIndex>>& out) {
  if (prefix.size() == k) {
    out.push_back(prefix);
    return;
  }
  for (std::size_t a = lowest; a < n; ++a) {
    prefix.push_back(a);
    extend(n, k, a, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<ActionIndex>> all_multisets(std::size_t n, std::size_t k) {
  std::vector<std::vector<ActionIndex>> out;
  std::vector<ActionIndex> prefix;
  extend(n, k, 0, prefix, out);
  return out;
}

std::string scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("rankfeed_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace rankfeed::testing
