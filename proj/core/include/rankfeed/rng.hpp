#ifndef RANKFEED_RNG_HPP_
#define RANKFEED_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace rankfeed {

// Seeded generator threaded explicitly through every sampling call.
// Streams are reproducible for a given seed on a given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  double normal() { return normal_(engine_); }
  double gamma(double shape, double scale);

  // Draws an index with probability proportional to weights (need not sum to 1).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Mixes a run seed with a stream id (splitmix64) so that environment
// generation, proposals and rankings draw from independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rankfeed

#endif  // RANKFEED_RNG_HPP_
