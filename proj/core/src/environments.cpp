#include "rankfeed/environments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rankfeed/csv.hpp"
#include "rankfeed/metrics.hpp"

namespace rankfeed {

std::string to_string(RankingBasis basis) {
  switch (basis) {
    case RankingBasis::kInstantaneous: return "instantaneous";
    case RankingBasis::kTimeAverage: return "time_average";
    case RankingBasis::kEmpiricalMean: return "empirical_mean";
  }
  return "unknown";
}

RankingBasis parse_ranking_basis(const std::string& name) {
  if (name == "instantaneous") return RankingBasis::kInstantaneous;
  if (name == "time_average") return RankingBasis::kTimeAverage;
  if (name == "empirical_mean") return RankingBasis::kEmpiricalMean;
  throw Error("unknown ranking basis '" + name + "'");
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

BasisTracker::BasisTracker(std::size_t num_actions, RankingBasis basis)
    : num_actions_(num_actions),
      basis_(basis),
      sums_(num_actions),
      counts_(num_actions, 0),
      basis_vector_(num_actions, 0.0) {
  if (num_actions < 2) throw Error("BasisTracker: need at least two actions");
}

const UtilityVector& BasisTracker::advance(std::span<const double> u,
                                           const std::vector<ActionIndex>& proposal) {
  if (u.size() != num_actions_) throw Error("BasisTracker: utility length mismatch");
  for (ActionIndex a : proposal) {
    if (a >= num_actions_) throw Error("proposal references out-of-range action");
  }
  ++steps_;
  switch (basis_) {
    case RankingBasis::kInstantaneous:
      basis_vector_.assign(u.begin(), u.end());
      break;
    case RankingBasis::kTimeAverage:
      for (std::size_t a = 0; a < num_actions_; ++a) {
        sums_[a].add(u[a]);
        basis_vector_[a] = sums_[a].value() / static_cast<double>(steps_);
      }
      break;
    case RankingBasis::kEmpiricalMean:
      for (ActionIndex a : proposal) {
        sums_[a].add(u[a]);
        ++counts_[a];
      }
      for (std::size_t a = 0; a < num_actions_; ++a) {
        basis_vector_[a] =
            counts_[a] == 0 ? 0.0 : sums_[a].value() / static_cast<double>(counts_[a]);
      }
      break;
  }
  return basis_vector_;
}

RankingEnvironment::RankingEnvironment(UtilitySequence sequence, RankingParams params,
                                       RankingBasis basis)
    : sequence_(std::move(sequence)),
      params_(params),
      num_actions_(sequence_.empty() ? 2 : sequence_.front().size()),
      tracker_(num_actions_, basis) {
  params_.validate();
  validate_sequence(sequence_, false);
}

StepOutcome RankingEnvironment::step(const Proposal& proposal, Rng& rng) {
  if (t_ >= sequence_.size()) throw Error("environment stepped past its horizon");
  if (proposal.entries.empty()) throw Error("empty proposal");
  const UtilityVector& u = sequence_[t_];
  const UtilityVector& r = tracker_.advance(u, proposal.entries);
  StepOutcome out;
  out.ranking = sample_ranking(r, params_, proposal, rng);
  double total = 0.0;
  for (ActionIndex a : proposal.entries) total += u[a];
  out.realized_avg_utility = total / static_cast<double>(proposal.size());
  ++t_;
  return out;
}

void validate_sequence(const UtilitySequence& sequence, bool require_reference_zero) {
  if (sequence.empty()) return;
  const std::size_t n = sequence.front().size();
  if (n < 2) throw Error("utility vectors need at least two actions");
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const UtilityVector& u = sequence[t];
    if (u.size() != n) throw Error("utility sequence has ragged vectors");
    for (double x : u) {
      if (!std::isfinite(x) || x < -1.0 || x > 1.0) {
        throw Error("utility outside [-1, 1] at step " + std::to_string(t + 1));
      }
    }
    if (require_reference_zero && u.back() != 0.0) {
      throw Error("reference utility is not zero at step " + std::to_string(t + 1));
    }
  }
}

UtilitySequence shift_to_reference_zero(const UtilitySequence& sequence) {
  UtilitySequence out = sequence;
  for (UtilityVector& u : out) {
    const double shift = u.back();
    for (double& x : u) x -= shift;
  }
  return out;
}

UtilitySequence gen_stationary(const UtilityVector& u, std::size_t horizon) {
  validate_sequence({u}, false);
  return UtilitySequence(horizon, u);
}

namespace {

UtilityVector random_box_vector(std::size_t num_actions, Rng& rng) {
  UtilityVector u(num_actions, 0.0);
  for (std::size_t a = 0; a + 1 < num_actions; ++a) u[a] = rng.uniform(-1.0, 1.0);
  return u;
}

UtilityVector random_direction(std::size_t num_actions, Rng& rng) {
  UtilityVector n(num_actions, 0.0);
  double len = 0.0;
  while (len < 1e-12) {
    for (std::size_t a = 0; a + 1 < num_actions; ++a) n[a] = rng.normal();
    len = norm(n);
  }
  for (double& x : n) x /= len;
  return n;
}

UtilityVector clipped_move(const UtilityVector& u, const UtilityVector& dir, double alpha) {
  UtilityVector v(u.size());
  for (std::size_t a = 0; a < u.size(); ++a) {
    v[a] = std::clamp(u[a] + alpha * dir[a], -1.0, 1.0);
  }
  return v;
}

}  // namespace

BoundedVariationSequence gen_bounded_variation(std::size_t horizon, double q,
                                               std::uint64_t seed, std::size_t num_actions,
                                               double scale) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("variation exponent q must lie in [0, 1]");
  if (!(scale > 0.0)) throw Error("variation scale must be positive");
  if (num_actions < 2) throw Error("need at least two actions");
  BoundedVariationSequence out;
  if (horizon == 0) return out;
  Rng rng(seed);
  out.budget = scale * std::pow(static_cast<double>(horizon), q);

  // Flat Dirichlet weights over the T-1 transitions.
  const std::size_t steps = horizon - 1;
  out.allocation.resize(steps);
  double total = 0.0;
  for (double& w : out.allocation) {
    w = -std::log1p(-rng.uniform());
    total += w;
  }
  for (double& w : out.allocation) w = w / total * out.budget;

  out.sequence.reserve(horizon);
  out.sequence.push_back(random_box_vector(num_actions, rng));
  for (std::size_t s = 0; s < steps; ++s) {
    const UtilityVector& prev = out.sequence.back();
    const UtilityVector dir = random_direction(num_actions, rng);
    const double target = out.allocation[s];
    auto moved = [&](double alpha) { return distance(clipped_move(prev, dir, alpha), prev); };

    double hi = 1.0;
    while (moved(hi) < target && hi < 1e6) hi *= 2.0;
    double alpha = hi;
    if (moved(hi) > target) {
      double lo = 0.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (moved(mid) <= target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      // The lower end never overshoots the allocation.
      alpha = lo;
    }
    UtilityVector next = clipped_move(prev, dir, alpha);
    next.back() = 0.0;
    out.sequence.push_back(std::move(next));
  }
  out.realized_variation = variation(out.sequence);
  return out;
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kUniform: return "uniform";
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kGamma: return "gamma";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "uniform") return NoiseKind::kUniform;
  if (name == "gaussian") return NoiseKind::kGaussian;
  if (name == "gamma") return NoiseKind::kGamma;
  throw Error("unknown noise kind '" + name + "'");
}

double sample_shift(NoiseKind kind, double sigma, Rng& rng) {
  switch (kind) {
    case NoiseKind::kUniform: return rng.uniform(-sigma, sigma);
    case NoiseKind::kGaussian: return sigma * rng.normal();
    case NoiseKind::kGamma: return rng.gamma(1.0 / (sigma * sigma), sigma * sigma) - 1.0;
  }
  return 0.0;
}

NoiseShiftSequence gen_noise_shift(std::size_t horizon, std::uint64_t seed, NoiseKind kind,
                                   double sigma, std::size_t num_actions) {
  if (!(sigma > 0.0)) throw Error("noise sigma must be positive");
  if (num_actions < 2) throw Error("need at least two actions");
  Rng rng(seed);
  NoiseShiftSequence out;
  out.base = random_box_vector(num_actions, rng);
  out.sequence.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    UtilityVector u(num_actions, 0.0);
    for (std::size_t a = 0; a + 1 < num_actions; ++a) {
      u[a] = std::clamp(out.base[a] + sample_shift(kind, sigma, rng), -1.0, 1.0);
    }
    out.sequence.push_back(std::move(u));
  }
  return out;
}

double theorem1_mixture_probability() {
  const double num = 4.0 * logistic(-5.0) / 13.0 + 9.0 * logistic(1.5) / 13.0 - logistic(1.0);
  return num / (logistic(-0.2) - logistic(1.0));
}

UtilitySequence gen_theorem1_instance(int which, std::size_t horizon, std::uint64_t seed) {
  double p = 0.0;
  UtilityVector low, high;
  if (which == 1) {
    p = 4.0 / 13.0;
    low = {-0.5, 0.0};
    high = {0.15, 0.0};
  } else if (which == 2) {
    p = theorem1_mixture_probability();
    low = {-0.02, 0.0};
    high = {0.1, 0.0};
  } else {
    throw Error("hard instance must be 1 or 2");
  }
  Rng rng(seed);
  UtilitySequence out;
  out.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) out.push_back(rng.uniform() < p ? low : high);
  return out;
}

DoublingConstruction gen_theorem2_sequences(std::size_t horizon) {
  if (horizon < 1) throw Error("doubling construction needs T >= 1");
  DoublingConstruction out;
  while ((std::size_t{1} << out.K) < horizon) ++out.K;
  const UtilityVector one_a{1.0, 0.0};
  const UtilityVector zero_one{0.0, 1.0};
  const UtilityVector zero{0.0, 0.0};
  for (std::size_t k = 0; k <= out.K; ++k) {
    const std::size_t len = std::size_t{1} << k;
    UtilitySequence seq(len - 1, one_a);
    if (k < out.K) seq.insert(seq.end(), len, zero_one);
    seq.push_back(zero);
    UtilitySequence mirror = seq;
    for (std::size_t i = 0; i + 1 < mirror.size(); ++i) std::swap(mirror[i][0], mirror[i][1]);
    out.action_a.push_back(std::move(seq));
    out.action_b.push_back(std::move(mirror));
  }
  return out;
}

std::optional<std::size_t> select_hard_sequence(std::span<const double> average_utilities,
                                                std::size_t K) {
  const double threshold = 0.5 - 1.0 / (2.0 * static_cast<double>(K + 1));
  for (std::size_t i = 0; i < average_utilities.size(); ++i) {
    if (average_utilities[i] < threshold) return i;
  }
  return std::nullopt;
}

UtilitySequence gen_theorem3_instance(int which, std::size_t horizon) {
  if (which != 1 && which != 2) throw Error("hard instance must be 1 or 2");
  UtilitySequence out(horizon, UtilityVector{0.1, 0.0});
  out.insert(out.end(), horizon, UtilityVector{0.0, 0.2});
  const UtilityVector tail = which == 1 ? UtilityVector{0.0, 1.0} : UtilityVector{0.4, 0.2};
  out.insert(out.end(), 2 * horizon, tail);
  return out;
}

void write_sequence_csv(std::ostream& out, const UtilitySequence& sequence) {
  const std::size_t n = sequence.empty() ? 0 : sequence.front().size();
  out << 't';
  for (std::size_t a = 0; a < n; ++a) out << ",u_" << a;
  out << '\n';
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    if (sequence[t].size() != n) throw Error("utility sequence has ragged vectors");
    out << (t + 1) << ',' << join_doubles(sequence[t]) << '\n';
  }
}

UtilitySequence read_sequence_csv(std::istream& in) {
  std::string line;
  if (!read_csv_line(in, line)) throw Error("sequence file is empty");
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || trim(header[0]) != "t") throw Error("sequence header must start with t");
  const std::size_t n = header.size() - 1;
  for (std::size_t a = 0; a < n; ++a) {
    if (trim(header[a + 1]) != "u_" + std::to_string(a)) {
      throw Error("unexpected sequence header column '" + header[a + 1] + "'");
    }
  }
  UtilitySequence out;
  while (read_csv_line(in, line)) {
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != n + 1) throw Error("ragged row in sequence file");
    const std::string context = "sequence row " + std::to_string(out.size() + 1);
    if (parse_integer(cells[0], context) != static_cast<long long>(out.size() + 1)) {
      throw Error("sequence rows must be numbered 1..T");
    }
    UtilityVector u(n);
    for (std::size_t a = 0; a < n; ++a) u[a] = parse_double(cells[a + 1], context);
    out.push_back(std::move(u));
  }
  return out;
}

void write_sequence_file(const std::string& path, const UtilitySequence& sequence) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_sequence_csv(out, sequence);
  if (!out) throw Error("failed writing '" + path + "'");
}

UtilitySequence read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  return read_sequence_csv(in);
}

}  // namespace rankfeed
