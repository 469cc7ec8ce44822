#include "rankfeed/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rankfeed/metrics.hpp"

namespace rankfeed {

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kFtrlEntropy: return "ftrl_entropy";
    case OracleKind::kFtrlL2: return "ftrl_l2";
    case OracleKind::kHedge: return "hedge";
    case OracleKind::kPgd: return "pgd";
  }
  return "unknown";
}

OracleKind parse_oracle_kind(const std::string& name) {
  if (name == "ftrl_entropy") return OracleKind::kFtrlEntropy;
  if (name == "ftrl_l2") return OracleKind::kFtrlL2;
  if (name == "hedge") return OracleKind::kHedge;
  if (name == "pgd") return OracleKind::kPgd;
  throw Error("unknown oracle kind '" + name + "'");
}

OracleConfig OracleConfig::make(OracleKind kind, double lambda, std::size_t num_actions) {
  OracleConfig c;
  c.kind = kind;
  c.lambda = lambda;
  constexpr double kStrongConvexity = 1.0;
  c.declared_L = lambda / kStrongConvexity;
  c.declared_eta = lambda * std::sqrt(static_cast<double>(num_actions)) / kStrongConvexity;
  c.validate();
  return c;
}

void OracleConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("oracle lambda must be positive");
  if (!(declared_L > 0.0)) throw Error("oracle declared L must be positive");
  if (!(declared_eta > 0.0)) throw Error("oracle declared eta must be positive");
}

OracleState make_oracle_state(std::size_t num_actions, const OracleConfig& config) {
  if (num_actions < 1) throw Error("oracle needs at least one action");
  config.validate();
  OracleState s;
  s.cumulative_utility.assign(num_actions, 0.0);
  if (config.kind == OracleKind::kPgd) {
    s.iterate.assign(num_actions, 1.0 / static_cast<double>(num_actions));
  }
  return s;
}

MixedStrategy softmax(std::span<const double> v, double scale) {
  MixedStrategy out(v.size());
  if (v.empty()) return out;
  double top = scale * v[0];
  for (double x : v) top = std::max(top, scale * x);
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(scale * v[i] - top);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

MixedStrategy project_to_simplex(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) throw Error("project_to_simplex: empty vector");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  MixedStrategy out(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(v[i] - theta, 0.0);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

MixedStrategy oracle_next(const OracleState& state, const OracleConfig& config) {
  switch (config.kind) {
    case OracleKind::kFtrlEntropy:
    case OracleKind::kHedge:
      return softmax(state.cumulative_utility, config.lambda);
    case OracleKind::kFtrlL2: {
      std::vector<double> scaled(state.cumulative_utility);
      for (double& x : scaled) x *= config.lambda;
      return project_to_simplex(scaled);
    }
    case OracleKind::kPgd:
      return state.iterate;
  }
  throw Error("oracle_next: unknown oracle kind");
}

OracleState oracle_feed(OracleState state, const OracleConfig& config,
                        std::span<const double> u) {
  if (u.size() != state.cumulative_utility.size()) {
    throw Error("oracle_feed: utility vector has the wrong length");
  }
  for (double x : u) {
    if (!std::isfinite(x)) throw Error("oracle_feed: non-finite utility");
  }
  for (std::size_t i = 0; i < u.size(); ++i) state.cumulative_utility[i] += u[i];
  ++state.step_count;
  if (config.kind == OracleKind::kPgd) {
    std::vector<double> step(state.iterate);
    for (std::size_t i = 0; i < u.size(); ++i) step[i] += config.lambda * u[i];
    state.iterate = project_to_simplex(step);
  }
  return state;
}

double oracle_regret(const UtilitySequence& utilities, const OracleConfig& config) {
  if (utilities.empty()) return 0.0;
  const std::size_t n = utilities.front().size();
  OracleState state = make_oracle_state(n, config);
  RegretAccumulator acc(n);
  for (const UtilityVector& u : utilities) {
    acc.add(u, oracle_next(state, config));
    state = oracle_feed(std::move(state), config, u);
  }
  return acc.external();
}

}  // namespace rankfeed
