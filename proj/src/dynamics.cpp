#include "hnw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "hnw/random.hpp"

namespace hnw {

namespace {

constexpr std::uint64_t kInitStreamTag = 0x1b873593a5a5a5a5ULL;

void step_into(const Graph& g, std::span<const Strategy> s, const GameParams& params,
               std::uint64_t run_seed, std::uint64_t generation, std::span<double> payoffs,
               std::span<Strategy> next) {
  accumulate_payoffs(g, s, params, payoffs);
  for (NodeId x = 0; x < g.node_count(); ++x) {
    next[x] = update_node(g, s, payoffs, params, run_seed, generation, x);
  }
}

}  // namespace

void validate(const SimProtocol& proto) {
  if (proto.transient_generations < 0) throw ConfigError("transient generations must be >= 0");
  if (proto.measure_generations < 1) throw ConfigError("measurement window must be >= 1 generation");
  if (!(proto.initial_coop_fraction >= 0.0 && proto.initial_coop_fraction <= 1.0)) {
    throw ConfigError("initial cooperator fraction must lie in [0, 1]");
  }
}

std::string_view to_string(Absorbed a) noexcept {
  switch (a) {
    case Absorbed::AllC: return "all-C";
    case Absorbed::AllD: return "all-D";
    case Absorbed::None: break;
  }
  return "none";
}

double cooperator_fraction(std::span<const Strategy> s) noexcept {
  if (s.empty()) return 0.0;
  const auto c = std::count(s.begin(), s.end(), Strategy::Cooperate);
  return static_cast<double>(c) / static_cast<double>(s.size());
}

StrategyVector init_strategies(int node_count, double initial_coop_fraction, std::mt19937_64& rng) {
  const auto cooperators = std::clamp(
      static_cast<int>(std::floor(initial_coop_fraction * node_count + 0.5)), 0, node_count);
  std::vector<NodeId> order(node_count);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  StrategyVector s(node_count, Strategy::Defect);
  for (int i = 0; i < cooperators; ++i) s[order[i]] = Strategy::Cooperate;
  return s;
}

Strategy update_node(const Graph& g, std::span<const Strategy> s, std::span<const double> payoffs,
                     const GameParams& params, std::uint64_t run_seed, std::uint64_t generation,
                     NodeId x) {
  const auto nb = g.neighbors(x);
  SplitMix64 stream(substream_seed(run_seed, generation, static_cast<std::uint64_t>(x)));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(nb.size()) - 1);
  const NodeId y = nb[pick(stream)];
  if (s[y] == s[x]) return s[x];

  const double p = adoption_probability(payoffs[x], payoffs[y], g.degree(x), g.degree(y), params);
  if (p <= 0.0) return s[x];
  return std::generate_canonical<double, 53>(stream) < p ? s[y] : s[x];
}

StrategyVector generation_step(const Graph& g, std::span<const Strategy> s, const GameParams& params,
                               std::uint64_t run_seed, std::uint64_t generation) {
  PayoffVector payoffs(s.size());
  StrategyVector next(s.size());
  step_into(g, s, params, run_seed, generation, payoffs, next);
  return next;
}

SimResult run_simulation(const Graph& g, const GameParams& params, const SimProtocol& proto) {
  validate(params);
  validate(proto);

  const int n = g.node_count();
  std::mt19937_64 init_rng(mix64(proto.seed ^ kInitStreamTag));
  StrategyVector current = init_strategies(n, proto.initial_coop_fraction, init_rng);
  StrategyVector next(n);
  PayoffVector payoffs(n);

  SimResult result;
  const int total = proto.transient_generations + proto.measure_generations;
  if (proto.record_trace) result.trace.reserve(total);

  auto uniform_state = [n](std::span<const Strategy> s) {
    const auto c = std::count(s.begin(), s.end(), Strategy::Cooperate);
    if (c == 0) return Absorbed::AllD;
    if (c == n) return Absorbed::AllC;
    return Absorbed::None;
  };

  if (proto.early_absorb_exit) {
    if (const auto a = uniform_state(current); a != Absorbed::None) {
      result.absorbed = a;
      result.mean_coop_frequency = a == Absorbed::AllC ? 1.0 : 0.0;
      return result;
    }
  }

  double window_sum = 0.0;
  for (int gen = 1; gen <= total; ++gen) {
    step_into(g, current, params, proto.seed, static_cast<std::uint64_t>(gen), payoffs, next);
    current.swap(next);
    const double rho = cooperator_fraction(current);
    result.generations_executed = gen;
    if (proto.record_trace) result.trace.push_back(rho);
    if (gen > proto.transient_generations) window_sum += rho;

    if (proto.early_absorb_exit && (rho == 0.0 || rho == 1.0)) {
      // The rest of the schedule would repeat this value.
      const int remaining_in_window =
          std::min(proto.measure_generations, total - std::max(gen, proto.transient_generations));
      window_sum += remaining_in_window * rho;
      break;
    }
  }

  result.mean_coop_frequency = window_sum / proto.measure_generations;
  result.absorbed = uniform_state(current);
  return result;
}

void write_trace(const SimResult& result, std::ostream& out) {
  char buf[64];
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.6g\n", i + 1, result.trace[i]);
    out << buf;
  }
}

}  // namespace hnw
