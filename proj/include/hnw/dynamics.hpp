#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hnw/game.hpp"
#include "hnw/graph.hpp"

namespace hnw {

struct SimProtocol {
  int transient_generations = 10000;
  int measure_generations = 2000;
  double initial_coop_fraction = 0.5;
  std::uint64_t seed = 0;
  /// Stop as soon as the population is uniform; both uniform states are absorbing.
  bool early_absorb_exit = true;
  /// Keep the per-generation cooperator frequency in SimResult::trace.
  bool record_trace = false;
};

/// Throws ConfigError on negative transient, empty window or fraction outside [0, 1].
void validate(const SimProtocol& proto);

enum class Absorbed : std::uint8_t { None, AllC, AllD };
std::string_view to_string(Absorbed a) noexcept;

struct SimResult {
  double mean_coop_frequency = 0.0;
  Absorbed absorbed = Absorbed::None;
  int generations_executed = 0;
  /// Cooperator frequency after each executed generation (1-based generation i at index i-1).
  std::vector<double> trace;
};

/// Exactly floor(fraction * N + 1/2) cooperators at uniformly random positions.
StrategyVector init_strategies(int node_count, double initial_coop_fraction, std::mt19937_64& rng);

/// Next strategy of node x. All randomness comes from the (run_seed, generation, x)
/// substream, so the result does not depend on the order nodes are visited in.
Strategy update_node(const Graph& g, std::span<const Strategy> s, std::span<const double> payoffs,
                     const GameParams& params, std::uint64_t run_seed, std::uint64_t generation,
                     NodeId x);

/// One synchronous generation: payoffs from `s`, then every node imitates a random
/// neighbour with the adoption probability. The result depends only on `s`.
StrategyVector generation_step(const Graph& g, std::span<const Strategy> s, const GameParams& params,
                               std::uint64_t run_seed, std::uint64_t generation);

/// Transient followed by a measurement window; returns the window mean of the
/// cooperator frequency. The run seed is `proto.seed`.
SimResult run_simulation(const Graph& g, const GameParams& params, const SimProtocol& proto);

/// `generation,rho_c` lines, one per executed generation.
void write_trace(const SimResult& result, std::ostream& out);

double cooperator_fraction(std::span<const Strategy> s) noexcept;

}  // namespace hnw
