#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hnw/graph.hpp"

namespace hnw {

/// Pure strategy. Cooperate stands for the unit vector (1,0), Defect for (0,1).
enum class Strategy : std::uint8_t { Cooperate = 0, Defect = 1 };

using StrategyVector = std::vector<Strategy>;
using PayoffVector = std::vector<double>;

/// Which payoff the imitation step compares.
enum class UpdateRule : std::uint8_t {
  Accumulated,  ///< (P_y - P_x) / (b * max(k_x, k_y))
  Average,      ///< (P_y/k_y - P_x/k_x) / b
};

std::string_view to_string(UpdateRule rule) noexcept;
/// Accepts "accumulated" and "average"; throws ConfigError otherwise.
UpdateRule parse_update_rule(std::string_view text);

/// Rescaled PD: R = 1, S = P = 0, T = b.
struct GameParams {
  double b = 1.2;
  UpdateRule rule = UpdateRule::Accumulated;

  /// b = 1 gives no strict advantage to defection; accepted but flagged.
  bool proper_pd() const noexcept { return b > 1.0 && b < 2.0; }
};

/// Throws ConfigError unless 1 <= b <= 2.
void validate(const GameParams& params);

/// s_x^T M s_y.
constexpr double pair_payoff(Strategy self, Strategy other, double b) noexcept {
  if (other == Strategy::Defect) return 0.0;
  return self == Strategy::Cooperate ? 1.0 : b;
}

/// P_x = sum over neighbours y of pair_payoff(s_x, s_y), summed in neighbour order.
PayoffVector accumulate_payoffs(const Graph& g, std::span<const Strategy> s, const GameParams& params);
void accumulate_payoffs(const Graph& g, std::span<const Strategy> s, const GameParams& params,
                        std::span<double> out);

/// Probability that x copies y. Zero unless y's compared payoff strictly exceeds x's.
double adoption_probability(double payoff_x, double payoff_y, int degree_x, int degree_y,
                            const GameParams& params);

}  // namespace hnw
