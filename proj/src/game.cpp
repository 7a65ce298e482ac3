#include "hnw/game.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace hnw {

std::string_view to_string(UpdateRule rule) noexcept {
  return rule == UpdateRule::Average ? "average" : "accumulated";
}

UpdateRule parse_update_rule(std::string_view text) {
  if (text == "accumulated") return UpdateRule::Accumulated;
  if (text == "average") return UpdateRule::Average;
  throw ConfigError("unknown update rule '" + std::string(text) + "' (expected accumulated|average)");
}

void validate(const GameParams& params) {
  // Below 1 the accumulated-rule normalisation no longer bounds the probability by 1.
  if (!(params.b >= 1.0 && params.b <= 2.0)) {
    throw ConfigError("b must lie in [1, 2], got " + std::to_string(params.b));
  }
}

void accumulate_payoffs(const Graph& g, std::span<const Strategy> s, const GameParams& params,
                        std::span<double> out) {
  assert(s.size() == static_cast<std::size_t>(g.node_count()));
  assert(out.size() == s.size());
  for (NodeId x = 0; x < g.node_count(); ++x) {
    double total = 0.0;
    for (NodeId y : g.neighbors(x)) total += pair_payoff(s[x], s[y], params.b);
    out[x] = total;
  }
}

PayoffVector accumulate_payoffs(const Graph& g, std::span<const Strategy> s, const GameParams& params) {
  PayoffVector out(s.size());
  accumulate_payoffs(g, s, params, out);
  return out;
}

double adoption_probability(double payoff_x, double payoff_y, int degree_x, int degree_y,
                            const GameParams& params) {
  assert(degree_x >= 1 && degree_y >= 1);
  double p = 0.0;
  if (params.rule == UpdateRule::Accumulated) {
    if (!(payoff_y > payoff_x)) return 0.0;
    p = (payoff_y - payoff_x) / (params.b * std::max(degree_x, degree_y));
  } else {
    const double avg_x = payoff_x / degree_x;
    const double avg_y = payoff_y / degree_y;
    if (!(avg_y > avg_x)) return 0.0;
    p = (avg_y - avg_x) / params.b;
  }
  return std::min(p, 1.0);
}

}  // namespace hnw
