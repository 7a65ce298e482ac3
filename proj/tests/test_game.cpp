#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <random>

#include "hnw/game.hpp"

using namespace hnw;

namespace {

// Literal s_x^T M s_y with unit strategy vectors and M = [[1, 0], [b, 0]].
double bilinear_payoff(Strategy x, Strategy y, double b) {
  auto unit = [](Strategy s) {
    return s == Strategy::Cooperate ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
  };
  Eigen::Matrix2d m;
  m << 1.0, 0.0, b, 0.0;
  return unit(x).dot(m * unit(y));
}

StrategyVector random_strategies(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  StrategyVector s(n);
  for (auto& v : s) v = coin(rng) ? Strategy::Cooperate : Strategy::Defect;
  return s;
}

Graph random_graph(std::mt19937_64& rng) {
  const int n = 7 + static_cast<int>(rng() % 80);
  const int hubs = 1 + static_cast<int>(rng() % n);
  // Any single hub has n - 5 non-ring partners, so this m is always feasible.
  const int m = static_cast<int>(rng() % (n - 4));
  return generate_hnw(n, 2, hubs, m, rng);
}

}  // namespace

TEST_CASE("pair payoff is the rescaled PD matrix") {
  using enum Strategy;
  CHECK(pair_payoff(Cooperate, Cooperate, 1.5) == 1.0);
  CHECK(pair_payoff(Defect, Cooperate, 1.5) == 1.5);
  for (double b : {1.0, 1.3, 1.99}) {
    CHECK(pair_payoff(Cooperate, Defect, b) == 0.0);
    CHECK(pair_payoff(Defect, Defect, b) == 0.0);
    for (auto x : {Cooperate, Defect}) {
      for (auto y : {Cooperate, Defect}) CHECK(pair_payoff(x, y, b) == bilinear_payoff(x, y, b));
    }
  }
}

TEST_CASE("accumulated payoffs on small instances") {
  const GameParams params{1.5, UpdateRule::Accumulated};
  const Graph ring = ring_lattice(2001, 2);

  const auto all_d = accumulate_payoffs(ring, StrategyVector(2001, Strategy::Defect), params);
  CHECK(std::all_of(all_d.begin(), all_d.end(), [](double p) { return p == 0.0; }));

  const auto all_c = accumulate_payoffs(ring, StrategyVector(2001, Strategy::Cooperate), params);
  CHECK(std::all_of(all_c.begin(), all_c.end(), [](double p) { return p == 4.0; }));

  StrategyVector s(5, Strategy::Cooperate);
  s[0] = Strategy::Defect;
  CHECK(accumulate_payoffs(ring_lattice(5, 1), s, params) == PayoffVector{3.0, 1.0, 2.0, 2.0, 1.0});
}

TEST_CASE("accumulated payoffs equal the bilinear form and the closed form") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> b_dist(1.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_graph(rng);
    const auto s = random_strategies(g.node_count(), rng);
    const GameParams params{b_dist(rng), UpdateRule::Accumulated};
    const auto payoffs = accumulate_payoffs(g, s, params);
    for (NodeId x = 0; x < g.node_count(); ++x) {
      double oracle = 0.0;
      int cooperating = 0;
      for (NodeId y : g.neighbors(x)) {
        oracle += bilinear_payoff(s[x], s[y], params.b);
        cooperating += s[y] == Strategy::Cooperate;
      }
      REQUIRE(payoffs[x] == oracle);
      const double closed = cooperating * (s[x] == Strategy::Cooperate ? 1.0 : params.b);
      REQUIRE(payoffs[x] == doctest::Approx(closed).epsilon(1e-12));
      REQUIRE(payoffs[x] >= 0.0);
      REQUIRE(payoffs[x] <= params.b * g.degree(x) + 1e-12);
    }
  }
}

TEST_CASE("adoption probability hand cases") {
  const GameParams acc{1.2, UpdateRule::Accumulated};
  CHECK(adoption_probability(3.0, 3.0, 4, 4, acc) == 0.0);
  CHECK(adoption_probability(4.0, 2.0, 4, 6, acc) == 0.0);
  CHECK(adoption_probability(2.0, 4.0, 4, 6, acc) == doctest::Approx(2.0 / 7.2).epsilon(1e-12));
  CHECK(std::abs(adoption_probability(2.0, 4.0, 4, 6, acc) - 0.2777777777777778) < 1e-12);
  // Maximal gap saturates the normalisation.
  CHECK(adoption_probability(0.0, 1.2 * 6, 3, 6, acc) == 1.0);

  // C5 with a lone defector at node 0, b = 1.5: payoffs 3, 1, 2, 2, 1.
  const GameParams c5{1.5, UpdateRule::Accumulated};
  CHECK(adoption_probability(1.0, 3.0, 2, 2, c5) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(adoption_probability(2.0, 1.0, 2, 2, c5) == 0.0);
  CHECK(adoption_probability(2.0, 2.0, 2, 2, c5) == 0.0);
  CHECK(adoption_probability(3.0, 1.0, 2, 2, c5) == 0.0);

  const GameParams avg{1.25, UpdateRule::Average};
  CHECK(adoption_probability(2.0, 3.0, 4, 3, avg) == doctest::Approx((1.0 - 0.5) / 1.25).epsilon(1e-12));
  // Higher total, lower average: no adoption under the average rule.
  CHECK(adoption_probability(2.0, 3.0, 2, 6, avg) == 0.0);
  CHECK(adoption_probability(2.0, 1.0, 4, 1, avg) == doctest::Approx((1.0 - 0.5) / 1.25).epsilon(1e-12));
  CHECK(adoption_probability(0.0, 1.25 * 5, 3, 5, avg) == 1.0);
}

TEST_CASE("adoption probability stays in [0, 1] on reachable payoffs") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> b_dist(1.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_graph(rng);
    const auto s = random_strategies(g.node_count(), rng);
    for (auto rule : {UpdateRule::Accumulated, UpdateRule::Average}) {
      const GameParams params{b_dist(rng), rule};
      const auto p = accumulate_payoffs(g, s, params);
      for (NodeId x = 0; x < g.node_count(); ++x) {
        for (NodeId y : g.neighbors(x)) {
          const double w = adoption_probability(p[x], p[y], g.degree(x), g.degree(y), params);
          REQUIRE(w >= 0.0);
          REQUIRE(w <= 1.0);
          const double cmp_x = rule == UpdateRule::Average ? p[x] / g.degree(x) : p[x];
          const double cmp_y = rule == UpdateRule::Average ? p[y] / g.degree(y) : p[y];
          if (cmp_y <= cmp_x) REQUIRE(w == 0.0);
        }
      }
    }
  }
}

TEST_CASE("adoption probability is monotone in both payoffs") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const int kx = 2 + static_cast<int>(rng() % 20), ky = 2 + static_cast<int>(rng() % 20);
    const GameParams params{1.0 + u(rng), trial % 2 ? UpdateRule::Average : UpdateRule::Accumulated};
    const double px = u(rng) * params.b * kx, py = u(rng) * params.b * ky;
    const double base = adoption_probability(px, py, kx, ky, params);
    const double more_y = adoption_probability(px, std::min(py + 0.5, params.b * ky), kx, ky, params);
    const double more_x = adoption_probability(std::min(px + 0.5, params.b * kx), py, kx, ky, params);
    REQUIRE(more_y >= base);
    REQUIRE(more_x <= base);
  }
}

TEST_CASE("game parameter validation") {
  CHECK_THROWS_AS(validate(GameParams{0.9, UpdateRule::Accumulated}), ConfigError);
  CHECK_THROWS_AS(validate(GameParams{2.1, UpdateRule::Accumulated}), ConfigError);
  CHECK_NOTHROW(validate(GameParams{1.0, UpdateRule::Accumulated}));
  CHECK_FALSE(GameParams{1.0}.proper_pd());
  CHECK(GameParams{1.5}.proper_pd());
  CHECK(parse_update_rule("average") == UpdateRule::Average);
  CHECK(parse_update_rule("accumulated") == UpdateRule::Accumulated);
  CHECK_THROWS_AS(parse_update_rule("fermi"), ConfigError);
}
