#include <doctest.h>

#include <filesystem>

#include "hnw/config.hpp"

using namespace hnw;

TEST_CASE("defaults match the reference setup") {
  const RunConfig c = parse_config("{}");
  CHECK(c.network.node_count == 2001);
  CHECK(c.network.ring_halfwidth == 2);
  CHECK(c.network.shortcut_count == 1000);
  CHECK(c.game.rule == UpdateRule::Accumulated);
  CHECK(c.protocol.transient_generations == 10000);
  CHECK(c.protocol.measure_generations == 2000);
  CHECK(c.protocol.initial_coop_fraction == 0.5);
  CHECK(c.sweep.realizations == 10);
  CHECK(c.sweep.runs == 10);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("sections parse") {
  const RunConfig c = parse_config(R"(
network: {N: 201, kappa: 3, Nh: 18, m: 100}
game: {b: 1.35, rule: average}
protocol:
  transient: 2000
  measure: 500
  initial_coop: 0.2
  seed: 99
  early_absorb_exit: false
sweep:
  type: grid
  b_values: [1.1, 1.2]
  Nh_values: [1, 10, 201]
  rules: [accumulated, average]
  initial_coop_values: [0.2, 0.8]
  realizations: 3
  runs: 4
  workers: 2
output: {dir: results, format: json, trace: true}
)");
  CHECK(c.network.node_count == 201);
  CHECK(c.network.ring_halfwidth == 3);
  CHECK(c.network.hub_count == 18);
  CHECK(c.game.b == 1.35);
  CHECK(c.game.rule == UpdateRule::Average);
  CHECK(c.protocol.transient_generations == 2000);
  CHECK(c.protocol.measure_generations == 500);
  CHECK(c.protocol.seed == 99);
  CHECK_FALSE(c.protocol.early_absorb_exit);
  CHECK(c.sweep.kind == SweepKind::Grid);
  CHECK(resolve_b_values(c) == std::vector<double>{1.1, 1.2});
  CHECK(resolve_hub_values(c) == std::vector<int>{1, 10, 201});
  CHECK(resolve_rules(c) == std::vector<UpdateRule>{UpdateRule::Accumulated, UpdateRule::Average});
  CHECK(resolve_initial_coop_values(c) == std::vector<double>{0.2, 0.8});
  CHECK(c.output.dir == "results");
  CHECK(c.output.format == OutputFormat::Json);
  CHECK(c.output.trace);

  const auto s = sweep_settings(c);
  CHECK(s.master_seed == 99);
  CHECK(s.replication.total() == 12);
  CHECK(s.workers == 2);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_AS(parse_config("network: {N: 201, hubs: 4}"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: {b: 1.2}"), ConfigError);
  CHECK_THROWS_AS(parse_config("game: {b: fast}"), ConfigError);
  CHECK_THROWS_AS(parse_config("game: {rule: fermi}"), ConfigError);
  CHECK_THROWS_AS(parse_config("sweep: {type: everything}"), ConfigError);
  CHECK_THROWS_AS(parse_config("sweep: {b_values: 1.2}"), ConfigError);
  CHECK_THROWS_AS(parse_config("output: {format: xml}"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("network: {N: [201"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("validation") {
  auto bad = [](const std::string& text) {
    const RunConfig c = parse_config(text);
    CHECK_THROWS_AS(validate(c), ConfigError);
  };
  bad("sweep: {b_values: []}");
  bad("sweep: {Nh_values: []}");
  bad("sweep: {rules: []}");
  bad("sweep: {Nh_values: [1], Nh_fractions: [0.5]}");
  bad("sweep: {Nh_fractions: [0.0]}");
  bad("sweep: {Nh_fractions: [1.5]}");
  bad("sweep: {Nh_log_points: 1}");
  bad("sweep: {runs: 0}");
  bad("sweep: {realizations: 70000}");
  bad("sweep: {type: b, b_start: 1.5, b_stop: 1.2}");
  bad("sweep: {type: b, b_step: 0}");
  bad("sweep: {b_values: [1.2, 2.5]}");
  bad("sweep: {initial_coop_values: [0.5, -0.1]}");
  bad("network: {Nh: 0}");
  bad("network: {Nh: 2002}");
  bad("network: {N: 4}");
  bad("network: {m: -1}");
  bad("network: {N: 11, kappa: 2, Nh: 1, m: 7}");
  bad("sweep: {type: m, m_values: [10, 100000]}");
  bad("game: {b: 0.5}");
  bad("protocol: {measure: 0}");
  bad("protocol: {initial_coop: 2}");
}

TEST_CASE("axis defaults per sweep kind") {
  RunConfig c = parse_config("network: {N: 201, Nh: 7, m: 100}\ngame: {b: 1.3}");
  CHECK(resolve_b_values(c) == std::vector<double>{1.3});
  CHECK(resolve_hub_values(c) == log_hub_grid(201, 12));
  CHECK(resolve_m_values(c) == std::vector<int>{100});

  c.sweep.kind = SweepKind::B;
  CHECK(resolve_b_values(c).size() == 21);
  CHECK(resolve_hub_values(c) == std::vector<int>{7});

  c.sweep.kind = SweepKind::M;
  CHECK(resolve_m_values(c) == std::vector<int>{80, 100, 120});

  c.sweep.hub_fractions = std::vector<double>{0.02, 0.5, 1.0, 0.0001};
  CHECK(resolve_hub_values(c) == std::vector<int>{4, 101, 201, 1});
}

TEST_CASE("effective config round-trips through YAML") {
  RunConfig c;
  c.network = {301, 3, 12, 150};
  c.game = {1.15, UpdateRule::Average};
  c.protocol.transient_generations = 123;
  c.protocol.measure_generations = 45;
  c.protocol.initial_coop_fraction = 0.3;
  c.protocol.seed = 18446744073709551615ULL;
  c.protocol.early_absorb_exit = false;
  c.sweep.kind = SweepKind::Heterogeneity;
  c.sweep.b_values = std::vector<double>{1.1, 1.7};
  c.sweep.hub_fractions = std::vector<double>{0.1, 1.0 / 3.0};
  c.sweep.m_values = std::vector<int>{0, 150};
  c.sweep.rules = std::vector<UpdateRule>{UpdateRule::Average};
  c.sweep.initial_coop_values = std::vector<double>{0.25};
  c.sweep.realizations = 7;
  c.sweep.runs = 2;
  c.sweep.workers = 3;
  c.output = {"elsewhere", OutputFormat::Json, true};

  const RunConfig back = parse_config(to_yaml(c));
  CHECK(back.network.node_count == 301);
  CHECK(back.network.ring_halfwidth == 3);
  CHECK(back.network.hub_count == 12);
  CHECK(back.network.shortcut_count == 150);
  CHECK(back.game.b == 1.15);
  CHECK(back.game.rule == UpdateRule::Average);
  CHECK(back.protocol.transient_generations == 123);
  CHECK(back.protocol.measure_generations == 45);
  CHECK(back.protocol.initial_coop_fraction == 0.3);
  CHECK(back.protocol.seed == c.protocol.seed);
  CHECK_FALSE(back.protocol.early_absorb_exit);
  CHECK(back.sweep.kind == SweepKind::Heterogeneity);
  CHECK(back.sweep.b_values == c.sweep.b_values);
  CHECK(back.sweep.hub_fractions == c.sweep.hub_fractions);
  CHECK_FALSE(back.sweep.hub_values);
  CHECK(back.sweep.m_values == c.sweep.m_values);
  CHECK(back.sweep.rules == c.sweep.rules);
  CHECK(back.sweep.initial_coop_values == c.sweep.initial_coop_values);
  CHECK(back.sweep.realizations == 7);
  CHECK(back.sweep.runs == 2);
  CHECK(back.sweep.workers == 3);
  CHECK(back.output.dir == "elsewhere");
  CHECK(back.output.format == OutputFormat::Json);
  CHECK(back.output.trace);
  CHECK(to_yaml(back) == to_yaml(c));
}

TEST_CASE("sweep kind names") {
  for (auto kind : {SweepKind::HubFraction, SweepKind::B, SweepKind::Grid, SweepKind::M, SweepKind::Heterogeneity}) {
    CHECK(parse_sweep_kind(to_string(kind)) == kind);
  }
  CHECK(to_string(SweepKind::HubFraction) == "hub-fraction");
  CHECK_THROWS_AS(parse_sweep_kind("nh"), ConfigError);
}

TEST_CASE("shipped configs validate") {
  int count = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(HNW_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(validate(load_config(entry.path().string())));
    ++count;
  }
  CHECK(count >= 8);
}
