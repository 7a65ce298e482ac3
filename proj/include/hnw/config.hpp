#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hnw/dynamics.hpp"
#include "hnw/game.hpp"
#include "hnw/sweep.hpp"

namespace YAML {
class Node;
}

namespace hnw {

enum class SweepKind { HubFraction, B, Grid, M, Heterogeneity };
std::string_view to_string(SweepKind kind) noexcept;
SweepKind parse_sweep_kind(std::string_view text);

enum class OutputFormat { Csv, Json };

/// Axes of a sweep. An unset axis falls back to the sweep kind's default; an
/// axis set to an empty list is a validation error.
struct SweepConfig {
  SweepKind kind = SweepKind::HubFraction;
  std::optional<std::vector<double>> b_values;
  /// Either explicit counts or fractions of N (rounded, clamped to [1, N]).
  std::optional<std::vector<int>> hub_values;
  std::optional<std::vector<double>> hub_fractions;
  int hub_log_points = 12;
  std::optional<std::vector<int>> m_values;
  std::optional<std::vector<UpdateRule>> rules;
  std::optional<std::vector<double>> initial_coop_values;
  double b_start = 1.0;
  double b_stop = 2.0;
  double b_step = 0.05;
  int realizations = 10;
  int runs = 10;
  unsigned workers = 0;
};

struct OutputConfig {
  std::string dir = "out";
  OutputFormat format = OutputFormat::Csv;
  bool trace = false;
};

/// Everything one invocation needs. Sections: network, game, protocol, sweep, output.
struct RunConfig {
  NetworkParams network;
  GameParams game;
  SimProtocol protocol;
  SweepConfig sweep;
  OutputConfig output;
};

/// Parses a YAML document. Unknown sections or keys are a ConfigError.
RunConfig config_from_yaml(const YAML::Node& root);
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
/// Effective config, loadable by parse_config.
std::string to_yaml(const RunConfig& config);

/// Checks every field against the library preconditions. Throws ConfigError.
void validate(const RunConfig& config);

// Axis resolution (defaults per sweep kind).
std::vector<double> resolve_b_values(const RunConfig& config);
std::vector<int> resolve_hub_values(const RunConfig& config);
std::vector<int> resolve_m_values(const RunConfig& config);
std::vector<UpdateRule> resolve_rules(const RunConfig& config);
std::vector<double> resolve_initial_coop_values(const RunConfig& config);

SweepSettings sweep_settings(const RunConfig& config);

}  // namespace hnw
