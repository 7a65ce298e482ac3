#include "hnw/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hnw {

std::string_view to_string(SweepKind kind) noexcept {
  switch (kind) {
    case SweepKind::B: return "b";
    case SweepKind::Grid: return "grid";
    case SweepKind::M: return "m";
    case SweepKind::Heterogeneity: return "heterogeneity";
    case SweepKind::HubFraction: break;
  }
  return "hub-fraction";
}

SweepKind parse_sweep_kind(std::string_view text) {
  for (auto k : {SweepKind::HubFraction, SweepKind::B, SweepKind::Grid, SweepKind::M,
                 SweepKind::Heterogeneity}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown sweep type '" + std::string(text) +
                    "' (expected hub-fraction|b|grid|m|heterogeneity)");
}

namespace {

using Handler = std::function<void(const YAML::Node&)>;

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError("'" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(item, key));
  return out;
}

void parse_section(const YAML::Node& section, const std::string& name,
                   const std::map<std::string, Handler>& handlers) {
  if (!section.IsMap()) throw ConfigError("section '" + name + "' must be a mapping");
  for (const auto& entry : section) {
    const auto key = entry.first.as<std::string>();
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("unknown key '" + name + "." + key + "'");
    it->second(entry.second);
  }
}

}  // namespace

RunConfig config_from_yaml(const YAML::Node& root) {
  RunConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config document must be a mapping of sections");

  const std::map<std::string, Handler> network = {
      {"N", [&](const YAML::Node& n) { c.network.node_count = scalar<int>(n, "network.N"); }},
      {"kappa", [&](const YAML::Node& n) { c.network.ring_halfwidth = scalar<int>(n, "network.kappa"); }},
      {"Nh", [&](const YAML::Node& n) { c.network.hub_count = scalar<int>(n, "network.Nh"); }},
      {"m", [&](const YAML::Node& n) { c.network.shortcut_count = scalar<int>(n, "network.m"); }},
  };
  const std::map<std::string, Handler> game = {
      {"b", [&](const YAML::Node& n) { c.game.b = scalar<double>(n, "game.b"); }},
      {"rule", [&](const YAML::Node& n) { c.game.rule = parse_update_rule(scalar<std::string>(n, "game.rule")); }},
  };
  const std::map<std::string, Handler> protocol = {
      {"transient", [&](const YAML::Node& n) { c.protocol.transient_generations = scalar<int>(n, "protocol.transient"); }},
      {"measure", [&](const YAML::Node& n) { c.protocol.measure_generations = scalar<int>(n, "protocol.measure"); }},
      {"initial_coop", [&](const YAML::Node& n) { c.protocol.initial_coop_fraction = scalar<double>(n, "protocol.initial_coop"); }},
      {"seed", [&](const YAML::Node& n) { c.protocol.seed = scalar<std::uint64_t>(n, "protocol.seed"); }},
      {"early_absorb_exit", [&](const YAML::Node& n) { c.protocol.early_absorb_exit = scalar<bool>(n, "protocol.early_absorb_exit"); }},
  };
  const std::map<std::string, Handler> sweep = {
      {"type", [&](const YAML::Node& n) { c.sweep.kind = parse_sweep_kind(scalar<std::string>(n, "sweep.type")); }},
      {"b_values", [&](const YAML::Node& n) { c.sweep.b_values = list<double>(n, "sweep.b_values"); }},
      {"b_start", [&](const YAML::Node& n) { c.sweep.b_start = scalar<double>(n, "sweep.b_start"); }},
      {"b_stop", [&](const YAML::Node& n) { c.sweep.b_stop = scalar<double>(n, "sweep.b_stop"); }},
      {"b_step", [&](const YAML::Node& n) { c.sweep.b_step = scalar<double>(n, "sweep.b_step"); }},
      {"Nh_values", [&](const YAML::Node& n) { c.sweep.hub_values = list<int>(n, "sweep.Nh_values"); }},
      {"Nh_fractions", [&](const YAML::Node& n) { c.sweep.hub_fractions = list<double>(n, "sweep.Nh_fractions"); }},
      {"Nh_log_points", [&](const YAML::Node& n) { c.sweep.hub_log_points = scalar<int>(n, "sweep.Nh_log_points"); }},
      {"m_values", [&](const YAML::Node& n) { c.sweep.m_values = list<int>(n, "sweep.m_values"); }},
      {"rules", [&](const YAML::Node& n) {
         std::vector<UpdateRule> rules;
         for (const auto& r : list<std::string>(n, "sweep.rules")) rules.push_back(parse_update_rule(r));
         c.sweep.rules = rules;
       }},
      {"initial_coop_values", [&](const YAML::Node& n) { c.sweep.initial_coop_values = list<double>(n, "sweep.initial_coop_values"); }},
      {"realizations", [&](const YAML::Node& n) { c.sweep.realizations = scalar<int>(n, "sweep.realizations"); }},
      {"runs", [&](const YAML::Node& n) { c.sweep.runs = scalar<int>(n, "sweep.runs"); }},
      {"workers", [&](const YAML::Node& n) { c.sweep.workers = scalar<unsigned>(n, "sweep.workers"); }},
  };
  const std::map<std::string, Handler> output = {
      {"dir", [&](const YAML::Node& n) { c.output.dir = scalar<std::string>(n, "output.dir"); }},
      {"format", [&](const YAML::Node& n) {
         const auto f = scalar<std::string>(n, "output.format");
         if (f == "csv") c.output.format = OutputFormat::Csv;
         else if (f == "json") c.output.format = OutputFormat::Json;
         else throw ConfigError("output.format must be csv or json");
       }},
      {"trace", [&](const YAML::Node& n) { c.output.trace = scalar<bool>(n, "output.trace"); }},
  };
  const std::map<std::string, const std::map<std::string, Handler>*> sections = {
      {"network", &network}, {"game", &game}, {"protocol", &protocol}, {"sweep", &sweep}, {"output", &output},
  };

  for (const auto& entry : root) {
    const auto name = entry.first.as<std::string>();
    const auto it = sections.find(name);
    if (it == sections.end()) throw ConfigError("unknown config section '" + name + "'");
    if (entry.second.IsNull()) continue;
    parse_section(entry.second, name, *it->second);
  }
  return c;
}

RunConfig parse_config(const std::string& text) {
  try {
    return config_from_yaml(YAML::Load(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_yaml(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap
      << YAML::Key << "N" << YAML::Value << c.network.node_count
      << YAML::Key << "kappa" << YAML::Value << c.network.ring_halfwidth
      << YAML::Key << "Nh" << YAML::Value << c.network.hub_count
      << YAML::Key << "m" << YAML::Value << c.network.shortcut_count << YAML::EndMap;
  out << YAML::Key << "game" << YAML::Value << YAML::BeginMap
      << YAML::Key << "b" << YAML::Value << c.game.b
      << YAML::Key << "rule" << YAML::Value << std::string(to_string(c.game.rule)) << YAML::EndMap;
  out << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap
      << YAML::Key << "transient" << YAML::Value << c.protocol.transient_generations
      << YAML::Key << "measure" << YAML::Value << c.protocol.measure_generations
      << YAML::Key << "initial_coop" << YAML::Value << c.protocol.initial_coop_fraction
      << YAML::Key << "seed" << YAML::Value << c.protocol.seed
      << YAML::Key << "early_absorb_exit" << YAML::Value << c.protocol.early_absorb_exit << YAML::EndMap;

  const auto& s = c.sweep;
  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap
      << YAML::Key << "type" << YAML::Value << std::string(to_string(s.kind));
  if (s.b_values) out << YAML::Key << "b_values" << YAML::Value << YAML::Flow << *s.b_values;
  out << YAML::Key << "b_start" << YAML::Value << s.b_start
      << YAML::Key << "b_stop" << YAML::Value << s.b_stop
      << YAML::Key << "b_step" << YAML::Value << s.b_step;
  if (s.hub_values) out << YAML::Key << "Nh_values" << YAML::Value << YAML::Flow << *s.hub_values;
  if (s.hub_fractions) out << YAML::Key << "Nh_fractions" << YAML::Value << YAML::Flow << *s.hub_fractions;
  out << YAML::Key << "Nh_log_points" << YAML::Value << s.hub_log_points;
  if (s.m_values) out << YAML::Key << "m_values" << YAML::Value << YAML::Flow << *s.m_values;
  if (s.rules) {
    std::vector<std::string> names;
    for (auto r : *s.rules) names.emplace_back(to_string(r));
    out << YAML::Key << "rules" << YAML::Value << YAML::Flow << names;
  }
  if (s.initial_coop_values) {
    out << YAML::Key << "initial_coop_values" << YAML::Value << YAML::Flow << *s.initial_coop_values;
  }
  out << YAML::Key << "realizations" << YAML::Value << s.realizations
      << YAML::Key << "runs" << YAML::Value << s.runs
      << YAML::Key << "workers" << YAML::Value << s.workers << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap
      << YAML::Key << "dir" << YAML::Value << c.output.dir
      << YAML::Key << "format" << YAML::Value << (c.output.format == OutputFormat::Json ? "json" : "csv")
      << YAML::Key << "trace" << YAML::Value << c.output.trace << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<double> resolve_b_values(const RunConfig& c) {
  if (c.sweep.b_values) return *c.sweep.b_values;
  if (c.sweep.kind == SweepKind::B || c.sweep.kind == SweepKind::Grid) {
    return linear_grid(c.sweep.b_start, c.sweep.b_stop, c.sweep.b_step);
  }
  return {c.game.b};
}

std::vector<int> resolve_hub_values(const RunConfig& c) {
  const int n = c.network.node_count;
  if (c.sweep.hub_values) return *c.sweep.hub_values;
  if (c.sweep.hub_fractions) {
    std::vector<int> out;
    for (double f : *c.sweep.hub_fractions) {
      const int h = std::clamp(static_cast<int>(std::lround(f * n)), 1, n);
      if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
    }
    return out;
  }
  if (c.sweep.kind == SweepKind::B) return {c.network.hub_count};
  return log_hub_grid(n, c.sweep.hub_log_points);
}

std::vector<int> resolve_m_values(const RunConfig& c) {
  if (c.sweep.m_values) return *c.sweep.m_values;
  const int m = c.network.shortcut_count;
  if (c.sweep.kind == SweepKind::M) {
    return {static_cast<int>(std::lround(0.8 * m)), m, static_cast<int>(std::lround(1.2 * m))};
  }
  return {m};
}

std::vector<UpdateRule> resolve_rules(const RunConfig& c) {
  if (c.sweep.rules) return *c.sweep.rules;
  return {c.game.rule};
}

std::vector<double> resolve_initial_coop_values(const RunConfig& c) {
  if (c.sweep.initial_coop_values) return *c.sweep.initial_coop_values;
  return {c.protocol.initial_coop_fraction};
}

SweepSettings sweep_settings(const RunConfig& c) {
  SweepSettings s;
  s.protocol = c.protocol;
  s.replication = {c.sweep.realizations, c.sweep.runs};
  s.master_seed = c.protocol.seed;
  s.workers = c.sweep.workers;
  return s;
}

void validate(const RunConfig& c) {
  validate(c.network);
  validate(c.game);
  validate(c.protocol);

  const auto& s = c.sweep;
  auto non_empty = [](const auto& axis, const char* name) {
    if (axis && axis->empty()) throw ConfigError(std::string("sweep.") + name + " is empty");
  };
  non_empty(s.b_values, "b_values");
  non_empty(s.hub_values, "Nh_values");
  non_empty(s.hub_fractions, "Nh_fractions");
  non_empty(s.m_values, "m_values");
  non_empty(s.rules, "rules");
  non_empty(s.initial_coop_values, "initial_coop_values");
  if (s.hub_values && s.hub_fractions) throw ConfigError("set at most one of sweep.Nh_values and sweep.Nh_fractions");
  if (s.hub_log_points < 2) throw ConfigError("sweep.Nh_log_points must be >= 2");
  if (s.realizations < 1 || s.runs < 1) throw ConfigError("sweep.realizations and sweep.runs must be >= 1");
  if (s.realizations > kMaxReplicateIndex + 1 || s.runs > kMaxReplicateIndex + 1) {
    throw ConfigError("sweep.realizations and sweep.runs must be <= " + std::to_string(kMaxReplicateIndex + 1));
  }
  if (!s.b_values && (s.kind == SweepKind::B || s.kind == SweepKind::Grid)) {
    if (!(s.b_step > 0.0) || s.b_stop < s.b_start) throw ConfigError("sweep b range needs b_step > 0 and b_stop >= b_start");
  }
  if (s.hub_fractions) {
    for (double f : *s.hub_fractions) {
      if (!(f > 0.0 && f <= 1.0)) throw ConfigError("sweep.Nh_fractions entries must lie in (0, 1]");
    }
  }

  // Every grid point must pass the same checks as a single run.
  for (double b : resolve_b_values(c)) validate(GameParams{b, c.game.rule});
  for (double rho : resolve_initial_coop_values(c)) {
    SimProtocol p = c.protocol;
    p.initial_coop_fraction = rho;
    validate(p);
  }
  for (int m : resolve_m_values(c)) {
    for (int h : resolve_hub_values(c)) {
      NetworkParams net = c.network;
      net.shortcut_count = m;
      net.hub_count = h;
      validate(net);
    }
  }
}

}  // namespace hnw
