#include "hnw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>

#include "hnw/config.hpp"
#include "hnw/dynamics.hpp"
#include "hnw/graph.hpp"
#include "hnw/sweep.hpp"

namespace hnw {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

/// Flag values; applied to the loaded config only when given on the command line.
struct Overrides {
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  template <typename T, typename Apply>
  void add(CLI::App* app, const std::string& flag, const std::string& help, Apply apply) {
    auto value = std::make_shared<T>();
    auto* opt = app->add_option(flag, *value, help);
    setters.emplace_back(opt, [value, apply](RunConfig& c) { apply(c, *value); });
  }

  RunConfig effective() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [opt, apply] : setters) {
      if (opt->count() > 0) apply(c);
    }
    return c;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "YAML config file (sections network, game, protocol, sweep, output)");
  o.add<std::uint64_t>(app, "--seed", "master seed", [](RunConfig& c, auto v) { c.protocol.seed = v; });
  o.add<std::string>(app, "--out", "output directory", [](RunConfig& c, auto v) { c.output.dir = v; });
  o.add<unsigned>(app, "--workers", "worker threads (0 = all cores)", [](RunConfig& c, auto v) { c.sweep.workers = v; });
  o.add<std::string>(app, "--format", "csv|json", [](RunConfig& c, const std::string& v) {
    if (v == "csv") c.output.format = OutputFormat::Csv;
    else if (v == "json") c.output.format = OutputFormat::Json;
    else throw ConfigError("--format must be csv or json");
  });
  o.add<int>(app, "--N", "network.N", [](RunConfig& c, auto v) { c.network.node_count = v; });
  o.add<int>(app, "--kappa", "network.kappa", [](RunConfig& c, auto v) { c.network.ring_halfwidth = v; });
  o.add<int>(app, "--Nh", "network.Nh", [](RunConfig& c, auto v) { c.network.hub_count = v; });
  o.add<int>(app, "--m", "network.m", [](RunConfig& c, auto v) { c.network.shortcut_count = v; });
  o.add<double>(app, "--b", "game.b", [](RunConfig& c, auto v) { c.game.b = v; });
  o.add<std::string>(app, "--rule", "game.rule (accumulated|average)",
                     [](RunConfig& c, const std::string& v) { c.game.rule = parse_update_rule(v); });
  o.add<int>(app, "--transient", "protocol.transient", [](RunConfig& c, auto v) { c.protocol.transient_generations = v; });
  o.add<int>(app, "--measure", "protocol.measure", [](RunConfig& c, auto v) { c.protocol.measure_generations = v; });
  o.add<double>(app, "--initial_coop", "protocol.initial_coop",
                [](RunConfig& c, auto v) { c.protocol.initial_coop_fraction = v; });
  o.add<bool>(app, "--early_absorb_exit", "protocol.early_absorb_exit (true|false)",
              [](RunConfig& c, auto v) { c.protocol.early_absorb_exit = v; });
  o.add<bool>(app, "--trace", "output.trace (true|false)", [](RunConfig& c, auto v) { c.output.trace = v; });
  o.add<std::string>(app, "--type", "sweep.type (hub-fraction|b|grid|m|heterogeneity)",
                     [](RunConfig& c, const std::string& v) { c.sweep.kind = parse_sweep_kind(v); });
  o.add<std::vector<double>>(app, "--b_values", "sweep.b_values", [](RunConfig& c, auto v) { c.sweep.b_values = v; });
  o.add<double>(app, "--b_start", "sweep.b_start", [](RunConfig& c, auto v) { c.sweep.b_start = v; });
  o.add<double>(app, "--b_stop", "sweep.b_stop", [](RunConfig& c, auto v) { c.sweep.b_stop = v; });
  o.add<double>(app, "--b_step", "sweep.b_step", [](RunConfig& c, auto v) { c.sweep.b_step = v; });
  o.add<std::vector<int>>(app, "--Nh_values", "sweep.Nh_values", [](RunConfig& c, auto v) { c.sweep.hub_values = v; });
  o.add<std::vector<double>>(app, "--Nh_fractions", "sweep.Nh_fractions",
                             [](RunConfig& c, auto v) { c.sweep.hub_fractions = v; });
  o.add<int>(app, "--Nh_log_points", "sweep.Nh_log_points", [](RunConfig& c, auto v) { c.sweep.hub_log_points = v; });
  o.add<std::vector<int>>(app, "--m_values", "sweep.m_values", [](RunConfig& c, auto v) { c.sweep.m_values = v; });
  o.add<std::vector<std::string>>(app, "--rules", "sweep.rules", [](RunConfig& c, const std::vector<std::string>& v) {
    std::vector<UpdateRule> rules;
    for (const auto& r : v) rules.push_back(parse_update_rule(r));
    c.sweep.rules = rules;
  });
  o.add<std::vector<double>>(app, "--initial_coop_values", "sweep.initial_coop_values",
                             [](RunConfig& c, auto v) { c.sweep.initial_coop_values = v; });
  o.add<int>(app, "--realizations", "sweep.realizations", [](RunConfig& c, auto v) { c.sweep.realizations = v; });
  o.add<int>(app, "--runs", "sweep.runs", [](RunConfig& c, auto v) { c.sweep.runs = v; });

  for (auto* opt : app->get_options()) {
    if (opt->get_items_expected_max() > 1) opt->delimiter(',');
  }
}

fs::path prepare_output(const RunConfig& c) {
  const fs::path dir(c.output.dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.yaml") << to_yaml(c);
  return dir;
}

void warn_improper(const GameParams& g, std::ostream& err) {
  if (!g.proper_pd()) err << "warning: b=" << format_number(g.b) << " is not a proper PD game (need 1 < b < 2)\n";
}

json stats_json(const Graph& g, const DegreeStats& s) {
  json hist = json::object();
  for (const auto& [k, count] : s.histogram) hist[std::to_string(k)] = count;
  return {{"N", g.node_count()},        {"kappa", g.ring_halfwidth()}, {"Nh", g.hub_count()},
          {"m", g.shortcut_count()},    {"mean_degree", s.mean_degree}, {"paper_h", s.paper_h},
          {"variance", s.variance},     {"histogram", hist}};
}

void print_stats(const Graph& g, const DegreeStats& s, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    out << stats_json(g, s).dump(2) << '\n';
    return;
  }
  out << "N=" << g.node_count() << " kappa=" << g.ring_halfwidth() << " Nh=" << g.hub_count()
      << " m=" << g.shortcut_count() << '\n'
      << "mean_degree=" << format_number(s.mean_degree) << " paper_h=" << format_number(s.paper_h)
      << " variance=" << format_number(s.variance) << '\n';
}

Graph build_graph(const RunConfig& c) {
  std::mt19937_64 rng(topology_seed(c.protocol.seed, 0, 0));
  const auto& n = c.network;
  return generate_hnw(n.node_count, n.ring_halfwidth, n.hub_count, n.shortcut_count, rng);
}

int cmd_generate(const RunConfig& c, std::ostream& out) {
  validate(c.network);
  const Graph g = build_graph(c);
  const auto dir = prepare_output(c);
  std::ofstream file(dir / "graph.edgelist");
  write_edge_list(g, file);
  print_stats(g, degree_stats(g), c.output.format, out);
  return kExitOk;
}

int cmd_run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c.network);
  validate(c.game);
  validate(c.protocol);
  warn_improper(c.game, err);
  const Graph g = build_graph(c);
  SimProtocol proto = c.protocol;
  proto.seed = derive_seed(c.protocol.seed, 0, 0, 0);
  proto.record_trace = c.output.trace;
  const SimResult r = run_simulation(g, c.game, proto);

  const auto dir = prepare_output(c);
  if (c.output.trace) {
    std::ofstream trace(dir / "trace.csv");
    write_trace(r, trace);
  }
  const json result = {{"rho_c", r.mean_coop_frequency},
                       {"absorbed", std::string(to_string(r.absorbed))},
                       {"generations", r.generations_executed},
                       {"proper_pd", c.game.proper_pd()}};
  std::ofstream(dir / "result.json") << result.dump(2) << '\n';

  if (c.output.format == OutputFormat::Json) {
    out << result.dump(2) << '\n';
  } else {
    out << "rho_c=" << format_number(r.mean_coop_frequency) << " absorbed=" << to_string(r.absorbed)
        << " generations=" << r.generations_executed << '\n';
  }
  return kExitOk;
}

std::vector<PointSpec> sweep_points(const RunConfig& c) {
  const auto b_values = resolve_b_values(c);
  const auto hubs = resolve_hub_values(c);
  std::vector<PointSpec> points;
  for (auto rule : resolve_rules(c)) {
    for (double rho : resolve_initial_coop_values(c)) {
      for (int m : resolve_m_values(c)) {
        PointSpec base{c.network, GameParams{c.game.b, rule}, rho};
        base.network.shortcut_count = m;
        const bool hubs_outer = c.sweep.kind == SweepKind::B;
        for (std::size_t i = 0; i < (hubs_outer ? hubs.size() : b_values.size()); ++i) {
          for (std::size_t j = 0; j < (hubs_outer ? b_values.size() : hubs.size()); ++j) {
            PointSpec p = base;
            p.network.hub_count = hubs_outer ? hubs[i] : hubs[j];
            p.game.b = hubs_outer ? b_values[j] : b_values[i];
            points.push_back(p);
          }
        }
      }
    }
  }
  return points;
}

void write_grid_matrices(const RunConfig& c, const std::vector<PointSpec>& points, const SweepOutput& res,
                         const fs::path& dir) {
  const auto b_values = resolve_b_values(c);
  const auto hubs = resolve_hub_values(c);
  const std::size_t cell_count = b_values.size() * hubs.size();
  const std::size_t blocks = points.size() / cell_count;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const auto& first = points[blk * cell_count];
    std::string name = "grid_matrix";
    if (blocks > 1) {
      name += "_" + std::string(to_string(first.game.rule)) + "_init" + format_number(first.initial_coop_fraction) +
              "_m" + std::to_string(first.network.shortcut_count);
    }
    std::ofstream f(dir / (name + ".csv"));
    f << "b";
    for (int h : hubs) f << ",N_h=" << h;
    f << '\n';
    for (std::size_t i = 0; i < b_values.size(); ++i) {
      f << format_number(b_values[i]);
      for (std::size_t j = 0; j < hubs.size(); ++j) {
        const std::size_t k = blk * cell_count + i * hubs.size() + j;
        f << ',' << (res.completed[k] ? format_number(res.records[k].mean) : std::string("nan"));
      }
      f << '\n';
    }
  }
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  validate(c);
  const auto dir = prepare_output(c);

  if (c.sweep.kind == SweepKind::Heterogeneity) {
    std::ofstream f(dir / "heterogeneity.csv");
    bool header = true;
    for (int m : resolve_m_values(c)) {
      NetworkParams net = c.network;
      net.shortcut_count = m;
      const auto curve = heterogeneity_curve(net, resolve_hub_values(c), c.sweep.realizations, c.protocol.seed);
      std::ostringstream block;
      write_heterogeneity_csv(net, curve, block);
      std::string text = block.str();
      if (!header) text = text.substr(text.find('\n') + 1);
      header = false;
      f << text;
    }
    out << "wrote " << (dir / "heterogeneity.csv").string() << '\n';
    return kExitOk;
  }

  const auto points = sweep_points(c);
  for (const auto& p : points) {
    if (!p.game.proper_pd()) {
      warn_improper(p.game, err);
      break;
    }
  }
  const SweepOutput res = run_points(points, sweep_settings(c));

  std::vector<SweepRecord> done;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (res.completed[i]) done.push_back(res.records[i]);
  }
  const auto inits = resolve_initial_coop_values(c);
  if (inits.size() == 1) {
    std::ofstream f(dir / "results.csv");
    write_records_csv(done, f);
  } else {
    for (double rho : inits) {
      std::vector<SweepRecord> subset;
      for (const auto& r : done) {
        if (r.point.initial_coop_fraction == rho) subset.push_back(r);
      }
      std::ofstream f(dir / ("results_init" + format_number(rho) + ".csv"));
      write_records_csv(subset, f);
    }
  }
  {
    std::ofstream f(dir / "runs.csv");
    write_runs_csv(points, res.runs, f);
  }
  if (c.sweep.kind == SweepKind::Grid) write_grid_matrices(c, points, res, dir);

  json manifest = {{"points", points.size()}, {"completed", json::array()}, {"error", nullptr}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (res.completed[i]) manifest["completed"].push_back(i);
  }
  if (res.error) manifest["error"] = *res.error;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

  if (c.output.format == OutputFormat::Json) {
    json records = json::array();
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!res.completed[i]) continue;
      const auto& r = res.records[i];
      json raw = json::array();
      for (; cursor < res.runs.size() && res.runs[cursor].point == i; ++cursor) {
        raw.push_back(res.runs[cursor].coop_frequency);
      }
      records.push_back({{"b", r.point.game.b},
                         {"N_h", r.point.network.hub_count},
                         {"N", r.point.network.node_count},
                         {"kappa", r.point.network.ring_halfwidth},
                         {"m", r.point.network.shortcut_count},
                         {"rule", std::string(to_string(r.point.game.rule))},
                         {"initial_coop", r.point.initial_coop_fraction},
                         {"rho_c_mean", r.mean},
                         {"rho_c_std", r.std_dev},
                         {"rho_c_stderr", r.std_error},
                         {"n_replicates", r.replicates},
                         {"absorbed_fraction", r.absorbed_fraction},
                         {"proper_pd", r.point.game.proper_pd()},
                         {"raw_rho_c", raw}});
    }
    std::ofstream(dir / "results.json") << json{{"sweep", std::string(to_string(c.sweep.kind))},
                                                {"master_seed", c.protocol.seed},
                                                {"records", records}}
                                               .dump(2)
                                        << '\n';
  }

  if (!res.ok()) {
    err << "error: sweep aborted: " << *res.error << " (partial results kept in " << dir.string() << ")\n";
    return kExitRuntime;
  }
  out << "wrote " << done.size() << " records to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_stats(const std::string& path, OutputFormat format, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list '" + path + "'");
  const Graph g = read_edge_list(in);
  print_stats(g, degree_stats(g), format, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evolutionary Prisoner's Dilemma on heterogeneous Newman-Watts networks"};
  app.require_subcommand(1);

  Overrides gen_o, run_o, sweep_o;
  auto* gen = app.add_subcommand("generate", "generate an HNW graph, write its edge list and print degree stats");
  add_common(gen, gen_o);
  auto* run = app.add_subcommand("run", "run one simulation and print the equilibrium cooperator frequency");
  add_common(run, run_o);
  auto* sweep = app.add_subcommand("sweep", "run a replicated parameter sweep and write CSV results");
  add_common(sweep, sweep_o);
  auto* stats = app.add_subcommand("stats", "print degree statistics of an edge-list file");
  std::string stats_path;
  std::string stats_format = "csv";
  stats->add_option("file", stats_path, "edge-list file")->required();
  stats->add_option("--format", stats_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*gen) return cmd_generate(gen_o.effective(), out);
    if (*run) return cmd_run(run_o.effective(), out, err);
    if (*sweep) return cmd_sweep(sweep_o.effective(), out, err);
    return cmd_stats(stats_path, stats_format == "json" ? OutputFormat::Json : OutputFormat::Csv, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace hnw
