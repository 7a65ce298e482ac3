#include "hnw/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include "hnw/random.hpp"

namespace hnw {

void validate(const NetworkParams& net) {
  if (net.ring_halfwidth < 1) throw ConfigError("kappa must be >= 1");
  if (net.node_count < 2 * net.ring_halfwidth + 1) throw ConfigError("N must be >= 2*kappa+1");
  if (net.hub_count < 1 || net.hub_count > net.node_count) {
    throw ConfigError("N_h must lie in [1, N], got " + std::to_string(net.hub_count));
  }
  if (net.shortcut_count < 0) throw ConfigError("m must be >= 0");
  // Every shortcut touches a hub, and a hub has at most N-1-2*kappa non-ring partners.
  const std::int64_t bound =
      static_cast<std::int64_t>(net.hub_count) * (net.node_count - 1 - 2 * net.ring_halfwidth);
  if (net.shortcut_count > bound) {
    throw ConfigError("infeasible m=" + std::to_string(net.shortcut_count) + " for N_h=" +
                      std::to_string(net.hub_count) + " (at most " + std::to_string(bound) + ")");
  }
}

std::uint64_t derive_seed(std::uint64_t master_seed, int realization, int run, std::uint32_t point) {
  const std::uint64_t key = (static_cast<std::uint64_t>(point) << 32) |
                            (static_cast<std::uint64_t>(realization & 0xFFFF) << 16) |
                            static_cast<std::uint64_t>(run & 0xFFFF);
  return mix64(mix64(master_seed) ^ key);
}

std::uint64_t topology_seed(std::uint64_t master_seed, int realization, std::uint32_t point) {
  return derive_seed(master_seed, realization, kTopologyStream, point);
}

SweepRecord aggregate(const PointSpec& point, std::span<const RunRecord> runs) {
  SweepRecord rec;
  rec.point = point;
  rec.replicates = static_cast<int>(runs.size());
  if (runs.empty()) return rec;

  double sum = 0.0;
  int absorbed = 0;
  for (const auto& r : runs) {
    sum += r.coop_frequency;
    if (r.absorbed != Absorbed::None) ++absorbed;
  }
  const double n = static_cast<double>(runs.size());
  rec.mean = sum / n;
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.coop_frequency - rec.mean) * (r.coop_frequency - rec.mean);
    rec.std_dev = std::sqrt(ss / (n - 1.0));
  }
  rec.std_error = rec.std_dev / std::sqrt(n);
  rec.absorbed_fraction = absorbed / n;
  return rec;
}

namespace {

// Builds the realization's graph and fills `out` (one slot per run).
void run_realization(const PointSpec& point, std::uint32_t point_index, int realization,
                     const SweepSettings& settings, std::span<RunRecord> out) {
  std::mt19937_64 graph_rng(topology_seed(settings.master_seed, realization, point_index));
  const NetworkParams& net = point.network;
  const Graph g = generate_hnw(net.node_count, net.ring_halfwidth, net.hub_count,
                               net.shortcut_count, graph_rng);
  for (std::size_t run = 0; run < out.size(); ++run) {
    SimProtocol proto = settings.protocol;
    proto.initial_coop_fraction = point.initial_coop_fraction;
    proto.record_trace = false;
    proto.seed = derive_seed(settings.master_seed, realization, static_cast<int>(run), point_index);
    const SimResult res = run_simulation(g, point.game, proto);
    out[run] = RunRecord{point_index, realization, static_cast<int>(run), proto.seed,
                         res.mean_coop_frequency, res.absorbed, res.generations_executed};
  }
}

void check_replication(const Replication& rep) {
  if (rep.realizations < 1 || rep.runs < 1) throw ConfigError("replicate counts must be >= 1");
  if (rep.realizations > kMaxReplicateIndex + 1 || rep.runs > kMaxReplicateIndex + 1) {
    throw ConfigError("replicate counts must be <= " + std::to_string(kMaxReplicateIndex + 1));
  }
}

}  // namespace

SweepOutput run_points(std::span<const PointSpec> points, const SweepSettings& settings) {
  const auto& rep = settings.replication;
  check_replication(rep);
  if (points.empty()) throw ConfigError("sweep has no parameter points");
  validate(settings.protocol);
  for (const auto& p : points) {
    validate(p.network);
    validate(p.game);
    SimProtocol proto = settings.protocol;
    proto.initial_coop_fraction = p.initial_coop_fraction;
    validate(proto);
  }

  // One job per (point, realization): build the graph, then all runs on it.
  const std::size_t jobs = points.size() * static_cast<std::size_t>(rep.realizations);
  std::vector<RunRecord> runs(jobs * rep.runs);
  std::vector<char> job_done(jobs, 0);
  std::vector<std::string> job_error(jobs);
  std::atomic<std::size_t> next_job{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t job = next_job.fetch_add(1);
      if (job >= jobs) return;
      const auto point_index = static_cast<std::uint32_t>(job / rep.realizations);
      const int realization = static_cast<int>(job % rep.realizations);
      const PointSpec& point = points[point_index];
      try {
        run_realization(point, point_index, realization, settings,
                        std::span(runs.data() + job * rep.runs, rep.runs));
        job_done[job] = 1;
      } catch (const std::exception& e) {
        job_error[job] = e.what();
        stop.store(true);
      }
    }
  };

  unsigned workers = settings.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                           : settings.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  SweepOutput out;
  out.records.resize(points.size());
  out.completed.assign(points.size(), false);
  for (std::size_t job = 0; job < jobs; ++job) {
    if (!job_error[job].empty()) {
      const auto p = job / rep.realizations;
      out.error = "point " + std::to_string(p) + " realization " +
                  std::to_string(job % rep.realizations) + ": " + job_error[job];
      break;
    }
  }
  for (std::size_t p = 0; p < points.size(); ++p) {
    bool all = true;
    for (int r = 0; r < rep.realizations; ++r) all = all && job_done[p * rep.realizations + r];
    if (!all) {
      out.records[p].point = points[p];
      continue;
    }
    out.completed[p] = true;
    const std::span<const RunRecord> mine(runs.data() + p * rep.total(), rep.total());
    out.records[p] = aggregate(points[p], mine);
    out.runs.insert(out.runs.end(), mine.begin(), mine.end());
  }
  return out;
}

SweepOutput run_point(const PointSpec& point, const SweepSettings& settings, std::uint32_t point_index) {
  const auto& rep = settings.replication;
  check_replication(rep);
  validate(settings.protocol);
  validate(point.network);
  validate(point.game);

  std::vector<RunRecord> runs(rep.total());
  for (int r = 0; r < rep.realizations; ++r) {
    run_realization(point, point_index, r, settings, std::span(runs.data() + r * rep.runs, rep.runs));
  }
  SweepOutput out;
  out.records.push_back(aggregate(point, runs));
  out.runs = std::move(runs);
  out.completed.push_back(true);
  return out;
}

std::vector<int> log_hub_grid(int node_count, int min_points) {
  if (node_count < 1) throw ConfigError("N must be >= 1");
  const int target = std::min(min_points, node_count);
  std::set<int> grid;
  for (int samples = std::max(target, 2); ; ++samples) {
    grid.clear();
    for (int i = 0; i < samples; ++i) {
      const double exponent = static_cast<double>(i) / (samples - 1);
      grid.insert(static_cast<int>(std::lround(std::pow(static_cast<double>(node_count), exponent))));
    }
    grid.insert(1);
    grid.insert(node_count);
    if (static_cast<int>(grid.size()) >= target || samples > 4 * node_count) break;
  }
  return {grid.begin(), grid.end()};
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be > 0");
  if (stop < start) throw ConfigError("grid stop must be >= start");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
  for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<PointSpec> hub_fraction_points(const PointSpec& base, std::span<const int> hub_counts,
                                           std::span<const double> b_values) {
  std::vector<PointSpec> points;
  for (double b : b_values) {
    for (int h : hub_counts) {
      PointSpec p = base;
      p.game.b = b;
      p.network.hub_count = h;
      points.push_back(p);
    }
  }
  return points;
}

SweepOutput sweep_hub_fraction(const PointSpec& base, std::span<const int> hub_counts,
                               const SweepSettings& settings) {
  const double b[] = {base.game.b};
  return run_points(hub_fraction_points(base, hub_counts, b), settings);
}

SweepOutput sweep_b(const PointSpec& base, std::span<const double> b_values,
                    std::span<const int> hub_counts, const SweepSettings& settings) {
  std::vector<PointSpec> points;
  for (int h : hub_counts) {
    for (double b : b_values) {
      PointSpec p = base;
      p.game.b = b;
      p.network.hub_count = h;
      points.push_back(p);
    }
  }
  return run_points(points, settings);
}

SweepOutput sweep_m(const PointSpec& base, std::span<const int> shortcut_counts,
                    std::span<const int> hub_counts, const SweepSettings& settings) {
  std::vector<PointSpec> points;
  for (int m : shortcut_counts) {
    for (int h : hub_counts) {
      PointSpec p = base;
      p.network.shortcut_count = m;
      p.network.hub_count = h;
      points.push_back(p);
    }
  }
  return run_points(points, settings);
}

SweepGrid sweep_grid(const PointSpec& base, std::span<const double> b_values,
                     std::span<const int> hub_counts, const SweepSettings& settings) {
  if (b_values.empty() || hub_counts.empty()) throw ConfigError("grid axes must be non-empty");
  SweepGrid grid;
  grid.b_values.assign(b_values.begin(), b_values.end());
  grid.hub_counts.assign(hub_counts.begin(), hub_counts.end());
  grid.output = run_points(hub_fraction_points(base, hub_counts, b_values), settings);
  return grid;
}

std::vector<HeterogeneityPoint> heterogeneity_curve(const NetworkParams& net, std::span<const int> hub_counts,
                                                    int realizations, std::uint64_t master_seed) {
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (hub_counts.empty()) throw ConfigError("hub grid must be non-empty");
  std::vector<HeterogeneityPoint> curve;
  for (std::size_t i = 0; i < hub_counts.size(); ++i) {
    NetworkParams p = net;
    p.hub_count = hub_counts[i];
    validate(p);
    HeterogeneityPoint pt;
    pt.hub_count = p.hub_count;
    pt.hub_fraction = static_cast<double>(p.hub_count) / p.node_count;
    pt.realizations = realizations;
    for (int r = 0; r < realizations; ++r) {
      std::mt19937_64 rng(topology_seed(master_seed, r, static_cast<std::uint32_t>(i)));
      const Graph g = generate_hnw(p.node_count, p.ring_halfwidth, p.hub_count, p.shortcut_count, rng);
      const DegreeStats s = degree_stats(g);
      pt.mean_degree += s.mean_degree;
      pt.paper_h += s.paper_h;
      pt.variance += s.variance;
    }
    pt.mean_degree /= realizations;
    pt.paper_h /= realizations;
    pt.variance /= realizations;
    curve.push_back(pt);
  }
  return curve;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_records_csv(std::span<const SweepRecord> records, std::ostream& out) {
  out << kRecordCsvHeader << '\n';
  for (const auto& r : records) {
    const auto& net = r.point.network;
    out << format_number(r.point.game.b) << ',' << net.hub_count << ',' << net.node_count << ','
        << net.ring_halfwidth << ',' << net.shortcut_count << ',' << to_string(r.point.game.rule) << ','
        << format_number(r.mean) << ',' << format_number(r.std_dev) << ',' << format_number(r.std_error)
        << ',' << r.replicates << ',' << format_number(r.absorbed_fraction) << '\n';
  }
}

void write_runs_csv(std::span<const PointSpec> points, std::span<const RunRecord> runs, std::ostream& out) {
  out << "point,b,N_h,m,rule,initial_coop,realization,run,seed,rho_c,absorbed,generations\n";
  char buf[40];
  for (const auto& r : runs) {
    const auto& p = points[r.point];
    std::snprintf(buf, sizeof buf, "%.17g", r.coop_frequency);
    out << r.point << ',' << format_number(p.game.b) << ',' << p.network.hub_count << ','
        << p.network.shortcut_count << ',' << to_string(p.game.rule) << ','
        << format_number(p.initial_coop_fraction) << ',' << r.realization << ',' << r.run << ','
        << r.seed << ',' << buf << ',' << to_string(r.absorbed) << ',' << r.generations << '\n';
  }
}

void write_heterogeneity_csv(const NetworkParams& net, std::span<const HeterogeneityPoint> curve,
                             std::ostream& out) {
  out << "N_h_fraction,N_h,N,kappa,m,mean_degree,paper_h,variance,n_realizations\n";
  for (const auto& p : curve) {
    out << format_number(p.hub_fraction) << ',' << p.hub_count << ',' << net.node_count << ','
        << net.ring_halfwidth << ',' << net.shortcut_count << ',' << format_number(p.mean_degree) << ','
        << format_number(p.paper_h) << ',' << format_number(p.variance) << ',' << p.realizations << '\n';
  }
}

}  // namespace hnw
