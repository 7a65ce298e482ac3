#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hnw/dynamics.hpp"
#include "hnw/game.hpp"

namespace hnw {

struct NetworkParams {
  int node_count = 2001;
  int ring_halfwidth = 2;
  int hub_count = 41;
  int shortcut_count = 1000;

  /// 2*kappa + 2*m/N.
  double mean_degree() const noexcept {
    return 2.0 * ring_halfwidth + 2.0 * shortcut_count / node_count;
  }
};

/// Throws ConfigError on parameters generate_hnw would reject up front.
void validate(const NetworkParams& net);

/// One parameter point of an experiment.
struct PointSpec {
  NetworkParams network;
  GameParams game;
  double initial_coop_fraction = 0.5;
};

struct Replication {
  int realizations = 10;  ///< independent graphs per point
  int runs = 10;          ///< dynamics runs per graph
  int total() const noexcept { return realizations * runs; }
};

struct SweepSettings {
  /// `seed` and `initial_coop_fraction` are overridden per run / per point.
  SimProtocol protocol;
  Replication replication;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;  ///< 0 means hardware concurrency
};

// Seed layout: the point index fills the high 32 bits, realization and run the
// next two 16-bit fields. For a fixed master seed the map is injective.
inline constexpr int kMaxReplicateIndex = 0xFFFE;
/// Run index reserved for the topology stream of a realization.
inline constexpr int kTopologyStream = 0xFFFF;

/// mix64(mix64(master) ^ (point << 32 | realization << 16 | run)).
std::uint64_t derive_seed(std::uint64_t master_seed, int realization, int run, std::uint32_t point);
/// Seed of the graph shared by all runs of one realization.
std::uint64_t topology_seed(std::uint64_t master_seed, int realization, std::uint32_t point);

struct RunRecord {
  std::uint32_t point = 0;
  int realization = 0;
  int run = 0;
  std::uint64_t seed = 0;
  double coop_frequency = 0.0;
  Absorbed absorbed = Absorbed::None;
  int generations = 0;
};

struct SweepRecord {
  PointSpec point;
  double mean = 0.0;
  double std_dev = 0.0;  ///< sample standard deviation (n-1)
  double std_error = 0.0;
  int replicates = 0;
  double absorbed_fraction = 0.0;
};

struct SweepOutput {
  std::vector<SweepRecord> records;  ///< indexed like the input points
  std::vector<RunRecord> runs;       ///< ordered by (point, realization, run)
  std::vector<bool> completed;       ///< per point
  std::optional<std::string> error;  ///< first failure; later points were not started

  bool ok() const noexcept { return !error.has_value(); }
};

/// Runs every point with the full replication. Output is a deterministic function
/// of (points, settings) independent of the worker count. A failing point stops
/// further scheduling; finished points stay in the output.
SweepOutput run_points(std::span<const PointSpec> points, const SweepSettings& settings);

/// Single point, treated as point index `point_index` for seeding.
SweepOutput run_point(const PointSpec& point, const SweepSettings& settings, std::uint32_t point_index = 0);

/// Aggregates per-run values (mean, sample std, standard error).
SweepRecord aggregate(const PointSpec& point, std::span<const RunRecord> runs);

/// Distinct hub counts, geometric in N_h/N, containing 1 and N, at least `min_points` long when N allows.
std::vector<int> log_hub_grid(int node_count, int min_points = 12);
/// start, start+step, ... up to stop inclusive (with a half-step tolerance).
std::vector<double> linear_grid(double start, double stop, double step);

/// Cross product b x N_h over a base point. Rows are b values.
std::vector<PointSpec> hub_fraction_points(const PointSpec& base, std::span<const int> hub_counts,
                                           std::span<const double> b_values);

SweepOutput sweep_hub_fraction(const PointSpec& base, std::span<const int> hub_counts,
                               const SweepSettings& settings);
/// b sweep at each of the given heterogeneity levels. Points ordered by (N_h, b).
SweepOutput sweep_b(const PointSpec& base, std::span<const double> b_values,
                    std::span<const int> hub_counts, const SweepSettings& settings);
/// Repeats the hub-fraction sweep for each m. Points ordered by (m, N_h).
SweepOutput sweep_m(const PointSpec& base, std::span<const int> shortcut_counts,
                    std::span<const int> hub_counts, const SweepSettings& settings);

struct SweepGrid {
  std::vector<double> b_values;
  std::vector<int> hub_counts;
  SweepOutput output;  ///< row-major, b_values.size() x hub_counts.size()

  const SweepRecord& at(std::size_t b_index, std::size_t hub_index) const {
    return output.records[b_index * hub_counts.size() + hub_index];
  }
};
SweepGrid sweep_grid(const PointSpec& base, std::span<const double> b_values,
                     std::span<const int> hub_counts, const SweepSettings& settings);

struct HeterogeneityPoint {
  int hub_count = 0;
  double hub_fraction = 0.0;
  double mean_degree = 0.0;
  double paper_h = 0.0;   ///< realization average
  double variance = 0.0;  ///< realization average
  int realizations = 0;
};

/// Degree statistics of HNW graphs averaged over realizations; no dynamics.
std::vector<HeterogeneityPoint> heterogeneity_curve(const NetworkParams& net, std::span<const int> hub_counts,
                                                    int realizations, std::uint64_t master_seed);

// CSV/JSON emission.
inline constexpr const char* kRecordCsvHeader =
    "b,N_h,N,kappa,m,rule,rho_c_mean,rho_c_std,rho_c_stderr,n_replicates,absorbed_fraction";
void write_records_csv(std::span<const SweepRecord> records, std::ostream& out);
void write_runs_csv(std::span<const PointSpec> points, std::span<const RunRecord> runs, std::ostream& out);
void write_heterogeneity_csv(const NetworkParams& net, std::span<const HeterogeneityPoint> curve,
                             std::ostream& out);
/// Six significant digits, the precision used by every CSV column.
std::string format_number(double value);

}  // namespace hnw
