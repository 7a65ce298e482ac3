#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hnw {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Parameters that fail a precondition (also used for infeasible shortcut counts).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampling for shortcuts hit its attempt cap.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list text. `line()` is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Ring lattice of half-width kappa plus `shortcut_count` hub-incident shortcuts.
///
/// Undirected and simple. Neighbour lists are sorted and stored contiguously.
/// A Graph is immutable once built, so sharing it across threads is safe.
class Graph {
 public:
  Graph() = default;

  /// Builds from a shortcut list on top of the ring. Does not validate; see validate().
  Graph(int node_count, int ring_halfwidth, std::vector<NodeId> hub_ids,
        const std::vector<Edge>& shortcuts);

  int node_count() const noexcept { return node_count_; }
  int ring_halfwidth() const noexcept { return ring_halfwidth_; }
  int shortcut_count() const noexcept { return shortcut_count_; }
  int hub_count() const noexcept { return static_cast<int>(hub_ids_.size()); }

  /// Sorted ascending.
  std::span<const NodeId> hub_ids() const noexcept { return hub_ids_; }
  bool is_hub(NodeId x) const;

  std::span<const NodeId> neighbors(NodeId x) const noexcept {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }
  int degree(NodeId x) const noexcept { return offsets_[x + 1] - offsets_[x]; }
  std::int64_t degree_sum() const noexcept { return static_cast<std::int64_t>(adjacency_.size()); }
  std::int64_t edge_count() const noexcept { return degree_sum() / 2; }

  bool has_edge(NodeId u, NodeId v) const;
  bool is_ring_edge(NodeId u, NodeId v) const noexcept;

  /// All edges as (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> edges() const;
  /// Non-ring edges as (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> shortcuts() const;

  /// Checks every structural invariant; throws std::logic_error naming the first violation.
  void validate() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int node_count_ = 0;
  int ring_halfwidth_ = 0;
  int shortcut_count_ = 0;
  std::vector<NodeId> hub_ids_;
  std::vector<int> offsets_{0};
  std::vector<NodeId> adjacency_;
};

struct DegreeStats {
  double mean_degree = 0.0;
  /// (1/N) sum_k k^2 N(k) - <k>, evaluated literally.
  double paper_h = 0.0;
  /// <k^2> - <k>^2.
  double variance = 0.0;
  std::int64_t degree_sum = 0;
  std::map<int, int> histogram;
};

/// Circular lattice: node i is joined to i +- 1 .. i +- kappa (mod N).
Graph ring_lattice(int node_count, int ring_halfwidth);

/// Number of distinct non-ring node pairs with at least one endpoint in `hub_ids`.
std::int64_t shortcut_capacity(int node_count, int ring_halfwidth, std::span<const NodeId> hub_ids);

/// Heterogeneous Newman-Watts graph.
///
/// Draws `hub_count` distinct hubs uniformly, then adds shortcuts one at a time:
/// one endpoint uniform over all nodes, the other uniform over the hubs. Self
/// loops, ring edges and duplicates are redrawn, so exactly `shortcut_count`
/// shortcuts end up in the graph.
///
/// Throws ConfigError for bad parameters or when fewer than `shortcut_count`
/// valid pairs exist, GenerationError when too many draws in a row are rejected.
Graph generate_hnw(int node_count, int ring_halfwidth, int hub_count, int shortcut_count,
                   std::mt19937_64& rng);

DegreeStats degree_stats(const Graph& g);

/// Header lines `#N=`, `#kappa=`, `#m=`, `#hubs=` followed by one `u v` line per edge, u < v.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

}  // namespace hnw
