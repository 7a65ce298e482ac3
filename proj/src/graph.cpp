#include "hnw/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace hnw {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

void check_ring_params(int node_count, int ring_halfwidth) {
  if (ring_halfwidth < 1) {
    throw ConfigError("kappa must be >= 1, got " + std::to_string(ring_halfwidth));
  }
  if (node_count < 2 * ring_halfwidth + 1) {
    throw ConfigError("N must be >= 2*kappa+1 (got N=" + std::to_string(node_count) +
                      ", kappa=" + std::to_string(ring_halfwidth) + ")");
  }
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

Graph::Graph(int node_count, int ring_halfwidth, std::vector<NodeId> hub_ids,
             const std::vector<Edge>& shortcuts)
    : node_count_(node_count),
      ring_halfwidth_(ring_halfwidth),
      shortcut_count_(static_cast<int>(shortcuts.size())),
      hub_ids_(std::move(hub_ids)) {
  std::sort(hub_ids_.begin(), hub_ids_.end());

  std::vector<std::vector<NodeId>> lists(node_count);
  for (NodeId i = 0; i < node_count; ++i) {
    for (int d = 1; d <= ring_halfwidth; ++d) {
      const NodeId j = (i + d) % node_count;
      lists[i].push_back(j);
      lists[j].push_back(i);
    }
  }
  for (const auto& [u, v] : shortcuts) {
    lists[u].push_back(v);
    lists[v].push_back(u);
  }

  offsets_.assign(node_count + 1, 0);
  for (NodeId i = 0; i < node_count; ++i) {
    std::sort(lists[i].begin(), lists[i].end());
    offsets_[i + 1] = offsets_[i] + static_cast<int>(lists[i].size());
  }
  adjacency_.reserve(offsets_.back());
  for (const auto& list : lists) adjacency_.insert(adjacency_.end(), list.begin(), list.end());
}

bool Graph::is_hub(NodeId x) const {
  return std::binary_search(hub_ids_.begin(), hub_ids_.end(), x);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::is_ring_edge(NodeId u, NodeId v) const noexcept {
  if (u == v) return false;
  const int d = std::abs(u - v);
  return std::min(d, node_count_ - d) <= ring_halfwidth_;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (NodeId u = 0; u < node_count_; ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<Edge> Graph::shortcuts() const {
  std::vector<Edge> out;
  for (const auto& e : edges()) {
    if (!is_ring_edge(e.first, e.second)) out.push_back(e);
  }
  return out;
}

void Graph::validate() const {
  auto fail = [](const std::string& msg) { throw std::logic_error("graph invariant: " + msg); };

  if (ring_halfwidth_ < 1 || node_count_ < 2 * ring_halfwidth_ + 1) fail("bad N/kappa");
  if (static_cast<int>(offsets_.size()) != node_count_ + 1) fail("offset table size");

  for (std::size_t i = 0; i < hub_ids_.size(); ++i) {
    if (hub_ids_[i] < 0 || hub_ids_[i] >= node_count_) fail("hub id out of range");
    if (i > 0 && hub_ids_[i] <= hub_ids_[i - 1]) fail("hub ids not distinct");
  }

  int ring_edges = 0;
  int shortcut_edges = 0;
  for (NodeId u = 0; u < node_count_; ++u) {
    const auto nb = neighbors(u);
    if (static_cast<int>(nb.size()) < 2 * ring_halfwidth_) fail("degree below 2*kappa");
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const NodeId v = nb[i];
      if (v < 0 || v >= node_count_) fail("neighbour id out of range");
      if (v == u) fail("self-loop at " + std::to_string(u));
      if (i > 0 && nb[i - 1] >= v) fail("duplicate or unsorted neighbour at " + std::to_string(u));
      if (!has_edge(v, u)) fail("asymmetric edge " + std::to_string(u) + "-" + std::to_string(v));
      if (u < v) {
        if (is_ring_edge(u, v)) {
          ++ring_edges;
        } else {
          ++shortcut_edges;
          if (!is_hub(u) && !is_hub(v)) {
            fail("shortcut " + std::to_string(u) + "-" + std::to_string(v) + " has no hub endpoint");
          }
        }
      }
    }
  }
  if (ring_edges != node_count_ * ring_halfwidth_) fail("ring edges missing");
  if (shortcut_edges != shortcut_count_) fail("shortcut count mismatch");
}

Graph ring_lattice(int node_count, int ring_halfwidth) {
  check_ring_params(node_count, ring_halfwidth);
  return Graph(node_count, ring_halfwidth, {}, {});
}

std::int64_t shortcut_capacity(int node_count, int ring_halfwidth, std::span<const NodeId> hub_ids) {
  const std::int64_t n = node_count;
  const std::int64_t all_pairs = n * (n - 1) / 2 - n * ring_halfwidth;

  std::vector<char> hub(node_count, 0);
  for (NodeId h : hub_ids) hub[h] = 1;
  const std::int64_t others = n - static_cast<std::int64_t>(hub_ids.size());
  std::int64_t ring_among_others = 0;
  for (NodeId i = 0; i < node_count; ++i) {
    if (hub[i]) continue;
    for (int d = 1; d <= ring_halfwidth; ++d) {
      if (!hub[(i + d) % node_count]) ++ring_among_others;
    }
  }
  const std::int64_t pairs_without_hub = others * (others - 1) / 2 - ring_among_others;
  return all_pairs - pairs_without_hub;
}

Graph generate_hnw(int node_count, int ring_halfwidth, int hub_count, int shortcut_count,
                   std::mt19937_64& rng) {
  check_ring_params(node_count, ring_halfwidth);
  if (hub_count < 1 || hub_count > node_count) {
    throw ConfigError("N_h must lie in [1, N], got " + std::to_string(hub_count));
  }
  if (shortcut_count < 0) {
    throw ConfigError("m must be >= 0, got " + std::to_string(shortcut_count));
  }

  std::vector<NodeId> all(node_count);
  std::iota(all.begin(), all.end(), 0);
  std::vector<NodeId> hubs;
  hubs.reserve(hub_count);
  std::sample(all.begin(), all.end(), std::back_inserter(hubs), hub_count, rng);

  const std::int64_t capacity = shortcut_capacity(node_count, ring_halfwidth, hubs);
  if (shortcut_count > capacity) {
    throw ConfigError("infeasible m=" + std::to_string(shortcut_count) + ": only " +
                      std::to_string(capacity) + " valid hub-incident pairs exist");
  }

  // Floor of 100*N keeps sparse-but-feasible configurations (few valid partners,
  // small m) from tripping the cap.
  const std::int64_t max_consecutive_rejections =
      100 * std::max<std::int64_t>(shortcut_count, node_count);

  std::uniform_int_distribution<NodeId> any_node(0, node_count - 1);
  std::uniform_int_distribution<int> any_hub(0, hub_count - 1);
  std::unordered_set<std::uint64_t> placed;
  placed.reserve(static_cast<std::size_t>(shortcut_count) * 2);
  std::vector<Edge> shortcuts;
  shortcuts.reserve(shortcut_count);

  const int kappa = ring_halfwidth;
  auto on_ring = [node_count, kappa](NodeId u, NodeId v) {
    const int d = std::abs(u - v);
    return std::min(d, node_count - d) <= kappa;
  };

  std::int64_t rejections = 0;
  while (static_cast<int>(shortcuts.size()) < shortcut_count) {
    const NodeId u = any_node(rng);
    const NodeId v = hubs[any_hub(rng)];
    if (u == v || on_ring(u, v) || !placed.insert(edge_key(u, v)).second) {
      if (++rejections >= max_consecutive_rejections) {
        throw GenerationError("shortcut placement gave up after " + std::to_string(rejections) +
                              " consecutive rejected draws (" + std::to_string(shortcuts.size()) +
                              " of " + std::to_string(shortcut_count) + " placed)");
      }
      continue;
    }
    rejections = 0;
    shortcuts.emplace_back(std::min(u, v), std::max(u, v));
  }

  return Graph(node_count, ring_halfwidth, std::move(hubs), shortcuts);
}

DegreeStats degree_stats(const Graph& g) {
  DegreeStats stats;
  const int n = g.node_count();
  if (n == 0) return stats;
  std::int64_t sum_sq = 0;
  for (NodeId x = 0; x < n; ++x) {
    const int k = g.degree(x);
    ++stats.histogram[k];
    sum_sq += static_cast<std::int64_t>(k) * k;
  }
  stats.degree_sum = g.degree_sum();
  stats.mean_degree = static_cast<double>(stats.degree_sum) / n;

  double second_moment = 0.0;
  for (const auto& [k, count] : stats.histogram) {
    second_moment += static_cast<double>(k) * k * count;
  }
  second_moment /= n;
  stats.paper_h = second_moment - stats.mean_degree;

  // Integer form avoids cancellation: (N*sum k^2 - (sum k)^2) / N^2.
  const double dn = n;
  const double numer = dn * static_cast<double>(sum_sq) -
                       static_cast<double>(stats.degree_sum) * static_cast<double>(stats.degree_sum);
  stats.variance = std::max(0.0, numer / (dn * dn));
  return stats;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "#N=" << g.node_count() << '\n'
      << "#kappa=" << g.ring_halfwidth() << '\n'
      << "#m=" << g.shortcut_count() << '\n'
      << "#hubs=";
  const auto hubs = g.hub_ids();
  for (std::size_t i = 0; i < hubs.size(); ++i) out << (i ? "," : "") << hubs[i];
  out << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

namespace {

long long parse_int(std::string_view text, std::size_t line, const char* what) {
  long long value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::optional<long long> n, kappa, m;
  std::optional<std::vector<NodeId>> hubs;
  std::vector<Edge> edge_list;
  std::vector<std::size_t> edge_lines;

  std::string line;
  std::size_t lineno = 0;
  bool in_body = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line.front() == '#') {
      if (in_body) throw ParseError(lineno, "header line after edge data");
      std::istringstream tokens(line);
      std::string tok;
      while (tokens >> tok) {
        if (tok.empty() || tok.front() != '#') throw ParseError(lineno, "bad header token '" + tok + "'");
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "header token without '=': " + tok);
        const std::string key = tok.substr(1, eq - 1);
        const std::string_view value = std::string_view(tok).substr(eq + 1);
        if (key == "N") {
          n = parse_int(value, lineno, "N");
        } else if (key == "kappa") {
          kappa = parse_int(value, lineno, "kappa");
        } else if (key == "m") {
          m = parse_int(value, lineno, "m");
        } else if (key == "hubs") {
          std::vector<NodeId> ids;
          std::size_t start = 0;
          while (start < value.size()) {
            auto comma = value.find(',', start);
            if (comma == std::string_view::npos) comma = value.size();
            ids.push_back(static_cast<NodeId>(parse_int(value.substr(start, comma - start), lineno, "hub id")));
            start = comma + 1;
          }
          hubs = std::move(ids);
        } else {
          throw ParseError(lineno, "unknown header key '" + key + "'");
        }
      }
      continue;
    }

    in_body = true;
    if (!n || !kappa || !m || !hubs) throw ParseError(lineno, "edge data before complete header (#N, #kappa, #m, #hubs)");
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) throw ParseError(lineno, "expected 'u v'");
    const auto u = parse_int(a, lineno, "node id");
    const auto v = parse_int(b, lineno, "node id");
    if (u < 0 || v < 0 || u >= *n || v >= *n) throw ParseError(lineno, "node id out of range [0, N)");
    if (u == v) throw ParseError(lineno, "self-loop " + a + " " + b);
    if (u > v) throw ParseError(lineno, "edge must be declared as 'u v' with u < v");
    edge_list.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    edge_lines.push_back(lineno);
  }
  if (!n || !kappa || !m || !hubs) throw ParseError(0, "missing header (#N, #kappa, #m, #hubs required)");
  if (*kappa < 1 || *n < 2 * *kappa + 1) throw ParseError(0, "header N/kappa violate N >= 2*kappa+1");
  for (NodeId h : *hubs) {
    if (h < 0 || h >= *n) throw ParseError(0, "hub id out of range");
  }

  const int nodes = static_cast<int>(*n);
  const int halfwidth = static_cast<int>(*kappa);
  std::unordered_set<std::uint64_t> seen;
  std::vector<Edge> shortcuts;
  std::int64_t ring_edges = 0;
  for (std::size_t i = 0; i < edge_list.size(); ++i) {
    const auto [u, v] = edge_list[i];
    if (!seen.insert(edge_key(u, v)).second) throw ParseError(edge_lines[i], "duplicate edge");
    const int d = v - u;
    if (std::min(d, nodes - d) <= halfwidth) {
      ++ring_edges;
    } else {
      shortcuts.emplace_back(u, v);
    }
  }
  if (ring_edges != static_cast<std::int64_t>(nodes) * halfwidth) {
    throw ParseError(0, "ring lattice incomplete: " + std::to_string(ring_edges) + " of " +
                            std::to_string(static_cast<std::int64_t>(nodes) * halfwidth) + " ring edges");
  }
  if (static_cast<long long>(shortcuts.size()) != *m) {
    throw ParseError(0, "header m=" + std::to_string(*m) + " but file has " +
                            std::to_string(shortcuts.size()) + " shortcuts");
  }

  Graph g(nodes, halfwidth, *hubs, shortcuts);
  try {
    g.validate();
  } catch (const std::logic_error& e) {
    throw ParseError(0, e.what());
  }
  return g;
}

}  // namespace hnw
