#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/error.hpp"

namespace gridopt {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

/// Connected acyclic graph on nodes 0..k-1 with exactly k-1 weighted edges.
class TreeGraph {
 public:
  TreeGraph(int node_count, std::vector<WeightedEdge> edges)
      : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ < 1) fail(ErrorKind::EmptyGraph, "tree needs at least one node");
    if (static_cast<int>(edges_.size()) != node_count_ - 1) {
      fail(ErrorKind::InvalidArgument, "tree on " + std::to_string(node_count_) + " nodes needs " +
                                           std::to_string(node_count_ - 1) + " edges, got " +
                                           std::to_string(edges_.size()));
    }
    adjacency_.assign(static_cast<std::size_t>(node_count_), {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      const WeightedEdge& edge = edges_[static_cast<std::size_t>(e)];
      if (edge.u < 0 || edge.u >= node_count_ || edge.v < 0 || edge.v >= node_count_ ||
          edge.u == edge.v) {
        fail(ErrorKind::InvalidArgument, "edge endpoints out of range or equal");
      }
      if (!(edge.w >= 0.0) || !std::isfinite(edge.w)) {
        fail(ErrorKind::InvalidArgument, "edge weight must be finite and nonnegative");
      }
      adjacency_[static_cast<std::size_t>(edge.u)].push_back({edge.v, e});
      adjacency_[static_cast<std::size_t>(edge.v)].push_back({edge.u, e});
    }
    for (auto& neighbors : adjacency_) std::sort(neighbors.begin(), neighbors.end());

    // k-1 edges + connectivity imply acyclicity.
    std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& [to, edge_index] : adjacency_[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(to)]) {
          seen[static_cast<std::size_t>(to)] = 1;
          ++reached;
          stack.push_back(to);
        }
      }
    }
    if (reached != node_count_) fail(ErrorKind::InvalidArgument, "tree edges are disconnected");
  }

  int node_count() const { return node_count_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  /// Neighbors of v as (node, edge index), sorted ascending.
  std::span<const std::pair<int, int>> neighbors(int v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }

  int degree(int v) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(v)].size()); }

  double weight() const {
    double total = 0.0;
    for (const WeightedEdge& e : edges_) total += e.w;
    return total;
  }

 private:
  int node_count_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

/// Undirected multigraph: parallel edges allowed, self-loops rejected.
class Multigraph {
 public:
  explicit Multigraph(int node_count) : node_count_(node_count) {
    if (node_count_ < 1) fail(ErrorKind::EmptyGraph, "multigraph needs at least one node");
  }

  void add_edge(int u, int v) {
    if (u < 0 || u >= node_count_ || v < 0 || v >= node_count_) {
      fail(ErrorKind::InvalidArgument, "edge endpoint out of range");
    }
    if (u == v) fail(ErrorKind::InvalidArgument, "self-loops are not allowed");
    edges_.emplace_back(u, v);
  }

  int node_count() const { return node_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  int degree(int v) const {
    int d = 0;
    for (const auto& [a, b] : edges_) d += (a == v) + (b == v);
    return d;
  }

 private:
  int node_count_;
  std::vector<std::pair<int, int>> edges_;
};

namespace detail {

inline std::pair<int, int> normalized(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

}  // namespace detail

/// Minimum spanning tree of the complete graph on node_count nodes, weights
/// supplied by a symmetric nonnegative oracle. Prim's algorithm; among
/// equal-weight candidate edges the lexicographically smaller (u, v) wins.
template <typename WeightFn>
TreeGraph mst(int node_count, WeightFn&& weight) {
  if (node_count < 1) fail(ErrorKind::EmptyGraph, "mst needs at least one node");
  const int k = node_count;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::pair<int, int> kNoEdge{std::numeric_limits<int>::max(),
                                    std::numeric_limits<int>::max()};

  std::vector<double> dist(static_cast<std::size_t>(k), kInf);
  std::vector<int> parent(static_cast<std::size_t>(k), -1);
  std::vector<char> in_tree(static_cast<std::size_t>(k), 0);
  dist[0] = 0.0;

  auto edge_key = [&](int v) {
    return parent[static_cast<std::size_t>(v)] < 0
               ? kNoEdge
               : detail::normalized(parent[static_cast<std::size_t>(v)], v);
  };

  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(k - 1));
  for (int step = 0; step < k; ++step) {
    int best = -1;
    for (int v = 0; v < k; ++v) {
      if (in_tree[static_cast<std::size_t>(v)]) continue;
      if (best < 0 || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(best)] ||
          (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(best)] &&
           edge_key(v) < edge_key(best))) {
        best = v;
      }
    }
    in_tree[static_cast<std::size_t>(best)] = 1;
    if (parent[static_cast<std::size_t>(best)] >= 0) {
      const auto [u, v] = detail::normalized(parent[static_cast<std::size_t>(best)], best);
      edges.push_back({u, v, dist[static_cast<std::size_t>(best)]});
    }
    for (int v = 0; v < k; ++v) {
      if (in_tree[static_cast<std::size_t>(v)]) continue;
      const double w = weight(best, v);
      if (!(w >= 0.0) || !std::isfinite(w)) {
        fail(ErrorKind::InvalidArgument, "weight oracle returned a negative or non-finite value");
      }
      if (w < dist[static_cast<std::size_t>(v)] ||
          (w == dist[static_cast<std::size_t>(v)] &&
           detail::normalized(best, v) < edge_key(v))) {
        dist[static_cast<std::size_t>(v)] = w;
        parent[static_cast<std::size_t>(v)] = best;
      }
    }
  }
  return TreeGraph(k, std::move(edges));
}

/// Closed Euler walk from `start` consuming every edge exactly once.
/// Hierholzer's algorithm; adjacency is consumed in sorted (neighbor, edge)
/// order, so the walk is deterministic.
inline std::vector<int> euler_tour(const Multigraph& g, int start) {
  if (start < 0 || start >= g.node_count()) {
    fail(ErrorKind::InvalidArgument, "start node out of range");
  }
  const auto& edges = g.edges();
  if (edges.empty()) return {start};

  std::vector<std::vector<std::pair<int, int>>> adjacency(
      static_cast<std::size_t>(g.node_count()));
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const auto& [u, v] = edges[static_cast<std::size_t>(e)];
    adjacency[static_cast<std::size_t>(u)].push_back({v, e});
    adjacency[static_cast<std::size_t>(v)].push_back({u, e});
  }
  for (int v = 0; v < g.node_count(); ++v) {
    auto& neighbors = adjacency[static_cast<std::size_t>(v)];
    if (neighbors.size() % 2 != 0) {
      fail(ErrorKind::NotEulerian, "node " + std::to_string(v) + " has odd degree");
    }
    std::sort(neighbors.begin(), neighbors.end());
  }
  if (adjacency[static_cast<std::size_t>(start)].empty()) {
    fail(ErrorKind::NotEulerian, "start node touches no edge");
  }

  std::vector<std::size_t> cursor(static_cast<std::size_t>(g.node_count()), 0);
  std::vector<char> used(edges.size(), 0);
  std::vector<int> stack{start};
  std::vector<int> walk;
  walk.reserve(edges.size() + 1);
  while (!stack.empty()) {
    const int v = stack.back();
    auto& pos = cursor[static_cast<std::size_t>(v)];
    const auto& neighbors = adjacency[static_cast<std::size_t>(v)];
    while (pos < neighbors.size() && used[static_cast<std::size_t>(neighbors[pos].second)]) ++pos;
    if (pos == neighbors.size()) {
      walk.push_back(v);
      stack.pop_back();
    } else {
      used[static_cast<std::size_t>(neighbors[pos].second)] = 1;
      stack.push_back(neighbors[pos].first);
    }
  }
  if (walk.size() != edges.size() + 1) {
    fail(ErrorKind::NotEulerian, "edge set is disconnected");
  }
  std::reverse(walk.begin(), walk.end());
  return walk;
}

/// Cap on the node count for labeled-spanning-tree enumeration; k^(k-2)
/// trees at k=8 is 262144, which keeps desk-scale runs fast.
inline constexpr int kDefaultEnumerationCap = 8;

/// Decode a Prufer sequence over labels 0..k-1 into the tree it encodes.
/// Edge weights are zero; callers attach weights to the structure.
inline TreeGraph decode_prufer_sequence(int node_count, std::span<const int> sequence) {
  const int k = node_count;
  if (k < 2 || static_cast<int>(sequence.size()) != k - 2) {
    fail(ErrorKind::InvalidArgument, "sequence length must be node count minus two");
  }
  std::vector<int> degree(static_cast<std::size_t>(k), 1);
  for (int label : sequence) {
    if (label < 0 || label >= k) fail(ErrorKind::InvalidArgument, "sequence label out of range");
    ++degree[static_cast<std::size_t>(label)];
  }
  int ptr = 0;
  while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
  int leaf = ptr;
  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(k - 1));
  for (int label : sequence) {
    const auto [u, v] = detail::normalized(leaf, label);
    edges.push_back({u, v, 0.0});
    if (--degree[static_cast<std::size_t>(label)] == 1 && label < ptr) {
      leaf = label;
    } else {
      ++ptr;
      while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back({std::min(leaf, k - 1), std::max(leaf, k - 1), 0.0});
  return TreeGraph(k, std::move(edges));
}

/// Streams every labeled spanning tree on 2..cap nodes exactly once, by
/// decoding all k^(k-2) Prufer sequences in odometer order.
class PruferTreeStream {
 public:
  explicit PruferTreeStream(int node_count, int cap = kDefaultEnumerationCap)
      : node_count_(node_count) {
    if (node_count_ < 2) {
      fail(ErrorKind::InvalidArgument, "tree enumeration needs at least two nodes");
    }
    if (node_count_ > cap) {
      fail(ErrorKind::CapExceeded, "tree enumeration capped at " + std::to_string(cap) +
                                       " nodes, got " + std::to_string(node_count_));
    }
    sequence_.assign(static_cast<std::size_t>(node_count_ - 2), 0);
  }

  std::optional<TreeGraph> next() {
    if (done_) return std::nullopt;
    TreeGraph tree = decode_prufer_sequence(node_count_, sequence_);
    done_ = !advance();
    return tree;
  }

  static std::uint64_t tree_count(int node_count) {
    std::uint64_t count = 1;
    for (int i = 0; i < node_count - 2; ++i) count *= static_cast<std::uint64_t>(node_count);
    return count;
  }

 private:
  bool advance() {
    for (std::size_t digit = sequence_.size(); digit-- > 0;) {
      if (++sequence_[digit] < node_count_) return true;
      sequence_[digit] = 0;
    }
    return false;
  }

  int node_count_;
  std::vector<int> sequence_;
  bool done_ = false;
};

/// Leaf-count identity for trees: |V_1| = 2 + sum over i >= 2 of |V_i| (i-2).
inline bool degree_identity_check(const TreeGraph& tree) {
  if (tree.node_count() < 2) {
    fail(ErrorKind::InvalidArgument, "degree identity needs at least two nodes");
  }
  int leaves = 0;
  long long weighted = 0;
  for (int v = 0; v < tree.node_count(); ++v) {
    const int d = tree.degree(v);
    if (d == 1) {
      ++leaves;
    } else {
      weighted += d - 2;
    }
  }
  return leaves == 2 + weighted;
}

}  // namespace gridopt
