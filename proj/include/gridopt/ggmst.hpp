#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/geometry.hpp"
#include "gridopt/graph.hpp"

namespace gridopt {

struct SolverConfig {
  /// Multiplicative slack accepted on top of the approximation ratio.
  double epsilon = 0.5;
  /// Max cell count for exhaustive spanning-tree enumeration (k^(k-2) trees).
  int enumeration_cap = kDefaultEnumerationCap;
  /// Max product of cell sizes for the exact selection-enumeration fallback.
  std::int64_t exact_fallback_cap = 1'000'000;
};

inline void require_valid(const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (cfg.enumeration_cap < 1 || cfg.exact_fallback_cap < 1) {
    fail(ErrorKind::InvalidArgument, "caps must be positive");
  }
}

/// Spanning tree whose node indices are positions in Instance::cell_order.
using CellTree = TreeGraph;

/// Feasible solution: one chosen point per non-empty cell and a spanning
/// tree over the chosen points.
struct GgmstSolution {
  std::map<CellId, int> chosen;
  std::vector<std::pair<int, int>> edges;
  double weight = 0.0;
};

/// One realized cell-tree edge: the point pair achieving the cell distance.
struct PointEdge {
  int p = -1;
  int q = -1;
  double w = 0.0;
};

inline double total_weight(const std::vector<PointEdge>& edges) {
  double w = 0.0;
  for (const PointEdge& e : edges) w += e.w;
  return w;
}

struct CellLevelMst {
  CellTree cell_tree;         // nodes are cell_order positions
  std::vector<PointEdge> g0;  // g0[e] realizes cell_tree.edges()[e]
};

/// MST over non-empty cells, where the distance between two cells is their
/// shortest point-to-point edge. g0 collects the achieving point pairs; it
/// spans all cells but may touch several points in one cell.
inline CellLevelMst cell_level_mst(const Instance& inst) {
  const int k = inst.cell_count();
  CellTree tree = mst(k, [&](int a, int b) { return min_cell_edge(inst, a, b).weight; });
  std::vector<PointEdge> g0;
  g0.reserve(tree.edges().size());
  for (const WeightedEdge& e : tree.edges()) {
    const MinCellEdge m = min_cell_edge(inst, e.u, e.v);
    g0.push_back({m.p, m.q, m.weight});
  }
  return CellLevelMst{std::move(tree), std::move(g0)};
}

/// Restores feasibility of g0: every cell touched by more than one distinct
/// g0 endpoint gets a single representative, the cell point minimizing the
/// summed distance to those endpoints (candidates are all points of the
/// cell; ties go to the lowest point index). Each g0 edge is reconnected to
/// the representatives of its endpoint cells. Endpoint sets come from the
/// original g0, so cells are processed independently of order.
inline GgmstSolution median_merge(const Instance& inst, const CellTree& cell_tree,
                                  const std::vector<PointEdge>& g0) {
  const int k = inst.cell_count();
  if (cell_tree.node_count() != k || static_cast<int>(g0.size()) != k - 1) {
    fail(ErrorKind::InvalidArgument, "cell tree or g0 does not match the instance");
  }

  std::vector<std::vector<int>> endpoints(static_cast<std::size_t>(k));
  for (const PointEdge& e : g0) {
    endpoints[static_cast<std::size_t>(inst.cell_position_of_point(e.p))].push_back(e.p);
    endpoints[static_cast<std::size_t>(inst.cell_position_of_point(e.q))].push_back(e.q);
  }

  std::vector<int> representative(static_cast<std::size_t>(k), -1);
  for (int c = 0; c < k; ++c) {
    auto& cg = endpoints[static_cast<std::size_t>(c)];
    std::sort(cg.begin(), cg.end());
    cg.erase(std::unique(cg.begin(), cg.end()), cg.end());
    if (cg.empty()) {
      // only possible for a single-cell instance
      representative[static_cast<std::size_t>(c)] = inst.points_in_cell(c).front();
    } else if (cg.size() == 1) {
      representative[static_cast<std::size_t>(c)] = cg.front();
    } else {
      double best_sum = std::numeric_limits<double>::infinity();
      int best = -1;
      for (int candidate : inst.points_in_cell(c)) {
        double sum = 0.0;
        for (int endpoint : cg) sum += euclid(inst.point(endpoint), inst.point(candidate));
        if (sum < best_sum) {
          best_sum = sum;
          best = candidate;
        }
      }
      representative[static_cast<std::size_t>(c)] = best;
    }
  }

  GgmstSolution solution;
  for (int c = 0; c < k; ++c) {
    solution.chosen[inst.cell_at(c)] = representative[static_cast<std::size_t>(c)];
  }
  solution.edges.reserve(g0.size());
  for (const PointEdge& e : g0) {
    const int p = representative[static_cast<std::size_t>(inst.cell_position_of_point(e.p))];
    const int q = representative[static_cast<std::size_t>(inst.cell_position_of_point(e.q))];
    solution.edges.emplace_back(p, q);
    solution.weight += euclid(inst.point(p), inst.point(q));
  }
  return solution;
}

/// Cell-level MST followed by median reconnection.
inline GgmstSolution approximate_ggmst(const Instance& inst) {
  const CellLevelMst base = cell_level_mst(inst);
  return median_merge(inst, base.cell_tree, base.g0);
}

/// Minimum-weight feasible solution whose edges mirror the given cell tree
/// exactly: bottom-up over the tree rooted at `root`, each point accumulates
/// the cheapest way to attach every child cell.
inline GgmstSolution dp_cell_tree_rooted(const Instance& inst, const CellTree& tree, int root) {
  const int k = inst.cell_count();
  if (tree.node_count() != k) {
    fail(ErrorKind::InvalidArgument, "cell tree does not span the instance cells");
  }
  if (root < 0 || root >= k) fail(ErrorKind::InvalidArgument, "root out of range");

  // DFS order; children follow the sorted adjacency of the tree.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(k));
  std::vector<int> parent(static_cast<std::size_t>(k), -1);
  std::vector<int> stack{root};
  std::vector<char> visited(static_cast<std::size_t>(k), 0);
  visited[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    order.push_back(c);
    for (const auto& [to, edge_index] : tree.neighbors(c)) {
      if (!visited[static_cast<std::size_t>(to)]) {
        visited[static_cast<std::size_t>(to)] = 1;
        parent[static_cast<std::size_t>(to)] = c;
        stack.push_back(to);
      }
    }
  }

  // cost[c][i]: best weight of the subtree hanging off cell c when its
  // representative is the i-th point of c. pick[c][i]: that representative
  // choice for child cell c given the parent's i-th point.
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(k));
  std::vector<std::vector<int>> pick(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    cost[static_cast<std::size_t>(c)].assign(inst.points_in_cell(c).size(), 0.0);
  }
  for (std::size_t idx = order.size(); idx-- > 0;) {
    const int child = order[idx];
    const int up = parent[static_cast<std::size_t>(child)];
    if (up < 0) continue;
    const auto& child_points = inst.points_in_cell(child);
    const auto& up_points = inst.points_in_cell(up);
    auto& choice = pick[static_cast<std::size_t>(child)];
    choice.assign(up_points.size(), -1);
    for (std::size_t pi = 0; pi < up_points.size(); ++pi) {
      double best = std::numeric_limits<double>::infinity();
      int best_q = -1;
      for (std::size_t qi = 0; qi < child_points.size(); ++qi) {
        const double w = cost[static_cast<std::size_t>(child)][qi] +
                         euclid(inst.point(up_points[pi]), inst.point(child_points[qi]));
        if (w < best) {
          best = w;
          best_q = static_cast<int>(qi);
        }
      }
      cost[static_cast<std::size_t>(up)][pi] += best;
      choice[pi] = best_q;
    }
  }

  const auto& root_points = inst.points_in_cell(root);
  std::size_t best_root = 0;
  for (std::size_t i = 1; i < root_points.size(); ++i) {
    if (cost[static_cast<std::size_t>(root)][i] < cost[static_cast<std::size_t>(root)][best_root]) {
      best_root = i;
    }
  }

  std::vector<int> selected_local(static_cast<std::size_t>(k), -1);
  selected_local[static_cast<std::size_t>(root)] = static_cast<int>(best_root);
  for (const int c : order) {
    const int up = parent[static_cast<std::size_t>(c)];
    if (up < 0) continue;
    const int parent_local = selected_local[static_cast<std::size_t>(up)];
    selected_local[static_cast<std::size_t>(c)] =
        pick[static_cast<std::size_t>(c)][static_cast<std::size_t>(parent_local)];
  }

  GgmstSolution solution;
  std::vector<int> representative(static_cast<std::size_t>(k), -1);
  for (int c = 0; c < k; ++c) {
    representative[static_cast<std::size_t>(c)] =
        inst.points_in_cell(c)[static_cast<std::size_t>(selected_local[static_cast<std::size_t>(c)])];
    solution.chosen[inst.cell_at(c)] = representative[static_cast<std::size_t>(c)];
  }
  solution.edges.reserve(tree.edges().size());
  for (const WeightedEdge& e : tree.edges()) {
    const int p = representative[static_cast<std::size_t>(e.u)];
    const int q = representative[static_cast<std::size_t>(e.v)];
    solution.edges.emplace_back(p, q);
    solution.weight += euclid(inst.point(p), inst.point(q));
  }
  return solution;
}

inline GgmstSolution dp_cell_tree(const Instance& inst, const CellTree& tree) {
  return dp_cell_tree_rooted(inst, tree, 0);
}

/// Checks the feasibility invariants: one chosen point per cell lying in that
/// cell, edges forming a spanning tree over the chosen points, and a stored
/// weight that matches the recomputed edge sum within tolerance.
inline void validate_solution(const Instance& inst, const GgmstSolution& solution) {
  const int k = inst.cell_count();
  if (static_cast<int>(solution.chosen.size()) != k) {
    fail(ErrorKind::InvalidArgument, "solution must choose one point per non-empty cell");
  }
  std::vector<int> representative(static_cast<std::size_t>(k), -1);
  for (const auto& [cell, point_index] : solution.chosen) {
    const int c = inst.cell_position(cell);
    if (point_index < 0 || point_index >= inst.point_count() ||
        inst.cell_position_of_point(point_index) != c) {
      fail(ErrorKind::InvalidArgument, "chosen point does not lie in its cell");
    }
    representative[static_cast<std::size_t>(c)] = point_index;
  }
  if (static_cast<int>(solution.edges.size()) != k - 1) {
    fail(ErrorKind::InvalidArgument, "solution edge count must be cells minus one");
  }
  double recomputed = 0.0;
  std::vector<WeightedEdge> cell_edges;
  cell_edges.reserve(solution.edges.size());
  for (const auto& [p, q] : solution.edges) {
    const int cp = inst.cell_position_of_point(p);
    const int cq = inst.cell_position_of_point(q);
    if (representative[static_cast<std::size_t>(cp)] != p ||
        representative[static_cast<std::size_t>(cq)] != q) {
      fail(ErrorKind::InvalidArgument, "edge endpoint is not the chosen point of its cell");
    }
    const double w = euclid(inst.point(p), inst.point(q));
    recomputed += w;
    const auto [u, v] = detail::normalized(cp, cq);
    cell_edges.push_back({u, v, w});
  }
  if (k > 1) TreeGraph(k, std::move(cell_edges));  // connectivity + acyclicity
  if (std::abs(recomputed - solution.weight) > kWeightTol) {
    fail(ErrorKind::InvalidArgument, "stored weight does not match the edge sum");
  }
}

}  // namespace gridopt
