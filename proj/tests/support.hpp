// Shared helpers for the test suites: hand-rolled exhaustive oracles kept
// deliberately independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "gridopt/generate.hpp"
#include "gridopt/geometry.hpp"

namespace testutil {

inline std::optional<gridopt::ErrorKind> thrown_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const gridopt::Error& e) {
    return e.kind();
  } catch (...) {
  }
  return std::nullopt;
}

/// Every one-point-per-cell selection, odometer over cell_order positions.
template <typename Fn>
void for_each_selection(const gridopt::Instance& inst, Fn&& fn) {
  const int k = inst.cell_count();
  std::vector<int> local(k, 0);
  for (;;) {
    std::vector<int> selection(k);
    for (int c = 0; c < k; ++c) selection[c] = inst.points_in_cell(c)[local[c]];
    fn(selection);
    int c = k - 1;
    for (; c >= 0; --c) {
      if (++local[c] < static_cast<int>(inst.points_in_cell(c).size())) break;
      local[c] = 0;
    }
    if (c < 0) return;
  }
}

inline bool edges_span(int k, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(k);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(k, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int to : adj[v]) {
      if (!seen[to]) {
        seen[to] = 1;
        ++reached;
        stack.push_back(to);
      }
    }
  }
  return reached == k;
}

/// All labeled spanning trees on k nodes, as sorted edge lists: every
/// (k-1)-subset of the complete graph's edges that connects all nodes.
inline std::vector<std::vector<std::pair<int, int>>> all_spanning_trees(int k) {
  std::vector<std::pair<int, int>> complete;
  for (int u = 0; u < k; ++u) {
    for (int v = u + 1; v < k; ++v) complete.emplace_back(u, v);
  }
  std::vector<std::vector<std::pair<int, int>>> trees;
  if (k == 1) {
    trees.push_back({});
    return trees;
  }
  const int m = static_cast<int>(complete.size());
  std::vector<int> pick(k - 1);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<std::pair<int, int>> edges;
    for (int index : pick) edges.push_back(complete[index]);
    if (edges_span(k, edges)) trees.push_back(edges);
    int i = k - 2;
    while (i >= 0 && pick[i] == m - (k - 1) + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k - 1; ++j) pick[j] = pick[j - 1] + 1;
  }
  return trees;
}

inline double selection_edges_weight(const gridopt::Instance& inst,
                                     const std::vector<int>& selection,
                                     const std::vector<std::pair<int, int>>& cell_edges) {
  double w = 0.0;
  for (const auto& [u, v] : cell_edges) {
    w += gridopt::euclid(inst.point(selection[u]), inst.point(selection[v]));
  }
  return w;
}

/// Exhaustive optimum: minimum over selections and spanning-tree structures.
inline double brute_ggmst_weight(const gridopt::Instance& inst) {
  const auto trees = all_spanning_trees(inst.cell_count());
  double best = std::numeric_limits<double>::infinity();
  for_each_selection(inst, [&](const std::vector<int>& selection) {
    for (const auto& tree : trees) {
      best = std::min(best, selection_edges_weight(inst, selection, tree));
    }
  });
  return best;
}

/// Minimum over selections for one fixed cell-tree structure.
inline double brute_fixed_tree_weight(const gridopt::Instance& inst,
                                      const std::vector<std::pair<int, int>>& cell_edges) {
  double best = std::numeric_limits<double>::infinity();
  for_each_selection(inst, [&](const std::vector<int>& selection) {
    best = std::min(best, selection_edges_weight(inst, selection, cell_edges));
  });
  return best;
}

inline double cycle_weight_of(const gridopt::Instance& inst, const std::vector<int>& order) {
  double w = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    w += gridopt::euclid(inst.point(order[i]), inst.point(order[(i + 1) % order.size()]));
  }
  return order.size() < 2 ? 0.0 : w;
}

/// Exhaustive optimal tour: selections times cyclic permutations with the
/// first cell's point fixed.
inline double brute_ggtsp_weight(const gridopt::Instance& inst) {
  const int k = inst.cell_count();
  double best = std::numeric_limits<double>::infinity();
  for_each_selection(inst, [&](const std::vector<int>& selection) {
    std::vector<int> rest(k - 1);
    std::iota(rest.begin(), rest.end(), 1);
    do {
      std::vector<int> order{selection[0]};
      for (int c : rest) order.push_back(selection[c]);
      best = std::min(best, cycle_weight_of(inst, order));
    } while (std::next_permutation(rest.begin(), rest.end()));
    if (k == 1) best = 0.0;
  });
  return best;
}

/// Exhaustive minimum-weight perfect pairing of 0..m-1: pair the lowest
/// free element with every partner, recurse.
inline double brute_matching_weight(const std::vector<std::vector<double>>& d) {
  const int m = static_cast<int>(d.size());
  std::vector<char> used(m, 0);
  std::function<double()> solve = [&]() -> double {
    int lowest = -1;
    for (int i = 0; i < m; ++i) {
      if (!used[i]) {
        lowest = i;
        break;
      }
    }
    if (lowest < 0) return 0.0;
    used[lowest] = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = lowest + 1; j < m; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      best = std::min(best, d[lowest][j] + solve());
      used[j] = 0;
    }
    used[lowest] = 0;
    return best;
  };
  return solve();
}

/// Point minimizing the total distance to three anchors, by Weiszfeld
/// iteration; used to pin Steiner-point constants independently.
inline gridopt::Point fermat_point(const gridopt::Point& a, const gridopt::Point& b,
                                   const gridopt::Point& c) {
  gridopt::Point x{(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  for (int iteration = 0; iteration < 10000; ++iteration) {
    double wx = 0.0, wy = 0.0, wsum = 0.0;
    for (const gridopt::Point& p : {a, b, c}) {
      const double dist = std::max(gridopt::euclid(x, p), 1e-15);
      wx += p.x / dist;
      wy += p.y / dist;
      wsum += 1.0 / dist;
    }
    const gridopt::Point next{wx / wsum, wy / wsum};
    const double step = gridopt::euclid(next, x);
    x = next;
    if (step < 1e-14) break;
  }
  return x;
}

inline double fermat_point_total(const gridopt::Point& a, const gridopt::Point& b,
                                 const gridopt::Point& c) {
  const gridopt::Point x = fermat_point(a, b, c);
  return gridopt::euclid(x, a) + gridopt::euclid(x, b) + gridopt::euclid(x, c);
}

inline gridopt::Instance small_random_instance(std::uint64_t seed, int cells, int ppc_lo,
                                               int ppc_hi, gridopt::GenMode mode =
                                                               gridopt::GenMode::ConnectedCells) {
  gridopt::GenParams params;
  params.mode = mode;
  params.rows = 6;
  params.cols = 6;
  params.target_cells = cells;
  params.ppc_lo = ppc_lo;
  params.ppc_hi = ppc_hi;
  params.seed = seed;
  return gridopt::generate_instance(params);
}

}  // namespace testutil
