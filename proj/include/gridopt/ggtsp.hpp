#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/geometry.hpp"
#include "gridopt/ggmst.hpp"
#include "gridopt/graph.hpp"

namespace gridopt {

/// Cyclic point sequence visiting exactly one point per non-empty cell.
/// Weight includes the wraparound edge. One cell: weight 0; two cells: twice
/// the connecting edge.
struct Tour {
  std::vector<int> order;
  double weight = 0.0;
};

inline double cycle_weight(const Instance& inst, const std::vector<int>& order) {
  if (order.size() < 2) return 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    w += euclid(inst.point(order[i]), inst.point(order[(i + 1) % order.size()]));
  }
  return w;
}

inline void validate_tour(const Instance& inst, const Tour& tour) {
  const int k = inst.cell_count();
  if (static_cast<int>(tour.order.size()) != k) {
    fail(ErrorKind::InvalidArgument, "tour must visit one point per non-empty cell");
  }
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int p : tour.order) {
    if (p < 0 || p >= inst.point_count()) {
      fail(ErrorKind::InvalidArgument, "tour point index out of range");
    }
    const int c = inst.cell_position_of_point(p);
    if (seen[static_cast<std::size_t>(c)]) {
      fail(ErrorKind::InvalidArgument, "tour visits a cell twice");
    }
    seen[static_cast<std::size_t>(c)] = 1;
  }
  if (std::abs(cycle_weight(inst, tour.order) - tour.weight) > kWeightTol) {
    fail(ErrorKind::InvalidArgument, "stored tour weight does not match the cycle");
  }
}

/// Doubles the tree edges, walks an Euler tour from the chosen point of the
/// first cell, and shortcuts repeated cells, keeping the first occurrence.
/// The triangle inequality caps the result at twice the tree weight.
inline Tour double_tree_tour(const Instance& inst, const GgmstSolution& tree) {
  const int k = inst.cell_count();
  std::vector<int> representative(static_cast<std::size_t>(k), -1);
  for (const auto& [cell, point_index] : tree.chosen) {
    representative[static_cast<std::size_t>(inst.cell_position(cell))] = point_index;
  }

  Multigraph doubled(k);
  for (const auto& [p, q] : tree.edges) {
    const int u = inst.cell_position_of_point(p);
    const int v = inst.cell_position_of_point(q);
    doubled.add_edge(u, v);
    doubled.add_edge(u, v);
  }

  Tour tour;
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int cell : euler_tour(doubled, 0)) {
    if (!seen[static_cast<std::size_t>(cell)]) {
      seen[static_cast<std::size_t>(cell)] = 1;
      tour.order.push_back(representative[static_cast<std::size_t>(cell)]);
    }
  }
  tour.weight = cycle_weight(inst, tour.order);
  return tour;
}

/// Disjoint cell pairs covering an even-size odd-degree set.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  double weight = 0.0;
};

/// Cap on the matched set size for the exact subset-DP matching
/// (O(2^m m^2) time and O(2^m) space).
inline constexpr int kDefaultMatchingCap = 20;

/// Exact minimum-weight perfect matching over `cells` by dynamic programming
/// on subsets. Ties prefer the lexicographically smallest pair encoding:
/// the lowest unmatched element always pairs with the smallest partner that
/// achieves the optimum.
template <typename DistFn>
Matching min_perfect_matching(const std::vector<int>& cells, DistFn&& dist,
                              int cap = kDefaultMatchingCap) {
  const int m = static_cast<int>(cells.size());
  if (m % 2 != 0) {
    fail(ErrorKind::Parity, "perfect matching needs an even set, got " + std::to_string(m));
  }
  if (m > cap) {
    fail(ErrorKind::CapExceeded,
         "matching capped at " + std::to_string(cap) + " cells, got " + std::to_string(m));
  }
  Matching matching;
  if (m == 0) return matching;

  std::vector<std::vector<double>> d(static_cast<std::size_t>(m),
                                     std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = dist(cells[a], cells[b]);
      d[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
          d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
  }

  const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1u);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> best(full + 1u, kInf);
  std::vector<int> partner(full + 1u, -1);
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int lowest = std::countr_zero(mask);
    if ((static_cast<int>(std::popcount(mask)) % 2) != 0) continue;
    for (int j = lowest + 1; j < m; ++j) {
      if (!(mask & (1u << j))) continue;
      const std::uint32_t rest = mask & ~(1u << lowest) & ~(1u << j);
      const double candidate =
          best[rest] + d[static_cast<std::size_t>(lowest)][static_cast<std::size_t>(j)];
      if (candidate < best[mask]) {
        best[mask] = candidate;
        partner[mask] = j;
      }
    }
  }

  std::uint32_t mask = full;
  while (mask != 0) {
    const int lowest = std::countr_zero(mask);
    const int j = partner[mask];
    matching.pairs.emplace_back(cells[lowest], cells[static_cast<std::size_t>(j)]);
    mask &= ~(1u << lowest) & ~(1u << j);
  }
  matching.weight = best[full];
  return matching;
}

struct ChristofidesTour {
  Tour tour;
  /// True when the odd-degree set exceeded the matching cap and the
  /// double-tree construction was used instead.
  bool matching_fallback = false;
};

/// Tour from the feasibility-restored cell MST plus a minimum perfect
/// matching of the cells whose chosen vertex has odd tree degree. Matched
/// cell pairs are joined between the chosen vertices, which makes every
/// degree even; an Euler walk of the merged multigraph is then shortcut.
inline ChristofidesTour christofides_tour(const Instance& inst,
                                          int matching_cap = kDefaultMatchingCap) {
  const int k = inst.cell_count();
  const GgmstSolution base = approximate_ggmst(inst);
  if (k == 1) {
    return ChristofidesTour{Tour{{base.chosen.begin()->second}, 0.0}, false};
  }

  std::vector<int> representative(static_cast<std::size_t>(k), -1);
  for (const auto& [cell, point_index] : base.chosen) {
    representative[static_cast<std::size_t>(inst.cell_position(cell))] = point_index;
  }
  std::vector<int> degree(static_cast<std::size_t>(k), 0);
  std::vector<std::pair<int, int>> cell_edges;
  cell_edges.reserve(base.edges.size());
  for (const auto& [p, q] : base.edges) {
    const int u = inst.cell_position_of_point(p);
    const int v = inst.cell_position_of_point(q);
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
    cell_edges.emplace_back(u, v);
  }
  std::vector<int> odd;
  for (int c = 0; c < k; ++c) {
    if (degree[static_cast<std::size_t>(c)] % 2 != 0) odd.push_back(c);
  }

  if (static_cast<int>(odd.size()) > matching_cap) {
    return ChristofidesTour{double_tree_tour(inst, base), true};
  }

  const Matching matching = min_perfect_matching(
      odd, [&](int a, int b) { return min_cell_edge(inst, a, b).weight; }, matching_cap);

  Multigraph merged(k);
  for (const auto& [u, v] : cell_edges) merged.add_edge(u, v);
  for (const auto& [u, v] : matching.pairs) merged.add_edge(u, v);

  Tour tour;
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int cell : euler_tour(merged, 0)) {
    if (!seen[static_cast<std::size_t>(cell)]) {
      seen[static_cast<std::size_t>(cell)] = 1;
      tour.order.push_back(representative[static_cast<std::size_t>(cell)]);
    }
  }
  tour.weight = cycle_weight(inst, tour.order);
  return ChristofidesTour{std::move(tour), false};
}

}  // namespace gridopt
