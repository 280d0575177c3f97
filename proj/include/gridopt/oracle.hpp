#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/geometry.hpp"
#include "gridopt/ggmst.hpp"
#include "gridopt/ggtsp.hpp"
#include "gridopt/graph.hpp"

namespace gridopt {

/// Default cap on the product of cell sizes for selection enumeration.
inline constexpr std::int64_t kDefaultSelectionCap = 1'000'000;

/// Held-Karp state space is 2^k * k; twelve cells keep it near half a
/// million states per selection.
inline constexpr int kHeldKarpMaxCells = 12;

namespace detail {

/// Runs fn(selection) for every one-point-per-cell selection, in odometer
/// order over cell_order (last cell advances fastest). selection[c] is a
/// global point index.
template <typename Fn>
void for_each_selection(const Instance& inst, Fn&& fn) {
  const int k = inst.cell_count();
  std::vector<int> local(static_cast<std::size_t>(k), 0);
  std::vector<int> selection(static_cast<std::size_t>(k));
  for (;;) {
    for (int c = 0; c < k; ++c) {
      selection[static_cast<std::size_t>(c)] =
          inst.points_in_cell(c)[static_cast<std::size_t>(local[static_cast<std::size_t>(c)])];
    }
    fn(selection);
    int c = k - 1;
    while (c >= 0) {
      if (++local[static_cast<std::size_t>(c)] <
          static_cast<int>(inst.points_in_cell(c).size())) {
        break;
      }
      local[static_cast<std::size_t>(c)] = 0;
      --c;
    }
    if (c < 0) return;
  }
}

inline void require_selection_feasible(const Instance& inst, std::int64_t cap) {
  if (inst.selection_count() > static_cast<double>(cap)) {
    fail(ErrorKind::InfeasibleOracle,
         "selection count exceeds the cap of " + std::to_string(cap));
  }
}

/// Weight of an MST of the complete graph, without materializing the tree.
/// Every MST has the same weight, so no tie-breaking is needed here.
template <typename WeightFn>
double mst_weight(int k, WeightFn&& weight, std::vector<double>& dist, std::vector<char>& done) {
  dist.assign(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
  done.assign(static_cast<std::size_t>(k), 0);
  dist[0] = 0.0;
  double total = 0.0;
  for (int step = 0; step < k; ++step) {
    int best = -1;
    for (int v = 0; v < k; ++v) {
      if (!done[static_cast<std::size_t>(v)] &&
          (best < 0 || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(best)])) {
        best = v;
      }
    }
    done[static_cast<std::size_t>(best)] = 1;
    total += (step == 0) ? 0.0 : dist[static_cast<std::size_t>(best)];
    for (int v = 0; v < k; ++v) {
      if (done[static_cast<std::size_t>(v)]) continue;
      const double w = weight(best, v);
      if (w < dist[static_cast<std::size_t>(v)]) dist[static_cast<std::size_t>(v)] = w;
    }
  }
  return total;
}

}  // namespace detail

/// Exact optimum by enumerating every one-point-per-cell selection and
/// spanning the selected points with an MST. The first selection reaching
/// the minimum weight wins, so ties resolve by selection encoding.
inline GgmstSolution exact_ggmst(const Instance& inst,
                                 std::int64_t selection_cap = kDefaultSelectionCap) {
  detail::require_selection_feasible(inst, selection_cap);
  const int k = inst.cell_count();

  double best_weight = std::numeric_limits<double>::infinity();
  std::vector<int> best_selection;
  std::vector<double> dist;
  std::vector<char> done;
  detail::for_each_selection(inst, [&](const std::vector<int>& selection) {
    const double w = detail::mst_weight(
        k,
        [&](int a, int b) {
          return euclid(inst.point(selection[static_cast<std::size_t>(a)]),
                        inst.point(selection[static_cast<std::size_t>(b)]));
        },
        dist, done);
    if (w < best_weight) {
      best_weight = w;
      best_selection = selection;
    }
  });

  const TreeGraph tree = mst(k, [&](int a, int b) {
    return euclid(inst.point(best_selection[static_cast<std::size_t>(a)]),
                  inst.point(best_selection[static_cast<std::size_t>(b)]));
  });
  GgmstSolution solution;
  for (int c = 0; c < k; ++c) {
    solution.chosen[inst.cell_at(c)] = best_selection[static_cast<std::size_t>(c)];
  }
  for (const WeightedEdge& e : tree.edges()) {
    solution.edges.emplace_back(best_selection[static_cast<std::size_t>(e.u)],
                                best_selection[static_cast<std::size_t>(e.v)]);
    solution.weight += e.w;
  }
  return solution;
}

namespace detail {

/// Exact cycle over the given points (one per cell), Held-Karp DP.
/// Returns the visiting order as positions into `points`.
inline std::pair<double, std::vector<int>> held_karp_cycle(const Instance& inst,
                                                           const std::vector<int>& points) {
  const int k = static_cast<int>(points.size());
  if (k == 1) return {0.0, {0}};
  std::vector<std::vector<double>> d(static_cast<std::size_t>(k),
                                     std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          euclid(inst.point(points[static_cast<std::size_t>(a)]),
                 inst.point(points[static_cast<std::size_t>(b)]));
    }
  }
  if (k == 2) return {2.0 * d[0][1], {0, 1}};

  // dp[mask][last]: cheapest path from node 0 through mask, ending at last.
  // Node 0 is implicit in every mask.
  const std::uint32_t states = 1u << (k - 1);  // mask over nodes 1..k-1
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dp(states,
                                      std::vector<double>(static_cast<std::size_t>(k), kInf));
  std::vector<std::vector<int>> back(states, std::vector<int>(static_cast<std::size_t>(k), -1));
  for (int v = 1; v < k; ++v) {
    dp[1u << (v - 1)][static_cast<std::size_t>(v)] = d[0][static_cast<std::size_t>(v)];
    back[1u << (v - 1)][static_cast<std::size_t>(v)] = 0;
  }
  for (std::uint32_t mask = 1; mask < states; ++mask) {
    for (int last = 1; last < k; ++last) {
      if (!(mask & (1u << (last - 1)))) continue;
      const double base = dp[mask][static_cast<std::size_t>(last)];
      if (base == kInf) continue;
      for (int next = 1; next < k; ++next) {
        if (mask & (1u << (next - 1))) continue;
        const std::uint32_t extended = mask | (1u << (next - 1));
        const double candidate =
            base + d[static_cast<std::size_t>(last)][static_cast<std::size_t>(next)];
        if (candidate < dp[extended][static_cast<std::size_t>(next)]) {
          dp[extended][static_cast<std::size_t>(next)] = candidate;
          back[extended][static_cast<std::size_t>(next)] = last;
        }
      }
    }
  }
  const std::uint32_t full = states - 1;
  double best = kInf;
  int best_last = -1;
  for (int last = 1; last < k; ++last) {
    const double candidate =
        dp[full][static_cast<std::size_t>(last)] + d[static_cast<std::size_t>(last)][0];
    if (candidate < best) {
      best = candidate;
      best_last = last;
    }
  }
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(k));
  std::uint32_t mask = full;
  int last = best_last;
  while (last != 0) {
    order.push_back(last);
    const int previous = back[mask][static_cast<std::size_t>(last)];
    mask &= ~(1u << (last - 1));
    last = previous;
  }
  order.push_back(0);
  std::reverse(order.begin(), order.end());
  return {best, order};
}

}  // namespace detail

/// Exact optimal tour by enumerating selections and solving each with
/// Held-Karp. Needs both the selection cap and at most kHeldKarpMaxCells
/// cells.
inline Tour exact_ggtsp(const Instance& inst,
                        std::int64_t selection_cap = kDefaultSelectionCap) {
  detail::require_selection_feasible(inst, selection_cap);
  const int k = inst.cell_count();
  if (k > kHeldKarpMaxCells) {
    fail(ErrorKind::InfeasibleOracle, "exact tours are capped at " +
                                          std::to_string(kHeldKarpMaxCells) + " cells, got " +
                                          std::to_string(k));
  }

  Tour best;
  best.weight = std::numeric_limits<double>::infinity();
  detail::for_each_selection(inst, [&](const std::vector<int>& selection) {
    const auto [w, order] = detail::held_karp_cycle(inst, selection);
    if (w < best.weight) {
      best.weight = w;
      best.order.clear();
      for (int position : order) {
        best.order.push_back(selection[static_cast<std::size_t>(position)]);
      }
    }
  });
  if (k == 1) best.weight = 0.0;
  return best;
}

/// One verifier outcome. margin is the slack left in the checked bound
/// (bound minus achieved value); any margin below -1e-9 fails.
struct AuditEntry {
  std::string name;
  bool pass = false;
  bool skipped = false;
  double margin = 0.0;
  std::string witness;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  bool all_pass() const {
    for (const AuditEntry& e : entries) {
      if (!e.skipped && !e.pass) return false;
    }
    return true;
  }

  double min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const AuditEntry& e : entries) {
      if (!e.skipped) m = std::min(m, e.margin);
    }
    return m;
  }
};

/// Additive-gap bound of the cell-MST + median construction: the produced
/// tree is within sqrt(2)*N - sqrt(2) of the optimum. Vacuous for N = 0,
/// where both weights are zero.
inline AuditEntry verify_gap_bound(const GgmstSolution& approx, const GgmstSolution& opt) {
  if (approx.chosen.size() != opt.chosen.size()) {
    fail(ErrorKind::InvalidArgument, "solutions belong to different instances");
  }
  for (auto a = approx.chosen.begin(), o = opt.chosen.begin(); a != approx.chosen.end();
       ++a, ++o) {
    if (a->first != o->first) {
      fail(ErrorKind::InvalidArgument, "solutions belong to different instances");
    }
  }
  const auto n_edges = static_cast<double>(approx.edges.size());
  AuditEntry entry;
  entry.name = "gap-bound";
  if (approx.edges.empty()) {
    entry.pass = true;
    entry.margin = 0.0;
    return entry;
  }
  const double bound = opt.weight + std::numbers::sqrt2 * n_edges - std::numbers::sqrt2;
  entry.margin = bound - approx.weight;
  entry.pass = entry.margin >= -kWeightTol;
  if (!entry.pass) {
    entry.witness = "weight " + std::to_string(approx.weight) + " exceeds bound " +
                    std::to_string(bound);
  }
  return entry;
}

/// Edge-count bound for any feasible tree: N <= 4*weight + 3.
inline AuditEntry verify_edge_count_bound(const GgmstSolution& solution) {
  const auto n_edges = static_cast<double>(solution.edges.size());
  AuditEntry entry;
  entry.name = "edge-count-bound";
  entry.margin = 4.0 * solution.weight + 3.0 - n_edges;
  entry.pass = entry.margin >= -kWeightTol;
  if (!entry.pass) {
    entry.witness = std::to_string(solution.edges.size()) + " edges at weight " +
                    std::to_string(solution.weight);
  }
  return entry;
}

/// Minimum possible weight of a connected subtree with the given edge count
/// when every vertex occupies a distinct unit cell. The 7- and 9-edge
/// constants come from Steiner trees through cell-corner triples.
inline double min_subtree_weight_bound(int edge_count) {
  switch (edge_count) {
    case 4:
      return 1.0;
    case 7:
      return (2.0 * std::sqrt(6.0) + std::sqrt(6.0 - 3.0 * std::sqrt(3.0))) / 3.0;
    case 8:
      return 2.0;
    case 9:
      return 1.0 + std::sqrt(3.0);
    default:
      fail(ErrorKind::InvalidArgument,
           "no subtree bound for " + std::to_string(edge_count) + " edges");
  }
}

namespace detail {

/// Enumerates connected edge subsets of `tree` with exactly `size` edges.
/// Each subset is produced once: it is grown from its minimum edge index
/// with larger-index extensions only, and extensions tried earlier at a
/// recursion level are forbidden below it. Stops once fn returns false.
template <typename Fn>
void for_each_connected_subtree(const TreeGraph& tree, int size, Fn&& fn) {
  const int edge_count = static_cast<int>(tree.edges().size());
  if (size < 1 || size > edge_count) return;

  std::vector<std::vector<int>> edge_neighbors(static_cast<std::size_t>(edge_count));
  for (int e = 0; e < edge_count; ++e) {
    for (const int endpoint : {tree.edges()[static_cast<std::size_t>(e)].u,
                               tree.edges()[static_cast<std::size_t>(e)].v}) {
      for (const auto& [to, other] : tree.neighbors(endpoint)) {
        if (other != e) edge_neighbors[static_cast<std::size_t>(e)].push_back(other);
      }
    }
    auto& list = edge_neighbors[static_cast<std::size_t>(e)];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  std::vector<int> subset;
  std::vector<char> in_subset(static_cast<std::size_t>(edge_count), 0);
  std::vector<char> forbidden(static_cast<std::size_t>(edge_count), 0);
  bool keep_going = true;

  auto grow = [&](auto&& self, int minimum_edge) -> void {
    if (!keep_going) return;
    if (static_cast<int>(subset.size()) == size) {
      keep_going = fn(std::as_const(subset));
      return;
    }
    std::vector<int> extensions;
    for (int e : subset) {
      for (int candidate : edge_neighbors[static_cast<std::size_t>(e)]) {
        if (candidate > minimum_edge && !in_subset[static_cast<std::size_t>(candidate)] &&
            !forbidden[static_cast<std::size_t>(candidate)]) {
          extensions.push_back(candidate);
        }
      }
    }
    std::sort(extensions.begin(), extensions.end());
    extensions.erase(std::unique(extensions.begin(), extensions.end()), extensions.end());
    for (std::size_t i = 0; i < extensions.size() && keep_going; ++i) {
      const int e = extensions[i];
      subset.push_back(e);
      in_subset[static_cast<std::size_t>(e)] = 1;
      self(self, minimum_edge);
      in_subset[static_cast<std::size_t>(e)] = 0;
      subset.pop_back();
      forbidden[static_cast<std::size_t>(e)] = 1;
    }
    for (int e : extensions) forbidden[static_cast<std::size_t>(e)] = 0;
  };

  for (int start = 0; start < edge_count && keep_going; ++start) {
    subset.assign(1, start);
    in_subset[static_cast<std::size_t>(start)] = 1;
    grow(grow, start);
    in_subset[static_cast<std::size_t>(start)] = 0;
  }
}

inline TreeGraph solution_cell_tree(const Instance& inst, const GgmstSolution& solution) {
  std::vector<WeightedEdge> edges;
  edges.reserve(solution.edges.size());
  for (const auto& [p, q] : solution.edges) {
    const auto [u, v] = normalized(inst.cell_position_of_point(p), inst.cell_position_of_point(q));
    edges.push_back({u, v, euclid(inst.point(p), inst.point(q))});
  }
  return TreeGraph(inst.cell_count(), std::move(edges));
}

}  // namespace detail

/// Checks, for each requested subtree size, that every (or up to sample_cap)
/// connected subtrees of the solution tree weigh at least the size's bound.
/// Sizes larger than the tree are reported as skipped.
inline AuditReport audit_subtree_weights(const Instance& inst, const GgmstSolution& solution,
                                         std::span<const int> sizes,
                                         std::int64_t sample_cap = 100000) {
  validate_solution(inst, solution);
  AuditReport report;
  const TreeGraph tree = detail::solution_cell_tree(inst, solution);
  for (const int size : sizes) {
    AuditEntry entry;
    entry.name = "subtree-weight-" + std::to_string(size);
    const double bound = min_subtree_weight_bound(size);  // validates the size
    if (size > static_cast<int>(tree.edges().size())) {
      entry.skipped = true;
      entry.pass = true;
      entry.witness = "solution has only " + std::to_string(tree.edges().size()) + " edges";
      report.entries.push_back(std::move(entry));
      continue;
    }
    double min_weight = std::numeric_limits<double>::infinity();
    std::vector<int> min_subset;
    std::int64_t inspected = 0;
    detail::for_each_connected_subtree(tree, size, [&](const std::vector<int>& subset) {
      double w = 0.0;
      for (int e : subset) w += tree.edges()[static_cast<std::size_t>(e)].w;
      if (w < min_weight) {
        min_weight = w;
        min_subset = subset;
      }
      return ++inspected < sample_cap;
    });
    entry.margin = min_weight - bound;
    entry.pass = entry.margin >= -kWeightTol;
    if (!entry.pass) {
      std::string edges_text;
      for (int e : min_subset) {
        const WeightedEdge& edge = tree.edges()[static_cast<std::size_t>(e)];
        edges_text += (edges_text.empty() ? "" : " ") + std::to_string(edge.u) + "-" +
                      std::to_string(edge.v);
      }
      entry.witness = "subtree " + edges_text + " weighs " + std::to_string(min_weight);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace gridopt
