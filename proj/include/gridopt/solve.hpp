#pragma once

#include <algorithm>
#include <limits>
#include <numbers>
#include <string_view>
#include <utility>

#include "gridopt/ggmst.hpp"
#include "gridopt/ggtsp.hpp"
#include "gridopt/oracle.hpp"

namespace gridopt {

/// How a returned solution was obtained, i.e. which guarantee it carries.
enum class Provenance {
  ExactEnumeration,      // optimal: DP over every labeled cell tree
  ExactSelection,        // optimal: selection enumeration
  HeuristicNoGuarantee,  // small-N regime, but both exact routes infeasible
  Approx,                // cell MST + median merge, ratio 1+4*sqrt(2)+eps
};

constexpr std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::ExactEnumeration: return "exact-enumeration";
    case Provenance::ExactSelection: return "exact-selection";
    case Provenance::HeuristicNoGuarantee: return "heuristic-no-guarantee";
    case Provenance::Approx: return "approx";
  }
  return "unknown";
}

struct GgmstResult {
  GgmstSolution solution;
  Provenance provenance = Provenance::Approx;
};

/// Largest N for which the solver insists on an exact answer.
inline double small_instance_threshold(const SolverConfig& cfg) {
  return std::max(15.0, 10.0 * std::numbers::sqrt2 / cfg.epsilon);
}

/// Exact answer when N is small: the minimum over all labeled cell trees of
/// the tree-restricted DP (first tree reaching the minimum wins). Falls back
/// to selection enumeration when the cell count exceeds the enumeration cap,
/// and to the unguaranteed heuristic when that is infeasible too. Large N
/// takes the approximation; its degraded guarantee is signaled by the tag,
/// never silently.
inline GgmstResult solve_ggmst(const Instance& inst, const SolverConfig& cfg) {
  require_valid(cfg);
  const int k = inst.cell_count();
  const int n_edges = inst.feasible_edge_count();

  if (static_cast<double>(n_edges) <= small_instance_threshold(cfg)) {
    if (k <= cfg.enumeration_cap) {
      if (k == 1) {
        GgmstSolution trivial;
        trivial.chosen[inst.cell_at(0)] = inst.points_in_cell(0).front();
        return {std::move(trivial), Provenance::ExactEnumeration};
      }
      GgmstSolution best;
      best.weight = std::numeric_limits<double>::infinity();
      PruferTreeStream stream(k, cfg.enumeration_cap);
      while (auto tree = stream.next()) {
        GgmstSolution candidate = dp_cell_tree(inst, *tree);
        if (candidate.weight < best.weight) best = std::move(candidate);
      }
      return {std::move(best), Provenance::ExactEnumeration};
    }
    if (inst.selection_count() <= static_cast<double>(cfg.exact_fallback_cap)) {
      return {exact_ggmst(inst, cfg.exact_fallback_cap), Provenance::ExactSelection};
    }
    return {approximate_ggmst(inst), Provenance::HeuristicNoGuarantee};
  }
  return {approximate_ggmst(inst), Provenance::Approx};
}

enum class TourVariant { DoubleTree, Christofides };

enum class TourProvenance {
  Exact,                    // selection enumeration + Held-Karp
  Approx,                   // requested variant
  ApproxMatchingFallback,   // christofides hit the matching cap, double tree used
};

constexpr std::string_view to_string(TourVariant v) {
  return v == TourVariant::DoubleTree ? "double-tree" : "christofides";
}

constexpr std::string_view to_string(TourProvenance p) {
  switch (p) {
    case TourProvenance::Exact: return "exact";
    case TourProvenance::Approx: return "approx";
    case TourProvenance::ApproxMatchingFallback: return "approx-matching-fallback";
  }
  return "unknown";
}

struct GgtspResult {
  Tour tour;
  TourProvenance provenance = TourProvenance::Approx;
};

/// Small instances (the solve_ggmst threshold, a feasible selection count,
/// and few enough cells for Held-Karp) are solved exactly, which removes the
/// additive error of the tour constructions. Otherwise the requested variant
/// runs: double-tree doubles the solve_ggmst tree; christofides augments the
/// heuristic tree with a minimum perfect matching on odd-degree cells.
inline GgtspResult solve_ggtsp(const Instance& inst, const SolverConfig& cfg,
                               TourVariant variant) {
  require_valid(cfg);
  const int k = inst.cell_count();
  const int n_edges = inst.feasible_edge_count();

  if (static_cast<double>(n_edges) <= small_instance_threshold(cfg) &&
      inst.selection_count() <= static_cast<double>(cfg.exact_fallback_cap) &&
      k <= kHeldKarpMaxCells) {
    return {exact_ggtsp(inst, cfg.exact_fallback_cap), TourProvenance::Exact};
  }
  if (variant == TourVariant::DoubleTree) {
    return {double_tree_tour(inst, solve_ggmst(inst, cfg).solution), TourProvenance::Approx};
  }
  ChristofidesTour result = christofides_tour(inst);
  return {std::move(result.tour), result.matching_fallback
                                      ? TourProvenance::ApproxMatchingFallback
                                      : TourProvenance::Approx};
}

}  // namespace gridopt
