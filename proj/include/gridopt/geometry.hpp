#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridopt/error.hpp"

namespace gridopt {

/// Absolute tolerance for every weight comparison in bound checks and
/// cross-route equality assertions. Tie-breaking in selection logic uses
/// exact floating-point equality instead, so outputs stay reproducible.
inline constexpr double kWeightTol = 1e-9;

/// Accepted coordinate magnitude. Distances stay O(1e9), leaving double
/// precision with ample headroom against the 1e-9 tolerance.
inline constexpr double kMaxCoordinate = 1e9;

/// Planar point; the unit of both coordinates is one grid cell side.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline bool point_is_valid(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::abs(p.x) <= kMaxCoordinate &&
         std::abs(p.y) <= kMaxCoordinate;
}

inline void require_valid(const Point& p) {
  if (!point_is_valid(p)) {
    fail(ErrorKind::InvalidPoint,
         "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
             ") is not finite or exceeds the coordinate bound");
  }
}

/// Integer coordinates of a unit grid cell. Ordered lexicographically by
/// (i, j) so that containers iterate cells in a reproducible order.
struct CellId {
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend auto operator<=>(const CellId&, const CellId&) = default;
};

/// Cell containing p under the half-open rule [i, i+1) x [j, j+1); points on
/// a border belong to the cell on the upper-right side of that border.
inline CellId cell_of(const Point& p) {
  require_valid(p);
  return CellId{static_cast<std::int64_t>(std::floor(p.x)),
                static_cast<std::int64_t>(std::floor(p.y))};
}

inline double euclid(const Point& p, const Point& q) {
  require_valid(p);
  require_valid(q);
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Immutable point set grouped into non-empty unit grid cells.
///
/// Cells are ordered lexicographically by (i, j); point indices inside a cell
/// keep input order. Every feasible solution over k cells has N = k - 1 edges.
class Instance {
 public:
  explicit Instance(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) fail(ErrorKind::EmptyInstance, "instance needs at least one point");
    for (const Point& p : points_) require_valid(p);

    for (int idx = 0; idx < static_cast<int>(points_.size()); ++idx) {
      cells_[cell_of(points_[idx])].push_back(idx);
    }
    cell_order_.reserve(cells_.size());
    cell_points_.reserve(cells_.size());
    point_cell_.assign(points_.size(), -1);
    for (const auto& [cell, indices] : cells_) {
      for (int idx : indices) point_cell_[idx] = static_cast<int>(cell_order_.size());
      cell_order_.push_back(cell);
      cell_points_.push_back(indices);
    }
  }

  int point_count() const { return static_cast<int>(points_.size()); }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(int index) const { return points_[static_cast<std::size_t>(index)]; }

  int cell_count() const { return static_cast<int>(cell_order_.size()); }

  /// N: the edge count of every feasible solution (cells minus one).
  int feasible_edge_count() const { return cell_count() - 1; }

  const std::map<CellId, std::vector<int>>& cells() const { return cells_; }
  const std::vector<CellId>& cell_order() const { return cell_order_; }
  CellId cell_at(int position) const { return cell_order_[static_cast<std::size_t>(position)]; }

  int cell_position(CellId cell) const {
    auto it = std::lower_bound(cell_order_.begin(), cell_order_.end(), cell);
    if (it == cell_order_.end() || *it != cell) {
      fail(ErrorKind::InvalidArgument,
           "cell (" + std::to_string(cell.i) + ", " + std::to_string(cell.j) +
               ") is empty or unknown");
    }
    return static_cast<int>(it - cell_order_.begin());
  }

  const std::vector<int>& points_in_cell(int position) const {
    return cell_points_[static_cast<std::size_t>(position)];
  }
  const std::vector<int>& points_in_cell(CellId cell) const {
    return points_in_cell(cell_position(cell));
  }

  int cell_position_of_point(int point_index) const {
    return point_cell_[static_cast<std::size_t>(point_index)];
  }

  /// Product of cell sizes, i.e. the number of one-point-per-cell selections.
  double selection_count() const {
    double product = 1.0;
    for (const auto& pts : cell_points_) product *= static_cast<double>(pts.size());
    return product;
  }

 private:
  std::vector<Point> points_;
  std::map<CellId, std::vector<int>> cells_;
  std::vector<CellId> cell_order_;
  std::vector<std::vector<int>> cell_points_;
  std::vector<int> point_cell_;
};

inline Instance build_instance(std::vector<Point> points) { return Instance(std::move(points)); }

struct MinCellEdge {
  double weight = 0.0;
  int p = -1;  // point index in the first cell
  int q = -1;  // point index in the second cell
};

/// Shortest edge between two distinct non-empty cells, by full pairwise scan.
/// Ties broken by lowest (p, q) point-index pair.
inline MinCellEdge min_cell_edge(const Instance& inst, int position_a, int position_b) {
  if (position_a == position_b) {
    fail(ErrorKind::InvalidArgument, "min_cell_edge needs two distinct cells");
  }
  MinCellEdge best;
  best.weight = std::numeric_limits<double>::infinity();
  for (int p : inst.points_in_cell(position_a)) {
    for (int q : inst.points_in_cell(position_b)) {
      const double w = euclid(inst.point(p), inst.point(q));
      if (w < best.weight) best = MinCellEdge{w, p, q};
    }
  }
  return best;
}

inline MinCellEdge min_cell_edge(const Instance& inst, CellId a, CellId b) {
  return min_cell_edge(inst, inst.cell_position(a), inst.cell_position(b));
}

}  // namespace gridopt
