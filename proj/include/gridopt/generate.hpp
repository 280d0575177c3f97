#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridopt/geometry.hpp"

namespace gridopt {

enum class GenMode { UniformBox, ConnectedCells, Clustered };

constexpr std::string_view to_string(GenMode mode) {
  switch (mode) {
    case GenMode::UniformBox: return "uniform-box";
    case GenMode::ConnectedCells: return "connected-cells";
    case GenMode::Clustered: return "clustered";
  }
  return "unknown";
}

inline GenMode parse_gen_mode(std::string_view name) {
  if (name == "uniform-box") return GenMode::UniformBox;
  if (name == "connected-cells") return GenMode::ConnectedCells;
  if (name == "clustered") return GenMode::Clustered;
  fail(ErrorKind::InvalidArgument, "unknown generation mode `" + std::string(name) + "`");
}

struct GenParams {
  GenMode mode = GenMode::ConnectedCells;
  int rows = 4;
  int cols = 4;
  int ppc_lo = 1;  // points per cell, inclusive range
  int ppc_hi = 3;
  int target_cells = 6;
  std::uint64_t seed = 0;
};

namespace detail {

/// mt19937_64 with hand-rolled mappings, so sequences are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi].
  int next_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
    return lo + static_cast<int>(next() % span);
  }

 private:
  std::mt19937_64 engine_;
};

inline void require_valid(const GenParams& p) {
  if (p.rows < 1 || p.cols < 1) fail(ErrorKind::Generation, "grid extent must be at least 1x1");
  if (p.ppc_lo < 1 || p.ppc_hi < p.ppc_lo) {
    fail(ErrorKind::Generation, "points-per-cell range is empty");
  }
  if (p.target_cells < 1) fail(ErrorKind::Generation, "target cell count must be positive");
}

inline Point point_in_cell(Rng& rng, int i, int j) {
  return Point{static_cast<double>(i) + rng.next_unit(), static_cast<double>(j) + rng.next_unit()};
}

/// Distinct cells gathered by a random walk over 8-neighbor adjacency,
/// clipped to the grid. Every new cell neighbors the walk position, so the
/// collected set is connected.
inline std::vector<std::pair<int, int>> connected_cell_walk(Rng& rng, const GenParams& p) {
  std::vector<std::pair<int, int>> collected;
  std::set<std::pair<int, int>> seen;
  std::pair<int, int> current{rng.next_int(0, p.cols - 1), rng.next_int(0, p.rows - 1)};
  collected.push_back(current);
  seen.insert(current);
  std::int64_t steps = 0;
  const std::int64_t step_cap = 1'000'000;
  while (static_cast<int>(collected.size()) < p.target_cells) {
    if (++steps > step_cap) fail(ErrorKind::Generation, "cell walk did not reach the target");
    const int di = rng.next_int(-1, 1);
    const int dj = rng.next_int(-1, 1);
    if (di == 0 && dj == 0) continue;
    const std::pair<int, int> next{current.first + di, current.second + dj};
    if (next.first < 0 || next.first >= p.cols || next.second < 0 || next.second >= p.rows) {
      continue;
    }
    current = next;
    if (seen.insert(next).second) collected.push_back(next);
  }
  return collected;
}

inline std::vector<std::pair<int, int>> clustered_cells(Rng& rng, const GenParams& p) {
  const int center_count = std::max(1, p.target_cells / 4);
  std::vector<std::pair<int, int>> centers;
  centers.reserve(static_cast<std::size_t>(center_count));
  for (int c = 0; c < center_count; ++c) {
    centers.emplace_back(rng.next_int(0, p.cols - 1), rng.next_int(0, p.rows - 1));
  }
  std::vector<std::pair<int, int>> collected;
  std::set<std::pair<int, int>> seen;
  std::int64_t attempts = 0;
  const std::int64_t attempt_cap = 200ll * p.target_cells + 1000;
  while (static_cast<int>(collected.size()) < p.target_cells && attempts < attempt_cap) {
    ++attempts;
    const auto& center = centers[static_cast<std::size_t>(rng.next_int(0, center_count - 1))];
    const std::pair<int, int> cell{
        std::clamp(center.first + rng.next_int(-2, 2), 0, p.cols - 1),
        std::clamp(center.second + rng.next_int(-2, 2), 0, p.rows - 1)};
    if (seen.insert(cell).second) collected.push_back(cell);
  }
  // deterministic row-major fill if sampling stalled near saturation
  for (int j = 0; j < p.rows && static_cast<int>(collected.size()) < p.target_cells; ++j) {
    for (int i = 0; i < p.cols && static_cast<int>(collected.size()) < p.target_cells; ++i) {
      if (seen.insert({i, j}).second) collected.emplace_back(i, j);
    }
  }
  return collected;
}

}  // namespace detail

/// Deterministic instance generation: the result is a pure function of the
/// parameters including the seed.
///
///  - uniform-box: scatters points uniformly over the [0,cols) x [0,rows)
///    rectangle; target_cells only scales the point count, the non-empty
///    cell set emerges from the scatter.
///  - connected-cells: random-walks the grid until target_cells distinct
///    cells are collected (the set is connected under 8-neighbor adjacency),
///    then fills each cell with a uniform number of points.
///  - clustered: like connected-cells but cells are sampled around a few
///    cluster centers, without a connectivity guarantee.
inline Instance generate_instance(const GenParams& params) {
  detail::require_valid(params);
  detail::Rng rng(params.seed);
  std::vector<Point> points;

  if (params.mode == GenMode::UniformBox) {
    const int count = std::max(
        1, static_cast<int>(params.target_cells * ((params.ppc_lo + params.ppc_hi) / 2.0)));
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      points.push_back(Point{params.cols * rng.next_unit(), params.rows * rng.next_unit()});
    }
    return Instance(std::move(points));
  }

  if (params.target_cells > params.rows * params.cols) {
    fail(ErrorKind::Generation, "target cell count exceeds the grid area");
  }
  const std::vector<std::pair<int, int>> cells = params.mode == GenMode::ConnectedCells
                                                     ? detail::connected_cell_walk(rng, params)
                                                     : detail::clustered_cells(rng, params);
  for (const auto& [i, j] : cells) {
    const int count = rng.next_int(params.ppc_lo, params.ppc_hi);
    for (int c = 0; c < count; ++c) points.push_back(detail::point_in_cell(rng, i, j));
  }
  return Instance(std::move(points));
}

}  // namespace gridopt
