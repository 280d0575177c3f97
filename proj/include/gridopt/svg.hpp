#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "gridopt/geometry.hpp"
#include "gridopt/ggmst.hpp"
#include "gridopt/ggtsp.hpp"
#include "gridopt/io.hpp"

namespace gridopt {

namespace detail {

struct SvgCanvas {
  std::string body;
  std::int64_t min_i, max_i, min_j, max_j;

  explicit SvgCanvas(const Instance& inst) {
    min_i = max_i = inst.cell_order().front().i;
    min_j = max_j = inst.cell_order().front().j;
    for (const CellId& cell : inst.cell_order()) {
      min_i = std::min(min_i, cell.i);
      max_i = std::max(max_i, cell.i);
      min_j = std::min(min_j, cell.j);
      max_j = std::max(max_j, cell.j);
    }
  }

  // SVG y grows downward; geometry y is emitted negated.
  static std::string num(double v) { return format_double(v); }
  static std::string flip(double y) { return format_double(-y); }

  void shaded_cells(const Instance& inst) {
    for (const CellId& cell : inst.cell_order()) {
      body += "  <rect x=\"" + num(static_cast<double>(cell.i)) + "\" y=\"" +
              flip(static_cast<double>(cell.j + 1)) +
              "\" width=\"1\" height=\"1\" fill=\"#dbeafe\"/>\n";
    }
  }

  void grid_lines() {
    std::string d;
    for (std::int64_t i = min_i - 1; i <= max_i + 2; ++i) {
      d += "M" + num(static_cast<double>(i)) + " " + flip(static_cast<double>(max_j + 2)) + "V" +
           flip(static_cast<double>(min_j - 1));
    }
    for (std::int64_t j = min_j - 1; j <= max_j + 2; ++j) {
      d += "M" + num(static_cast<double>(min_i - 1)) + " " + flip(static_cast<double>(j)) + "H" +
           num(static_cast<double>(max_i + 2));
    }
    body += "  <path d=\"" + d + "\" stroke=\"#9ca3af\" stroke-width=\"0.02\" fill=\"none\"/>\n";
  }

  void segment(const Point& a, const Point& b) {
    body += "  <line x1=\"" + num(a.x) + "\" y1=\"" + flip(a.y) + "\" x2=\"" + num(b.x) +
            "\" y2=\"" + flip(b.y) + "\" stroke=\"#dc2626\" stroke-width=\"0.04\"/>\n";
  }

  void tour_polygon(const Instance& inst, const Tour& tour) {
    std::string pts;
    for (int p : tour.order) {
      const Point& point = inst.point(p);
      pts += (pts.empty() ? "" : " ") + num(point.x) + "," + flip(point.y);
    }
    body += "  <polygon points=\"" + pts +
            "\" fill=\"none\" stroke=\"#dc2626\" stroke-width=\"0.04\"/>\n";
  }

  void points(const Instance& inst) {
    for (const Point& p : inst.points()) {
      body += "  <circle cx=\"" + num(p.x) + "\" cy=\"" + flip(p.y) +
              "\" r=\"0.07\" fill=\"#111827\"/>\n";
    }
  }

  std::string finish() const {
    const double x0 = static_cast<double>(min_i - 1);
    const double y0 = -static_cast<double>(max_j + 2);
    const double width = static_cast<double>(max_i + 2 - (min_i - 1));
    const double height = static_cast<double>(max_j + 2 - (min_j - 1));
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(x0) + " " +
                      num(y0) + " " + num(width) + " " + num(height) + "\" width=\"" +
                      num(width * 48) + "\" height=\"" + num(height * 48) + "\">\n";
    out += body;
    out += "</svg>\n";
    return out;
  }
};

}  // namespace detail

inline std::string render_svg(const Instance& inst) {
  detail::SvgCanvas canvas(inst);
  canvas.shaded_cells(inst);
  canvas.grid_lines();
  canvas.points(inst);
  return canvas.finish();
}

inline std::string render_svg(const Instance& inst, const GgmstSolution& solution) {
  detail::SvgCanvas canvas(inst);
  canvas.shaded_cells(inst);
  canvas.grid_lines();
  for (const auto& [p, q] : solution.edges) canvas.segment(inst.point(p), inst.point(q));
  canvas.points(inst);
  return canvas.finish();
}

inline std::string render_svg(const Instance& inst, const Tour& tour) {
  detail::SvgCanvas canvas(inst);
  canvas.shaded_cells(inst);
  canvas.grid_lines();
  if (tour.order.size() > 1) canvas.tour_polygon(inst, tour);
  canvas.points(inst);
  return canvas.finish();
}

}  // namespace gridopt
