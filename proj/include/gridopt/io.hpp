#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gridopt/geometry.hpp"

namespace gridopt {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& message) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message);
}

inline std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace detail

/// GGRID text format: header `ggrid 1`, then the point count, then one
/// `x y` line per point. Lines starting with `#` are comments.
inline Instance parse_instance(std::string_view text) {
  int line_number = 0;
  std::size_t offset = 0;
  auto next_line = [&](std::string_view& out) {
    while (offset < text.size()) {
      ++line_number;
      std::size_t end = text.find('\n', offset);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = detail::trim_right(text.substr(offset, end - offset));
      offset = end + 1;
      if (!line.empty() && line.front() == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) detail::parse_fail(line_number + 1, "missing `ggrid 1` header");
  if (line != "ggrid 1") {
    detail::parse_fail(line_number, "expected `ggrid 1` header, got `" + std::string(line) + "`");
  }

  if (!next_line(line)) detail::parse_fail(line_number + 1, "missing point count");
  long long count = 0;
  {
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), count);
    if (ec != std::errc{} || ptr != line.data() + line.size() || count < 1) {
      detail::parse_fail(line_number, "point count must be a positive integer");
    }
  }

  auto parse_coordinate = [&](std::string_view& rest, double& out) {
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), out);
    if (ec != std::errc{}) detail::parse_fail(line_number, "expected a numeric coordinate");
    rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  };

  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    if (!next_line(line)) {
      detail::parse_fail(line_number + 1, "expected " + std::to_string(count) +
                                              " points, file ends after " + std::to_string(i));
    }
    Point p;
    std::string_view rest = line;
    parse_coordinate(rest, p.x);
    parse_coordinate(rest, p.y);
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    if (!rest.empty()) detail::parse_fail(line_number, "trailing characters after coordinates");
    if (!point_is_valid(p)) detail::parse_fail(line_number, "coordinate out of accepted range");
    points.push_back(p);
  }
  if (next_line(line)) detail::parse_fail(line_number, "unexpected content after the last point");
  return Instance(std::move(points));
}

inline std::string serialize_instance(const Instance& inst) {
  std::string out = "ggrid 1\n" + std::to_string(inst.point_count()) + "\n";
  for (const Point& p : inst.points()) {
    out += format_double(p.x);
    out += ' ';
    out += format_double(p.y);
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Parse, "cannot write " + path);
  out << content;
}

inline Instance load_instance(const std::string& path) {
  return parse_instance(read_text_file(path));
}

}  // namespace gridopt
