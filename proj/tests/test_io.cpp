#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>

#include "gridopt/bench.hpp"
#include "gridopt/generate.hpp"
#include "gridopt/io.hpp"
#include "gridopt/svg.hpp"
#include "support.hpp"

using namespace gridopt;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// minimal well-formedness scan: one root element, nested tags balance
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  int roots = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    if (tag.empty()) return false;
    if (tag.front() == '?') {
      pos = end + 1;
      continue;
    }
    const bool closing = tag.front() == '/';
    const bool self_closing = tag.back() == '/';
    std::string name = tag.substr(closing ? 1 : 0);
    name = name.substr(0, name.find_first_of(" \t\n/"));
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      if (stack.empty()) ++roots;
    } else if (!self_closing) {
      stack.push_back(name);
    } else if (stack.empty()) {
      ++roots;
    }
    pos = end + 1;
  }
  return stack.empty() && roots == 1;
}

}  // namespace

TEST_CASE("parse_instance minimal file") {
  const Instance inst = parse_instance("ggrid 1\n1\n0.5 0.5\n");
  REQUIRE(inst.point_count() == 1);
  REQUIRE(inst.cell_count() == 1);
}

TEST_CASE("parse_instance skips comments and tolerates CR") {
  const Instance inst =
      parse_instance("# leading comment\nggrid 1\r\n2\n# inner\n0.5 0.5\n1.5 0.5\n");
  REQUIRE(inst.point_count() == 2);
  REQUIRE(inst.cell_count() == 2);
}

TEST_CASE("parse_instance reports the offending line") {
  auto message_of = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  REQUIRE(message_of("ggrid 2\n1\n0.5 0.5\n").find("line 1") != std::string::npos);
  REQUIRE(message_of("ggrid 1\nxyz\n0.5 0.5\n").find("line 2") != std::string::npos);
  REQUIRE(message_of("ggrid 1\n2\n0.5 0.5\n").find("line 4") != std::string::npos);
  REQUIRE(message_of("ggrid 1\n1\n0.5 oops\n").find("line 3") != std::string::npos);
  REQUIRE(message_of("ggrid 1\n1\n0.5 0.5 9\n").find("trailing") != std::string::npos);
  REQUIRE(message_of("ggrid 1\n1\n0.5 0.5\n1.5 1.5\n").find("line 4") != std::string::npos);
  REQUIRE(testutil::thrown_kind([] { parse_instance("ggrid 1\n0\n"); }) == ErrorKind::Parse);
}

TEST_CASE("serialize then parse is the identity on canonical files") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testutil::small_random_instance(1900 + seed, 5, 1, 3);
    const std::string canonical = serialize_instance(inst);
    const Instance reparsed = parse_instance(canonical);
    REQUIRE(serialize_instance(reparsed) == canonical);
    REQUIRE(reparsed.points() == inst.points());
  }
}

TEST_CASE("format_double round trips exactly") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    double value = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2000.0 - 1000.0;
    const std::string text = format_double(value);
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    REQUIRE(ec == std::errc{});
    REQUIRE(parsed == value);
  }
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(3.0) == "3");
  REQUIRE(format_double(-0.25) == "-0.25");
}

TEST_CASE("a 21-point file over 8 cells has N = 7") {
  std::string text = "ggrid 1\n21\n";
  const std::vector<std::pair<int, int>> cells = {{0, 0}, {1, 0}, {2, 0}, {2, 1},
                                                  {3, 1}, {4, 1}, {4, 2}, {3, 2}};
  int emitted = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const int count = (c < 5) ? 3 : 2;  // 3*5 + 2*3 = 21
    for (int i = 0; i < count && emitted < 21; ++i, ++emitted) {
      text += format_double(cells[c].first + 0.2 + 0.2 * i) + " " +
              format_double(cells[c].second + 0.3 + 0.2 * i) + "\n";
    }
  }
  const Instance inst = parse_instance(text);
  REQUIRE(inst.point_count() == 21);
  REQUIRE(inst.cell_count() == 8);
  REQUIRE(inst.feasible_edge_count() == 7);
}

TEST_CASE("generation is deterministic in the seed") {
  GenParams params;
  params.mode = GenMode::ConnectedCells;
  params.rows = 5;
  params.cols = 5;
  params.target_cells = 8;
  params.seed = 42;
  const std::string first = serialize_instance(generate_instance(params));
  const std::string second = serialize_instance(generate_instance(params));
  REQUIRE(first == second);
  params.seed = 43;
  REQUIRE(serialize_instance(generate_instance(params)) != first);
}

TEST_CASE("connected-cells mode produces an 8-neighbor connected cell set") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenParams params;
    params.mode = GenMode::ConnectedCells;
    params.rows = 6;
    params.cols = 6;
    params.target_cells = 8;
    params.ppc_lo = 1;
    params.ppc_hi = 3;
    params.seed = seed;
    const Instance inst = generate_instance(params);
    REQUIRE(inst.cell_count() == 8);

    // BFS over 8-neighbor adjacency
    const auto& order = inst.cell_order();
    std::set<CellId> todo(order.begin() + 1, order.end());
    std::vector<CellId> stack{order.front()};
    while (!stack.empty()) {
      const CellId cell = stack.back();
      stack.pop_back();
      for (auto it = todo.begin(); it != todo.end();) {
        if (std::abs(it->i - cell.i) <= 1 && std::abs(it->j - cell.j) <= 1) {
          stack.push_back(*it);
          it = todo.erase(it);
        } else {
          ++it;
        }
      }
    }
    REQUIRE(todo.empty());

    for (int c = 0; c < inst.cell_count(); ++c) {
      const auto size = static_cast<int>(inst.points_in_cell(c).size());
      REQUIRE(size >= params.ppc_lo);
      REQUIRE(size <= params.ppc_hi);
    }
  }
}

TEST_CASE("uniform-box mode stays inside the extent") {
  GenParams params;
  params.mode = GenMode::UniformBox;
  params.rows = 3;
  params.cols = 5;
  params.target_cells = 10;
  params.seed = 9;
  const Instance inst = generate_instance(params);
  for (const CellId& cell : inst.cell_order()) {
    REQUIRE(cell.i >= 0);
    REQUIRE(cell.i < 5);
    REQUIRE(cell.j >= 0);
    REQUIRE(cell.j < 3);
  }
}

TEST_CASE("clustered mode hits the target cell count") {
  GenParams params;
  params.mode = GenMode::Clustered;
  params.rows = 6;
  params.cols = 6;
  params.target_cells = 9;
  params.seed = 4;
  const Instance inst = generate_instance(params);
  REQUIRE(inst.cell_count() == 9);
}

TEST_CASE("generation rejects unsatisfiable parameters") {
  GenParams params;
  params.mode = GenMode::ConnectedCells;
  params.rows = 3;
  params.cols = 3;
  params.target_cells = 50;
  REQUIRE(testutil::thrown_kind([&] { generate_instance(params); }) == ErrorKind::Generation);
  params.target_cells = 0;
  REQUIRE(testutil::thrown_kind([&] { generate_instance(params); }) == ErrorKind::Generation);
  params.target_cells = 4;
  params.ppc_lo = 3;
  params.ppc_hi = 2;
  REQUIRE(testutil::thrown_kind([&] { generate_instance(params); }) == ErrorKind::Generation);
}

TEST_CASE("gen mode names round trip") {
  for (GenMode mode : {GenMode::UniformBox, GenMode::ConnectedCells, GenMode::Clustered}) {
    REQUIRE(parse_gen_mode(to_string(mode)) == mode);
  }
  REQUIRE(testutil::thrown_kind([] { parse_gen_mode("spiral"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("svg rendering") {
  const Instance inst({{0.5, 0.5}, {1.5, 0.5}, {2.5, 0.5}});

  const std::string plain = render_svg(inst);
  REQUIRE(xml_well_formed(plain));
  REQUIRE(count_occurrences(plain, "<line") == 0);
  REQUIRE(count_occurrences(plain, "<circle") == 3);
  REQUIRE(count_occurrences(plain, "<rect") == 3);

  const GgmstSolution tree = approximate_ggmst(inst);
  const std::string with_tree = render_svg(inst, tree);
  REQUIRE(xml_well_formed(with_tree));
  REQUIRE(count_occurrences(with_tree, "<line") == 2);

  const Tour tour = double_tree_tour(inst, tree);
  const std::string with_tour = render_svg(inst, tour);
  REQUIRE(xml_well_formed(with_tour));
  REQUIRE(count_occurrences(with_tour, "<polygon") == 1);

  // deterministic output
  REQUIRE(render_svg(inst, tree) == with_tree);
}

TEST_CASE("bench: empty suite yields a header-only report") {
  SuiteConfig cfg;
  cfg.count = 0;
  const BenchResult result = run_benchmark(cfg);
  REQUIRE(result.records.empty());
  REQUIRE(result.audits_ok);
  REQUIRE(result.csv.rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);
  const int lines = count_occurrences(result.csv, "\n");
  REQUIRE(lines == 3);  // header + two summary rows
}

TEST_CASE("bench: singleton-cell suite has ratio one") {
  SuiteConfig cfg;
  cfg.count = 6;
  cfg.seed = 11;
  cfg.ppc_lo = 1;
  cfg.ppc_hi = 1;
  cfg.cells_lo = 3;
  cfg.cells_hi = 5;
  cfg.oracle = true;
  cfg.solvers = {"ggmst-approx", "ggmst-auto"};
  const BenchResult result = run_benchmark(cfg);
  REQUIRE(result.audits_ok);
  REQUIRE(result.records.size() == 12);
  for (const BenchRecord& record : result.records) {
    REQUIRE(record.ratio.has_value());
    REQUIRE_THAT(*record.ratio, Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
  REQUIRE(result.max_ratio.has_value());
  REQUIRE_THAT(*result.max_ratio, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("bench: csv is deterministic and schema stable") {
  SuiteConfig cfg;
  cfg.count = 5;
  cfg.seed = 3;
  cfg.oracle = true;
  const BenchResult first = run_benchmark(cfg);
  const BenchResult second = run_benchmark(cfg);
  REQUIRE(first.csv == second.csv);

  const std::string header = first.csv.substr(0, first.csv.find('\n'));
  REQUIRE(header == kBenchCsvHeader);
  // 5 instances x 4 solvers + header + 2 summary rows
  REQUIRE(count_occurrences(first.csv, "\n") == 23);
  for (const BenchRecord& record : first.records) {
    if (record.ratio) REQUIRE(*record.ratio >= 1.0 - kWeightTol);
  }
}

TEST_CASE("bench: suite config parsing") {
  const SuiteConfig cfg = parse_suite_config(R"({
    "count": 7,
    "seed": 99,
    "modes": ["uniform-box"],
    "rows": 3,
    "cols": 4,
    "cells": [2, 5],
    "ppc": [1, 2],
    "epsilon": 0.25,
    "solvers": ["ggmst-approx"],
    "oracle": true,
    "threads": 2
  })");
  REQUIRE(cfg.count == 7);
  REQUIRE(cfg.seed == 99);
  REQUIRE(cfg.modes == std::vector<GenMode>{GenMode::UniformBox});
  REQUIRE(cfg.rows == 3);
  REQUIRE(cfg.cols == 4);
  REQUIRE(cfg.cells_lo == 2);
  REQUIRE(cfg.cells_hi == 5);
  REQUIRE(cfg.ppc_lo == 1);
  REQUIRE(cfg.ppc_hi == 2);
  REQUIRE(cfg.epsilon == 0.25);
  REQUIRE(cfg.solvers == std::vector<std::string>{"ggmst-approx"});
  REQUIRE(cfg.oracle);
  REQUIRE(cfg.threads == 2);

  REQUIRE(testutil::thrown_kind([] { parse_suite_config("{nope"); }) == ErrorKind::Parse);
  REQUIRE(testutil::thrown_kind([] { parse_suite_config(R"({"cells": [5, 2]})"); }) ==
          ErrorKind::Parse);
  REQUIRE(testutil::thrown_kind([] { parse_suite_config(R"({"count": "many"})"); }) ==
          ErrorKind::Parse);
}

TEST_CASE("bench: unknown solver fails fast") {
  SuiteConfig cfg;
  cfg.count = 1;
  cfg.solvers = {"simulated-annealing"};
  REQUIRE(testutil::thrown_kind([&] { run_benchmark(cfg); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("bench: oracle-skipped records are marked") {
  SuiteConfig cfg;
  cfg.count = 1;
  cfg.seed = 8;
  cfg.cells_lo = 13;  // beyond the exact-tour cell cap
  cfg.cells_hi = 13;
  cfg.rows = 6;
  cfg.cols = 6;
  cfg.ppc_lo = 1;
  cfg.ppc_hi = 1;
  cfg.oracle = true;
  cfg.solvers = {"ggtsp-double-tree"};
  const BenchResult result = run_benchmark(cfg);
  REQUIRE(result.records.size() == 1);
  REQUIRE(result.records[0].oracle_skipped);
  REQUIRE(result.csv.find("oracle-skipped") != std::string::npos);
  REQUIRE(result.audits_ok);
}

TEST_CASE("bench: file-sourced instances") {
  const Instance inst = testutil::small_random_instance(55, 4, 1, 2);
  const std::string path = "/tmp/gridopt_bench_input.ggrid";
  write_text_file(path, serialize_instance(inst));
  SuiteConfig cfg;
  cfg.files = {path};
  cfg.oracle = true;
  cfg.solvers = {"ggmst-approx"};
  const BenchResult result = run_benchmark(cfg);
  REQUIRE(result.records.size() == 1);
  REQUIRE(result.records[0].instance_id == path);
  REQUIRE(result.records[0].n == inst.point_count());
  REQUIRE(result.audits_ok);
}
