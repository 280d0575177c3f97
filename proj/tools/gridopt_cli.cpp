// Command-line frontend: solve, exact, generate, benchmark, audit, render.
//
// Exit codes: 0 success, 1 usage or parse error, 2 audit failure,
// 3 infeasible oracle request.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gridopt/bench.hpp"
#include "gridopt/generate.hpp"
#include "gridopt/io.hpp"
#include "gridopt/oracle.hpp"
#include "gridopt/solve.hpp"
#include "gridopt/svg.hpp"

namespace {

using namespace gridopt;

void print_instance_header(const Instance& inst) {
  std::cout << "n " << inst.point_count() << "\n";
  std::cout << "k " << inst.cell_count() << "\n";
  std::cout << "N " << inst.feasible_edge_count() << "\n";
}

void print_tree(const Instance& inst, const GgmstSolution& solution, std::string_view method) {
  print_instance_header(inst);
  std::cout << "method " << method << "\n";
  std::cout << "weight " << format_double(solution.weight) << "\n";
  for (const auto& [cell, point_index] : solution.chosen) {
    const Point& p = inst.point(point_index);
    std::cout << "cell " << cell.i << " " << cell.j << " point " << point_index << " "
              << format_double(p.x) << " " << format_double(p.y) << "\n";
  }
  for (const auto& [p, q] : solution.edges) {
    std::cout << "edge " << p << " " << q << " "
              << format_double(euclid(inst.point(p), inst.point(q))) << "\n";
  }
}

void print_tour(const Instance& inst, const Tour& tour, std::string_view method) {
  print_instance_header(inst);
  std::cout << "method " << method << "\n";
  std::cout << "weight " << format_double(tour.weight) << "\n";
  std::cout << "tour";
  for (int p : tour.order) std::cout << " " << p;
  std::cout << "\n";
}

struct CliOptions {
  std::string input;
  std::string output;
  std::string svg_path;
  double epsilon = 0.5;
  std::string variant = "double-tree";
  std::string problem = "mst";
  // gen
  std::string mode = "connected-cells";
  int rows = 4;
  int cols = 4;
  int cells = 6;
  std::string ppc = "1..3";
  std::uint64_t seed = 0;
  // bench
  std::string suite_path;
  bool oracle = false;
  bool timing = false;
  // audit
  std::string sizes = "4,7,8,9";
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) {
    fail(ErrorKind::Parse, "expected a LO..HI range, got `" + text + "`");
  }
  try {
    return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 2))};
  } catch (const std::exception&) {
    fail(ErrorKind::Parse, "expected a LO..HI range, got `" + text + "`");
  }
}

std::vector<int> parse_size_list(const std::string& text) {
  std::vector<int> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    try {
      sizes.push_back(std::stoi(text.substr(start, end - start)));
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "expected a comma-separated size list, got `" + text + "`");
    }
    start = end + 1;
  }
  return sizes;
}

int cmd_solve_ggmst(const CliOptions& opt) {
  const Instance inst = load_instance(opt.input);
  const SolverConfig cfg{opt.epsilon, kDefaultEnumerationCap, kDefaultSelectionCap};
  const GgmstResult result = solve_ggmst(inst, cfg);
  print_tree(inst, result.solution, to_string(result.provenance));
  if (!opt.svg_path.empty()) {
    write_text_file(opt.svg_path, render_svg(inst, result.solution));
    std::cout << "svg " << opt.svg_path << "\n";
  }
  return 0;
}

int cmd_solve_ggtsp(const CliOptions& opt) {
  const Instance inst = load_instance(opt.input);
  const SolverConfig cfg{opt.epsilon, kDefaultEnumerationCap, kDefaultSelectionCap};
  const TourVariant variant =
      opt.variant == "christofides" ? TourVariant::Christofides : TourVariant::DoubleTree;
  if (opt.variant != "christofides" && opt.variant != "double-tree") {
    fail(ErrorKind::InvalidArgument, "variant must be double-tree or christofides");
  }
  const GgtspResult result = solve_ggtsp(inst, cfg, variant);
  print_tour(inst, result.tour, to_string(result.provenance));
  return 0;
}

int cmd_exact(const CliOptions& opt) {
  const Instance inst = load_instance(opt.input);
  if (opt.problem == "mst") {
    print_tree(inst, exact_ggmst(inst), "exact-selection");
  } else if (opt.problem == "tsp") {
    print_tour(inst, exact_ggtsp(inst), "exact");
  } else {
    fail(ErrorKind::InvalidArgument, "problem must be mst or tsp");
  }
  return 0;
}

int cmd_gen(const CliOptions& opt) {
  GenParams params;
  params.mode = parse_gen_mode(opt.mode);
  params.rows = opt.rows;
  params.cols = opt.cols;
  params.target_cells = opt.cells;
  std::tie(params.ppc_lo, params.ppc_hi) = parse_range(opt.ppc);
  params.seed = opt.seed;
  const Instance inst = generate_instance(params);
  write_text_file(opt.output, serialize_instance(inst));
  std::cout << "wrote " << opt.output << " n " << inst.point_count() << " k "
            << inst.cell_count() << " N " << inst.feasible_edge_count() << "\n";
  return 0;
}

int cmd_bench(const CliOptions& opt) {
  SuiteConfig cfg;
  if (!opt.suite_path.empty()) cfg = parse_suite_config(read_text_file(opt.suite_path));
  if (opt.oracle) cfg.oracle = true;
  if (opt.timing) cfg.timing = true;
  const BenchResult result = run_benchmark(cfg);
  write_text_file(opt.output, result.csv);
  std::cout << "wrote " << opt.output << " records " << result.records.size();
  if (result.max_ratio) std::cout << " max-ratio " << format_double(*result.max_ratio);
  if (result.mean_ratio) std::cout << " mean-ratio " << format_double(*result.mean_ratio);
  if (result.min_margin) std::cout << " min-margin " << format_double(*result.min_margin);
  std::cout << " audits " << (result.audits_ok ? "pass" : "fail") << "\n";
  return result.audits_ok ? 0 : 2;
}

void print_entry(const AuditEntry& entry) {
  std::cout << "check " << entry.name << " "
            << (entry.skipped ? "skip" : (entry.pass ? "pass" : "fail"));
  if (!entry.skipped) std::cout << " margin " << format_double(entry.margin);
  if (!entry.witness.empty()) std::cout << " (" << entry.witness << ")";
  std::cout << "\n";
}

int cmd_audit(const CliOptions& opt) {
  const Instance inst = load_instance(opt.input);
  const std::vector<int> sizes = parse_size_list(opt.sizes);

  const CellLevelMst base = cell_level_mst(inst);
  const GgmstSolution approx = median_merge(inst, base.cell_tree, base.g0);
  std::optional<GgmstSolution> exact;
  try {
    exact = exact_ggmst(inst);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InfeasibleOracle) throw;
    std::cout << "note oracle infeasible, auditing the approximate solution only\n";
  }

  AuditReport report;
  report.entries.push_back(verify_edge_count_bound(approx));
  report.entries.back().name += "-approx";
  if (exact) {
    report.entries.push_back(verify_edge_count_bound(*exact));
    report.entries.back().name += "-exact";
    report.entries.push_back(verify_gap_bound(approx, *exact));
    AuditEntry g0_entry;
    g0_entry.name = "g0-lower-bound";
    g0_entry.margin = exact->weight - total_weight(base.g0);
    g0_entry.pass = g0_entry.margin >= -kWeightTol;
    report.entries.push_back(g0_entry);
  }
  const AuditReport subtree =
      audit_subtree_weights(inst, exact ? *exact : approx, sizes);
  for (const AuditEntry& entry : subtree.entries) report.entries.push_back(entry);

  for (const AuditEntry& entry : report.entries) print_entry(entry);
  std::cout << "audit " << (report.all_pass() ? "pass" : "fail") << " min-margin "
            << format_double(report.min_margin()) << "\n";
  return report.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solvers for the generalized MST and TSP on unit-grid clusters"};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* solve_mst = app.add_subcommand("solve-ggmst", "solve the grid-cluster MST");
  solve_mst->add_option("file", opt.input, "GGRID instance file")->required();
  solve_mst->add_option("--epsilon", opt.epsilon, "approximation slack (default 0.5)");
  solve_mst->add_option("--svg", opt.svg_path, "write an SVG rendering of the solution");

  CLI::App* solve_tsp = app.add_subcommand("solve-ggtsp", "solve the grid-cluster TSP");
  solve_tsp->add_option("file", opt.input, "GGRID instance file")->required();
  solve_tsp->add_option("--variant", opt.variant, "double-tree or christofides");
  solve_tsp->add_option("--epsilon", opt.epsilon, "approximation slack (default 0.5)");

  CLI::App* exact = app.add_subcommand("exact", "exact solution by enumeration");
  exact->add_option("file", opt.input, "GGRID instance file")->required();
  exact->add_option("--problem", opt.problem, "mst or tsp (default mst)");

  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--mode", opt.mode, "uniform-box, connected-cells or clustered");
  gen->add_option("--rows", opt.rows, "grid rows");
  gen->add_option("--cols", opt.cols, "grid columns");
  gen->add_option("--cells", opt.cells, "target non-empty cell count");
  gen->add_option("--ppc", opt.ppc, "points per cell, LO..HI");
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("-o,--output", opt.output, "output file")->required();

  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", opt.suite_path, "suite config (JSON)");
  bench->add_flag("--oracle", opt.oracle, "compare against the exact oracle");
  bench->add_flag("--timing", opt.timing, "record wall-clock times (breaks reproducibility)");
  bench->add_option("-o,--output", opt.output, "CSV report path")->required();

  CLI::App* audit = app.add_subcommand("audit", "verify proved bounds on an instance");
  audit->add_option("file", opt.input, "GGRID instance file")->required();
  audit->add_option("--lemmas", opt.sizes, "subtree sizes to audit, subset of 4,7,8,9");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(solve_mst)) return cmd_solve_ggmst(opt);
    if (app.got_subcommand(solve_tsp)) return cmd_solve_ggtsp(opt);
    if (app.got_subcommand(exact)) return cmd_exact(opt);
    if (app.got_subcommand(gen)) return cmd_gen(opt);
    if (app.got_subcommand(bench)) return cmd_bench(opt);
    if (app.got_subcommand(audit)) return cmd_audit(opt);
  } catch (const gridopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == gridopt::ErrorKind::InfeasibleOracle ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
