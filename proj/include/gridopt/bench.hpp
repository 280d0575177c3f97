#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridopt/generate.hpp"
#include "gridopt/io.hpp"
#include "gridopt/oracle.hpp"
#include "gridopt/solve.hpp"

namespace gridopt {

inline constexpr std::string_view kBenchCsvHeader =
    "instance,n,k,N,solver,weight,opt_weight,ratio,ms,min_margin";

struct SuiteConfig {
  int count = 20;
  std::uint64_t seed = 1;
  std::vector<GenMode> modes{GenMode::ConnectedCells, GenMode::UniformBox, GenMode::Clustered};
  int rows = 4;
  int cols = 4;
  int cells_lo = 3;
  int cells_hi = 8;
  int ppc_lo = 1;
  int ppc_hi = 3;
  double epsilon = 0.5;
  std::vector<std::string> solvers{"ggmst-approx", "ggmst-auto", "ggtsp-double-tree",
                                   "ggtsp-christofides"};
  bool oracle = false;
  /// Real wall-clock times in the ms column. Off by default so reports are
  /// byte-reproducible.
  bool timing = false;
  std::vector<std::string> files;  // when non-empty, replaces generation
  int threads = 0;                 // 0: pick automatically
};

inline SuiteConfig parse_suite_config(const std::string& json_text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("suite config: ") + e.what());
  }
  SuiteConfig cfg;
  try {
    if (parsed.contains("count")) cfg.count = parsed["count"].get<int>();
    if (parsed.contains("seed")) cfg.seed = parsed["seed"].get<std::uint64_t>();
    if (parsed.contains("modes")) {
      cfg.modes.clear();
      for (const auto& m : parsed["modes"]) cfg.modes.push_back(parse_gen_mode(m.get<std::string>()));
    }
    if (parsed.contains("rows")) cfg.rows = parsed["rows"].get<int>();
    if (parsed.contains("cols")) cfg.cols = parsed["cols"].get<int>();
    if (parsed.contains("cells")) {
      cfg.cells_lo = parsed["cells"].at(0).get<int>();
      cfg.cells_hi = parsed["cells"].at(1).get<int>();
    }
    if (parsed.contains("ppc")) {
      cfg.ppc_lo = parsed["ppc"].at(0).get<int>();
      cfg.ppc_hi = parsed["ppc"].at(1).get<int>();
    }
    if (parsed.contains("epsilon")) cfg.epsilon = parsed["epsilon"].get<double>();
    if (parsed.contains("solvers")) {
      cfg.solvers = parsed["solvers"].get<std::vector<std::string>>();
    }
    if (parsed.contains("oracle")) cfg.oracle = parsed["oracle"].get<bool>();
    if (parsed.contains("timing")) cfg.timing = parsed["timing"].get<bool>();
    if (parsed.contains("files")) cfg.files = parsed["files"].get<std::vector<std::string>>();
    if (parsed.contains("threads")) cfg.threads = parsed["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("suite config: ") + e.what());
  }
  if (cfg.count < 0 || cfg.cells_lo < 1 || cfg.cells_hi < cfg.cells_lo || cfg.ppc_lo < 1 ||
      cfg.ppc_hi < cfg.ppc_lo || !(cfg.epsilon > 0.0)) {
    fail(ErrorKind::Parse, "suite config: invalid ranges");
  }
  return cfg;
}

struct BenchRecord {
  std::string instance_id;
  int n = 0;
  int k = 0;
  int edge_count = 0;  // N
  std::string solver;
  double weight = 0.0;
  std::optional<double> opt_weight;
  bool oracle_skipped = false;
  std::optional<double> ratio;
  double ms = 0.0;
  std::optional<double> min_margin;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  bool audits_ok = true;
  std::optional<double> max_ratio;
  std::optional<double> mean_ratio;
  std::optional<double> min_margin;
  std::string csv;
};

namespace detail {

struct TimedRun {
  double weight = 0.0;
  double ms = 0.0;
};

inline bool is_tree_solver(const std::string& name) {
  return name == "ggmst-approx" || name == "ggmst-auto";
}

inline void run_one_instance(const SuiteConfig& cfg, const Instance& inst,
                             const std::string& instance_id, std::vector<BenchRecord>& out) {
  const SolverConfig solver_cfg{cfg.epsilon, kDefaultEnumerationCap, kDefaultSelectionCap};

  std::optional<GgmstSolution> tree_opt;
  std::optional<Tour> tour_opt;
  bool tree_oracle_skipped = false;
  bool tour_oracle_skipped = false;
  if (cfg.oracle) {
    try {
      tree_opt = exact_ggmst(inst);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleOracle) throw;
      tree_oracle_skipped = true;
    }
    try {
      tour_opt = exact_ggtsp(inst);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasibleOracle) throw;
      tour_oracle_skipped = true;
    }
  }

  std::optional<double> g0_weight;  // set when ggmst-approx runs

  for (const std::string& solver : cfg.solvers) {
    BenchRecord record;
    record.instance_id = instance_id;
    record.n = inst.point_count();
    record.k = inst.cell_count();
    record.edge_count = inst.feasible_edge_count();
    record.solver = solver;

    const auto start = std::chrono::steady_clock::now();
    std::vector<double> margins;
    if (solver == "ggmst-approx" || solver == "ggmst-auto") {
      GgmstSolution solution;
      if (solver == "ggmst-approx") {
        const CellLevelMst base = cell_level_mst(inst);
        g0_weight = total_weight(base.g0);
        solution = median_merge(inst, base.cell_tree, base.g0);
      } else {
        solution = solve_ggmst(inst, solver_cfg).solution;
      }
      record.weight = solution.weight;
      margins.push_back(verify_edge_count_bound(solution).margin);
      if (tree_opt) {
        record.opt_weight = tree_opt->weight;
        margins.push_back(verify_gap_bound(solution, *tree_opt).margin);
        const double ratio_bound =
            (1.0 + 4.0 * std::numbers::sqrt2) * tree_opt->weight + 2.0 * std::numbers::sqrt2;
        margins.push_back(ratio_bound - solution.weight);
        if (solver == "ggmst-approx" && g0_weight) {
          margins.push_back(tree_opt->weight - *g0_weight);
        }
      }
      record.oracle_skipped = cfg.oracle && tree_oracle_skipped;
    } else if (solver == "ggtsp-double-tree" || solver == "ggtsp-christofides") {
      const TourVariant variant = solver == "ggtsp-double-tree" ? TourVariant::DoubleTree
                                                                : TourVariant::Christofides;
      const Tour tour = solve_ggtsp(inst, solver_cfg, variant).tour;
      record.weight = tour.weight;
      if (tour_opt) {
        record.opt_weight = tour_opt->weight;
        const double factor = variant == TourVariant::DoubleTree
                                  ? 2.0 + 8.0 * std::numbers::sqrt2
                                  : 1.5 + 8.0 * std::numbers::sqrt2;
        const double additive = variant == TourVariant::DoubleTree
                                    ? 4.0 * std::numbers::sqrt2
                                    : 5.0 * std::numbers::sqrt2;
        margins.push_back(factor * tour_opt->weight + additive - tour.weight);
      }
      record.oracle_skipped = cfg.oracle && tour_oracle_skipped;
    } else {
      fail(ErrorKind::InvalidArgument, "unknown solver `" + solver + "`");
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;
    if (cfg.timing) {
      record.ms = std::chrono::duration<double, std::milli>(elapsed).count();
    }

    if (record.opt_weight) {
      record.ratio = *record.opt_weight > 0.0 ? record.weight / *record.opt_weight : 1.0;
    }
    if (!margins.empty()) {
      double m = margins.front();
      for (double value : margins) m = std::min(m, value);
      record.min_margin = m;
    }
    out.push_back(std::move(record));
  }
}

inline std::string csv_field(const std::optional<double>& value) {
  return value ? format_double(*value) : "";
}

}  // namespace detail

/// Runs every configured solver on every instance of the suite. Instances
/// are processed concurrently; records are collected per instance slot and
/// written in instance order, so the report is deterministic regardless of
/// scheduling.
inline BenchResult run_benchmark(const SuiteConfig& cfg) {
  const bool from_files = !cfg.files.empty();
  const int instance_count = from_files ? static_cast<int>(cfg.files.size()) : cfg.count;

  std::vector<std::vector<BenchRecord>> slots(static_cast<std::size_t>(instance_count));
  std::vector<std::string> errors(static_cast<std::size_t>(instance_count));
  std::atomic<int> next{0};

  auto process = [&](int index) {
    try {
      std::string id;
      std::optional<Instance> inst;
      if (from_files) {
        id = cfg.files[static_cast<std::size_t>(index)];
        inst = load_instance(id);
      } else {
        const std::uint64_t derived =
            cfg.seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(index) + 1u);
        detail::Rng rng(derived);
        GenParams params;
        params.mode = cfg.modes[static_cast<std::size_t>(index) % cfg.modes.size()];
        params.rows = cfg.rows;
        params.cols = cfg.cols;
        params.ppc_lo = cfg.ppc_lo;
        params.ppc_hi = cfg.ppc_hi;
        params.target_cells = rng.next_int(cfg.cells_lo, cfg.cells_hi);
        params.seed = derived + 1;
        id = std::string(to_string(params.mode)) + "-s" + std::to_string(cfg.seed) + "-" +
             std::to_string(index);
        inst = generate_instance(params);
      }
      detail::run_one_instance(cfg, *inst, id, slots[static_cast<std::size_t>(index)]);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(index)] = e.what();
    }
  };

  int thread_count = cfg.threads > 0
                         ? cfg.threads
                         : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  thread_count = std::min(thread_count, std::max(1, instance_count));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) {
    workers.emplace_back([&] {
      for (int index = next.fetch_add(1); index < instance_count; index = next.fetch_add(1)) {
        process(index);
      }
    });
  }
  for (std::thread& worker : workers) worker.join();
  for (const std::string& message : errors) {
    if (!message.empty()) fail(ErrorKind::InvalidArgument, "benchmark instance failed: " + message);
  }

  BenchResult result;
  for (auto& slot : slots) {
    for (BenchRecord& record : slot) result.records.push_back(std::move(record));
  }

  double total_ms = 0.0;
  double ratio_sum = 0.0;
  int ratio_count = 0;
  for (const BenchRecord& record : result.records) {
    total_ms += record.ms;
    if (record.ratio) {
      result.max_ratio = std::max(result.max_ratio.value_or(*record.ratio), *record.ratio);
      ratio_sum += *record.ratio;
      ++ratio_count;
      if (*record.ratio < 1.0 - kWeightTol) result.audits_ok = false;
    }
    if (record.min_margin) {
      result.min_margin = std::min(result.min_margin.value_or(*record.min_margin),
                                   *record.min_margin);
      if (*record.min_margin < -kWeightTol) result.audits_ok = false;
    }
  }
  if (ratio_count > 0) result.mean_ratio = ratio_sum / ratio_count;

  std::string csv = std::string(kBenchCsvHeader) + "\n";
  for (const BenchRecord& record : result.records) {
    csv += record.instance_id + "," + std::to_string(record.n) + "," + std::to_string(record.k) +
           "," + std::to_string(record.edge_count) + "," + record.solver + "," +
           format_double(record.weight) + ",";
    csv += record.oracle_skipped ? "oracle-skipped" : detail::csv_field(record.opt_weight);
    csv += "," + detail::csv_field(record.ratio) + "," +
           std::to_string(static_cast<long long>(std::llround(record.ms))) + "," +
           detail::csv_field(record.min_margin) + "\n";
  }
  csv += "summary,,,,max-ratio,,," + detail::csv_field(result.max_ratio) + "," +
         std::to_string(static_cast<long long>(std::llround(total_ms))) + "," +
         detail::csv_field(result.min_margin) + "\n";
  csv += "summary,,,,mean-ratio,,," + detail::csv_field(result.mean_ratio) + ",," +
         detail::csv_field(result.min_margin) + "\n";
  result.csv = std::move(csv);
  return result;
}

}  // namespace gridopt
