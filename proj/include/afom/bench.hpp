#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "afom/eigopt.hpp"
#include "afom/smoothing.hpp"

namespace afom {

/// Benchmark configuration mirroring the experimental protocol: relative
/// accuracy eps, gap checks every gap_check_period iterations plus (for
/// adaptive strategies) every one of the first hundred, instances
/// regenerated per repeat from seed + repeat index.
struct RunConfig {
  int m = 100;
  int n = 100;
  double density = 0.1;
  double eps = 0.002;  // relative accuracy; target gap is eps * l_prime
  std::string strategy = "hybrid";
  double alpha = 3.0;
  double kappa = 1e-12;
  std::uint64_t seed = 0;
  int repeats = 10;
  int gap_check_period = 100;
  std::optional<bool> check_first_hundred;  // default: on for adaptive strategies
  int max_iters = -1;                       // -1: the worst-case budget
  std::string trace_path;                   // empty: no trace file
  std::string report_path;                  // empty: no report file

  bool effective_check_first_hundred() const {
    if (check_first_hundred) return *check_first_hundred;
    return strategy != "nonadaptive";
  }
};

struct RepeatResult {
  std::uint64_t seed = 0;
  bool ok = true;           // false when the solver threw; error holds the message
  std::string error;
  bool converged = false;
  int iterations_practice = 0;
  long iterations_theory = 0;
  double final_gap = 0.0;
  double eps_abs = 0.0;  // eps * l_prime of this repeat's instance
  double l_prime = 0.0;
  double wall_ms = 0.0;
  int switch_back_iteration = -1;
  std::vector<IterationRecord> trace;
};

struct RunReport {
  RunConfig config;
  std::vector<RepeatResult> repeats;
  double avg_iterations_practice = 0.0;
  double avg_iterations_theory = 0.0;
  double avg_wall_ms = 0.0;
  int failures = 0;
};

/// Worst-case iteration count of the smoothed protocol,
///   ceil(4 sqrt((1+alpha) ln(m) ln(n)) / eps_rel - 1),
/// where eps_rel is the absolute target divided by the norm scale.
long worst_case_iterations(double eps_rel, int m, int n, double alpha);

/// Solves one instance with the configured strategy; eps, cadence and budget
/// as in run_benchmark.
RepeatResult solve_instance(const EigInstance& instance, const RunConfig& config);

/// Runs `repeats` solves on freshly generated instances (seed + repeat
/// index) and aggregates. Per-repeat failures are recorded and skipped in
/// the averages.
RunReport run_benchmark(const RunConfig& config);

/// Trace CSV: header t,L_t,f_ut,beta_t,gap,wall_ms; the gap column is empty
/// on iterations without a checkpoint. A one-line JSON summary is written
/// alongside to path + ".summary.json".
void emit_trace(const std::vector<IterationRecord>& records, const std::string& path,
                const RunReport* summary = nullptr);

void write_report_json(const RunReport& report, const std::string& path);

/// Strategy-comparison grid (nonadaptive vs hybrid across n values): a CSV
/// with one row per (metric, method) and one column per n, plus Reduction
/// rows computed as 100 * (1 - accelerated / original).
struct CompareResult {
  std::vector<int> n_values;
  std::vector<RunReport> nonadaptive;
  std::vector<RunReport> hybrid;
  std::string csv;
};
CompareResult compare_methods(const RunConfig& base, const std::vector<int>& n_values,
                              const std::string& out_path);

}  // namespace afom
