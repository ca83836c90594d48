#include "afom/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace afom {

long worst_case_iterations(double eps_rel, int m, int n, double alpha) {
  if (!(eps_rel > 0.0))
    throw std::invalid_argument("worst_case_iterations: eps must be positive");
  if (m < 1 || n < 1 || alpha < 0.0)
    throw std::invalid_argument("worst_case_iterations: bad arguments");
  const double raw =
      4.0 * std::sqrt((1.0 + alpha) * std::log(static_cast<double>(m)) *
                      std::log(static_cast<double>(n))) /
          eps_rel -
      1.0;
  return std::max(0L, static_cast<long>(std::ceil(raw)));
}

RepeatResult solve_instance(const EigInstance& instance, const RunConfig& config) {
  RepeatResult result;
  result.seed = instance.seed;
  result.l_prime = instance.l_prime;
  result.eps_abs = config.eps * instance.l_prime;

  // Nonadaptive runs budget at alpha = 0; adaptive ones at the configured
  // alpha (twice the budget at alpha = 3).
  const double budget_alpha = config.strategy == "nonadaptive" ? 0.0 : config.alpha;
  result.iterations_theory = worst_case_iterations(config.eps, instance.m, instance.n,
                                                   budget_alpha);

  const auto start = std::chrono::steady_clock::now();
  try {
    const MinMaxProblem problem = make_minmax_problem(instance);
    const EntropySimplexSetup setup(instance.m);

    SmoothingSolveOptions options;
    options.mu = mu_for_accuracy(result.eps_abs, instance.n);
    options.strategy = parse_strategy(config.strategy, config.alpha, config.kappa);
    options.max_iters = config.max_iters >= 0
                            ? config.max_iters
                            : static_cast<int>(result.iterations_theory);
    options.gap_target = result.eps_abs;
    options.gap_check_period = config.gap_check_period;
    options.check_first_hundred = config.effective_check_first_hundred();

    SmoothingSolveResult solve =
        smoothing_solve(problem, setup, GammaSchedule::nesterov(), options);
    result.converged = solve.converged;
    result.iterations_practice = solve.iterations;
    result.final_gap = solve.gap;
    result.switch_back_iteration = solve.switch_back_iteration;
    result.trace = std::move(solve.trace);
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

RunReport run_benchmark(const RunConfig& config) {
  if (config.repeats < 1) throw std::invalid_argument("run_benchmark: repeats must be >= 1");
  if (!(config.eps > 0.0)) throw std::invalid_argument("run_benchmark: eps must be positive");
  if (config.alpha < 0.0) throw std::invalid_argument("run_benchmark: alpha must be >= 0");
  if (!(config.kappa > 0.0 && config.kappa < 1.0))
    throw std::invalid_argument("run_benchmark: kappa must be in (0,1)");

  RunReport report;
  report.config = config;
  double sum_practice = 0.0, sum_theory = 0.0, sum_wall = 0.0;
  int successes = 0;
  for (int r = 0; r < config.repeats; ++r) {
    const std::uint64_t repeat_seed = config.seed + static_cast<std::uint64_t>(r);
    RepeatResult result;
    try {
      const EigInstance instance =
          generate_instance(config.m, config.n, config.density, repeat_seed);
      result = solve_instance(instance, config);
    } catch (const std::exception& e) {
      result.ok = false;
      result.error = e.what();
      result.seed = repeat_seed;
    }
    if (result.ok) {
      ++successes;
      sum_practice += result.iterations_practice;
      sum_theory += static_cast<double>(result.iterations_theory);
      sum_wall += result.wall_ms;
    } else {
      ++report.failures;
    }
    report.repeats.push_back(std::move(result));
  }
  if (successes > 0) {
    report.avg_iterations_practice = sum_practice / successes;
    report.avg_iterations_theory = sum_theory / successes;
    report.avg_wall_ms = sum_wall / successes;
  }
  return report;
}

void emit_trace(const std::vector<IterationRecord>& records, const std::string& path,
                const RunReport* summary) {
  if (records.empty()) throw std::invalid_argument("emit_trace: empty trace");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_trace: cannot open " + path);
  out << std::setprecision(17);
  out << "t,L_t,f_ut,beta_t,gap,wall_ms\n";
  for (const IterationRecord& rec : records) {
    out << rec.t << "," << rec.l_t << "," << rec.f_u << "," << rec.beta << ",";
    if (rec.gap) out << *rec.gap;
    out << "," << rec.wall_ms << "\n";
  }
  if (!out) throw std::runtime_error("emit_trace: write failed for " + path);

  nlohmann::json summary_json;
  summary_json["rows"] = records.size();
  summary_json["final_t"] = records.back().t;
  summary_json["final_f_u"] = records.back().f_u;
  summary_json["final_beta"] = records.back().beta;
  if (records.back().gap) summary_json["final_gap"] = *records.back().gap;
  if (summary && !summary->repeats.empty()) {
    summary_json["converged"] = summary->repeats.front().converged;
    summary_json["switch_back_iteration"] = summary->repeats.front().switch_back_iteration;
  }
  std::ofstream sum_out(path + ".summary.json");
  if (!sum_out) throw std::runtime_error("emit_trace: cannot open summary for " + path);
  sum_out << summary_json.dump() << "\n";
  if (!sum_out) throw std::runtime_error("emit_trace: summary write failed for " + path);
}

namespace {

nlohmann::json repeat_to_json(const RepeatResult& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["ok"] = r.ok;
  if (!r.ok) j["error"] = r.error;
  j["converged"] = r.converged;
  j["iterations_practice"] = r.iterations_practice;
  j["iterations_theory"] = r.iterations_theory;
  j["final_gap"] = r.final_gap;
  j["eps_abs"] = r.eps_abs;
  j["l_prime"] = r.l_prime;
  j["wall_ms"] = r.wall_ms;
  j["switch_back_iteration"] = r.switch_back_iteration;
  return j;
}

}  // namespace

void write_report_json(const RunReport& report, const std::string& path) {
  nlohmann::json j;
  j["config"] = {{"m", report.config.m},
                 {"n", report.config.n},
                 {"density", report.config.density},
                 {"eps", report.config.eps},
                 {"strategy", report.config.strategy},
                 {"alpha", report.config.alpha},
                 {"kappa", report.config.kappa},
                 {"seed", report.config.seed},
                 {"repeats", report.config.repeats},
                 {"gap_check_period", report.config.gap_check_period}};
  j["avg_iterations_practice"] = report.avg_iterations_practice;
  j["avg_iterations_theory"] = report.avg_iterations_theory;
  j["avg_wall_ms"] = report.avg_wall_ms;
  j["failures"] = report.failures;
  j["repeats"] = nlohmann::json::array();
  for (const RepeatResult& r : report.repeats) j["repeats"].push_back(repeat_to_json(r));

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write_report_json: write failed for " + path);
}

namespace {

double reduction_percent(double original, double accelerated) {
  if (original == 0.0) return 0.0;
  return 100.0 * (1.0 - accelerated / original);
}

}  // namespace

CompareResult compare_methods(const RunConfig& base, const std::vector<int>& n_values,
                              const std::string& out_path) {
  if (n_values.empty()) throw std::invalid_argument("compare_methods: empty grid");

  CompareResult result;
  result.n_values = n_values;
  for (const int n : n_values) {
    RunConfig config = base;
    config.n = n;
    config.trace_path.clear();
    config.report_path.clear();
    config.strategy = "nonadaptive";
    result.nonadaptive.push_back(run_benchmark(config));
    config.strategy = "hybrid";
    result.hybrid.push_back(run_benchmark(config));
  }

  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "metric,method";
  for (const int n : n_values) csv << ",n=" << n;
  csv << "\n";
  const auto emit_metric = [&](const std::string& metric, auto getter) {
    csv << metric << ",nonadaptive";
    for (std::size_t i = 0; i < n_values.size(); ++i) csv << "," << getter(result.nonadaptive[i]);
    csv << "\n" << metric << ",hybrid";
    for (std::size_t i = 0; i < n_values.size(); ++i) csv << "," << getter(result.hybrid[i]);
    csv << "\n" << metric << ",reduction_pct";
    for (std::size_t i = 0; i < n_values.size(); ++i)
      csv << "," << reduction_percent(getter(result.nonadaptive[i]), getter(result.hybrid[i]));
    csv << "\n";
  };
  emit_metric("iterations_practice",
              [](const RunReport& r) { return r.avg_iterations_practice; });
  emit_metric("iterations_theory", [](const RunReport& r) { return r.avg_iterations_theory; });
  emit_metric("wall_ms", [](const RunReport& r) { return r.avg_wall_ms; });
  result.csv = csv.str();

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("compare_methods: cannot open " + out_path);
    out << result.csv;
    if (!out) throw std::runtime_error("compare_methods: write failed for " + out_path);
  }
  return result;
}

}  // namespace afom
