// Benchmark CLI: instance generation, single solves with trace/report
// emission, and the nonadaptive-vs-hybrid comparison grid.
//
// Exit codes: 0 converged (or non-solve commands succeeded), 2 iteration
// budget exhausted without reaching the gap target, 1 error.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afom/bench.hpp"
#include "afom/eigopt.hpp"

namespace {

std::vector<int> parse_grid(const std::string& grid) {
  std::vector<int> values;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stoi(item));
  }
  if (values.empty()) throw std::invalid_argument("empty --grid");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerated first-order methods: eigenvalue-minimization benchmark"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a random instance file");
  int gen_m = 100, gen_n = 100;
  double gen_density = 0.1;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  generate->add_option("--m", gen_m, "Number of matrices")->required();
  generate->add_option("--n", gen_n, "Matrix dimension")->required();
  generate->add_option("--density", gen_density, "Full-matrix nonzero fraction")->required();
  generate->add_option("--seed", gen_seed, "RNG seed")->required();
  generate->add_option("--out", gen_out, "Output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  std::string solve_instance_path;
  int solve_m = 100, solve_n = 100;
  double solve_density = 0.1;
  std::uint64_t solve_seed = 0;
  afom::RunConfig config;
  int solve_max_iters = -1;
  std::string trace_path, report_path;
  solve->add_option("--instance", solve_instance_path, "Instance file (overrides --m/--n)");
  solve->add_option("--m", solve_m, "Number of matrices");
  solve->add_option("--n", solve_n, "Matrix dimension");
  solve->add_option("--density", solve_density, "Full-matrix nonzero fraction");
  solve->add_option("--seed", solve_seed, "Instance RNG seed");
  solve->add_option("--eps", config.eps, "Relative accuracy (gap target eps * L')");
  solve->add_option("--strategy", config.strategy, "nonadaptive | aggressive | hybrid")
      ->check(CLI::IsMember({"nonadaptive", "aggressive", "hybrid"}));
  solve->add_option("--alpha", config.alpha, "Hybrid switch-back threshold");
  solve->add_option("--kappa", config.kappa, "Adaptive lower clamp factor");
  solve->add_option("--gap-check-every", config.gap_check_period, "Gap check period");
  solve->add_option("--max-iters", solve_max_iters, "Iteration budget override");
  solve->add_option("--trace", trace_path, "Trace CSV output path");
  solve->add_option("--report", report_path, "Report JSON output path");

  // compare
  auto* compare = app.add_subcommand("compare", "Nonadaptive vs hybrid over an n grid");
  std::string compare_grid;
  afom::RunConfig compare_config;
  std::string compare_out;
  compare->add_option("--grid", compare_grid, "Comma-separated n values")->required();
  compare->add_option("--repeats", compare_config.repeats, "Runs per cell");
  compare->add_option("--m", compare_config.m, "Number of matrices");
  compare->add_option("--density", compare_config.density, "Full-matrix nonzero fraction");
  compare->add_option("--eps", compare_config.eps, "Relative accuracy");
  compare->add_option("--alpha", compare_config.alpha, "Hybrid switch-back threshold");
  compare->add_option("--kappa", compare_config.kappa, "Adaptive lower clamp factor");
  compare->add_option("--seed", compare_config.seed, "Base RNG seed");
  compare->add_option("--gap-check-every", compare_config.gap_check_period,
                      "Gap check period");
  compare->add_option("--out", compare_out, "Comparison CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      const afom::EigInstance instance =
          afom::generate_instance(gen_m, gen_n, gen_density, gen_seed);
      afom::write_instance_file(instance, gen_out);
      std::cout << "wrote " << gen_out << " (m=" << instance.m << ", n=" << instance.n
                << ", nnz_full=" << instance.nnz_full << ", L'=" << instance.l_prime << ")\n";
      return 0;
    }

    if (solve->parsed()) {
      config.max_iters = solve_max_iters;
      afom::EigInstance instance =
          solve_instance_path.empty()
              ? afom::generate_instance(solve_m, solve_n, solve_density, solve_seed)
              : afom::read_instance_file(solve_instance_path);
      config.m = instance.m;
      config.n = instance.n;

      const afom::RepeatResult result = afom::solve_instance(instance, config);
      if (!result.ok) {
        std::cerr << "solver error: " << result.error << "\n";
        return 1;
      }

      afom::RunReport report;
      report.config = config;
      report.repeats.push_back(result);
      report.avg_iterations_practice = result.iterations_practice;
      report.avg_iterations_theory = static_cast<double>(result.iterations_theory);
      report.avg_wall_ms = result.wall_ms;
      if (!trace_path.empty()) afom::emit_trace(result.trace, trace_path, &report);
      if (!report_path.empty()) afom::write_report_json(report, report_path);

      std::cout << (result.converged ? "converged" : "budget exhausted") << " after "
                << result.iterations_practice << " iterations (budget "
                << result.iterations_theory << "), gap " << result.final_gap << " vs target "
                << result.eps_abs << "\n";
      return result.converged ? 0 : 2;
    }

    if (compare->parsed()) {
      const std::vector<int> grid = parse_grid(compare_grid);
      const afom::CompareResult result =
          afom::compare_methods(compare_config, grid, compare_out);
      std::cout << result.csv;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
