#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "afom/bench.hpp"
#include "afom/eigopt.hpp"
#include "afom/prox.hpp"
#include "afom/smoothing.hpp"
#include "afom/solver.hpp"

namespace py = pybind11;

namespace {

// Flat, script-friendly view of one solve.
struct PySolveResult {
  bool converged = false;
  int iterations = 0;
  long iterations_theory = 0;
  double final_gap = 0.0;
  double eps_abs = 0.0;
  double l_prime = 0.0;
  double wall_ms = 0.0;
  int switch_back_iteration = -1;
  std::vector<int> trace_t;
  std::vector<double> trace_l, trace_f_u, trace_beta, trace_gap;
};

PySolveResult solve_eig(const afom::EigInstance& instance, double eps,
                        const std::string& strategy, double alpha, double kappa,
                        int gap_check_every, int max_iters) {
  afom::RunConfig config;
  config.m = instance.m;
  config.n = instance.n;
  config.eps = eps;
  config.strategy = strategy;
  config.alpha = alpha;
  config.kappa = kappa;
  config.gap_check_period = gap_check_every;
  config.max_iters = max_iters;

  const afom::RepeatResult result = afom::solve_instance(instance, config);
  if (!result.ok) throw std::runtime_error(result.error);

  PySolveResult out;
  out.converged = result.converged;
  out.iterations = result.iterations_practice;
  out.iterations_theory = result.iterations_theory;
  out.final_gap = result.final_gap;
  out.eps_abs = result.eps_abs;
  out.l_prime = result.l_prime;
  out.wall_ms = result.wall_ms;
  out.switch_back_iteration = result.switch_back_iteration;
  for (const afom::IterationRecord& rec : result.trace) {
    out.trace_t.push_back(rec.t);
    out.trace_l.push_back(rec.l_t);
    out.trace_f_u.push_back(rec.f_u);
    out.trace_beta.push_back(rec.beta);
    out.trace_gap.push_back(rec.gap ? *rec.gap : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Accelerated first-order methods with adaptive Lipschitz estimation, "
            "Nesterov-style smoothing, and maximum-eigenvalue minimization";

  // prox layer
  m.def("entropy_value", &afom::entropy_value, py::arg("x"),
        "Entropy distance-generating function ln(m) + sum x_i ln x_i on the simplex");
  m.def("bregman_distance", &afom::relative_entropy, py::arg("z"), py::arg("x"),
        "Relative entropy sum x_i ln(x_i / z_i); anchor z must be strictly positive");
  m.def("prox_map", &afom::entropy_prox, py::arg("z"), py::arg("s"),
        "Entropy prox-mapping argmin <s, x - z> + V_z(x) over the simplex");
  m.def("dgf_center", &afom::uniform_point, py::arg("m"),
        "Minimizer of the entropy DGF: the uniform point");

  // solver-level formulas
  m.def(
      "theoretical_bound",
      [](int T, const std::string& variant, double L, double D, double alpha) {
        return afom::theoretical_bound(T, afom::parse_bound_variant(variant), L, D, alpha);
      },
      py::arg("T"), py::arg("variant"), py::arg("L"), py::arg("D"), py::arg("alpha") = 0.0,
      "Worst-case objective gap after T iterations for "
      "'nonadaptive' | 'aggressive' | 'hybrid'");
  m.def("worst_case_iterations", &afom::worst_case_iterations, py::arg("eps_rel"),
        py::arg("m"), py::arg("n"), py::arg("alpha"),
        "Iteration budget ceil(4 sqrt((1+alpha) ln m ln n) / eps - 1)");

  // smoothing formulas
  m.def("mu_aggressive", &afom::mu_aggressive, py::arg("T"), py::arg("D1"), py::arg("D2"),
        py::arg("norm_A"));
  m.def("mu_hybrid", &afom::mu_hybrid, py::arg("T"), py::arg("alpha"), py::arg("D1"),
        py::arg("D2"), py::arg("norm_A"));
  m.def(
      "lipschitz_of_smoothed",
      [](double mu, double operator_norm, double lipschitz_f1) {
        afom::MinMaxProblem problem;
        problem.operator_norm = operator_norm;
        problem.lipschitz_f1 = lipschitz_f1;
        return afom::lipschitz_of_smoothed(problem, mu);
      },
      py::arg("mu"), py::arg("operator_norm"), py::arg("lipschitz_f1") = 0.0,
      "M + ||A||^2 / mu");

  // spectral operations
  m.def("smoothed_lambda_max", &afom::smoothed_lambda_max, py::arg("a"), py::arg("mu"),
        "mu ln sum exp(lambda_i/mu) - mu ln n for a symmetric matrix");
  m.def("density_maximizer", &afom::density_maximizer, py::arg("a"), py::arg("mu"),
        "Unit-trace PSD maximizer exp(A/mu) / tr exp(A/mu)");
  m.def("exact_lambda_max", &afom::exact_lambda_max, py::arg("a"));
  m.def(
      "power_method_norm",
      [](const Eigen::MatrixXd& a, double tol, int max_iters, std::uint64_t seed) {
        return afom::power_method_norm(a, tol, max_iters, seed);
      },
      py::arg("a"), py::arg("tol") = 1e-4, py::arg("max_iters") = 1000, py::arg("seed") = 0,
      "Largest-magnitude eigenvalue estimate by seeded subspace power iteration");

  // instances
  py::class_<afom::EigInstance>(m, "EigInstance")
      .def_readonly("m", &afom::EigInstance::m)
      .def_readonly("n", &afom::EigInstance::n)
      .def_readonly("density", &afom::EigInstance::density)
      .def_readonly("seed", &afom::EigInstance::seed)
      .def_readonly("nnz_full", &afom::EigInstance::nnz_full)
      .def_readonly("l_prime", &afom::EigInstance::l_prime)
      .def_property_readonly(
          "nnz_stored",
          [](const afom::EigInstance& inst) { return inst.pattern.size(); })
      .def("assemble", &afom::EigInstance::assemble, py::arg("x"),
           "Dense symmetric combination sum_j x_j A_j")
      .def(
          "gradient",
          [](const afom::EigInstance& inst, const Eigen::VectorXd& x, double mu) {
            return afom::eig_gradient(x, inst, mu);
          },
          py::arg("x"), py::arg("mu"),
          "Gradient of the smoothed maximum eigenvalue of the combination")
      .def(
          "duality_gap",
          [](const afom::EigInstance& inst, const Eigen::VectorXd& x,
             const Eigen::MatrixXd& y) { return afom::duality_gap_eig(x, y, inst); },
          py::arg("x"), py::arg("y"))
      .def("save", &afom::write_instance_file, py::arg("path"))
      .def("__repr__", [](const afom::EigInstance& inst) {
        return "EigInstance(m=" + std::to_string(inst.m) + ", n=" + std::to_string(inst.n) +
               ", nnz_full=" + std::to_string(inst.nnz_full) + ")";
      });

  m.def("generate_instance", &afom::generate_instance, py::arg("m"), py::arg("n"),
        py::arg("density"), py::arg("seed"),
        "Random jointly sparse symmetric matrix family with a power-method norm scale");
  m.def("load_instance", &afom::read_instance_file, py::arg("path"));
  m.def("mu_for_accuracy", &afom::mu_for_accuracy, py::arg("eps_abs"), py::arg("n"));

  py::class_<PySolveResult>(m, "SolveResult")
      .def_readonly("converged", &PySolveResult::converged)
      .def_readonly("iterations", &PySolveResult::iterations)
      .def_readonly("iterations_theory", &PySolveResult::iterations_theory)
      .def_readonly("final_gap", &PySolveResult::final_gap)
      .def_readonly("eps_abs", &PySolveResult::eps_abs)
      .def_readonly("l_prime", &PySolveResult::l_prime)
      .def_readonly("wall_ms", &PySolveResult::wall_ms)
      .def_readonly("switch_back_iteration", &PySolveResult::switch_back_iteration)
      .def_readonly("trace_t", &PySolveResult::trace_t)
      .def_readonly("trace_l", &PySolveResult::trace_l)
      .def_readonly("trace_f_u", &PySolveResult::trace_f_u)
      .def_readonly("trace_beta", &PySolveResult::trace_beta)
      .def_readonly("trace_gap", &PySolveResult::trace_gap)
      .def("__repr__", [](const PySolveResult& r) {
        return std::string("SolveResult(converged=") + (r.converged ? "True" : "False") +
               ", iterations=" + std::to_string(r.iterations) +
               ", final_gap=" + std::to_string(r.final_gap) + ")";
      });

  m.def("solve", &solve_eig, py::arg("instance"), py::arg("eps") = 0.002,
        py::arg("strategy") = "hybrid", py::arg("alpha") = 3.0, py::arg("kappa") = 1e-12,
        py::arg("gap_check_every") = 100, py::arg("max_iters") = -1,
        "Run the smoothed accelerated method on an instance until the duality gap "
        "reaches eps * L' or the worst-case budget is exhausted");
}
