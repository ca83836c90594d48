#include "afom/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace afom {

namespace {

void require_positive_mu(double mu, const char* where) {
  if (!(mu > 0.0)) throw std::invalid_argument(std::string(where) + ": mu must be positive");
}

}  // namespace

SmoothEvaluation smoothed_eval(const MinMaxProblem& problem, double mu,
                               const Eigen::VectorXd& x) {
  require_positive_mu(mu, "smoothed_eval");
  const Eigen::VectorXd w = problem.apply_op(x);
  InnerMaxResult inner = problem.inner_max(w, mu);

  SmoothEvaluation eval;
  eval.value = inner.value;
  eval.gradient = problem.apply_adjoint(inner.y_star);
  if (problem.f1_value) eval.value += problem.f1_value(x);
  if (problem.f1_grad) eval.gradient += problem.f1_grad(x);
  eval.y_star = std::move(inner.y_star);
  return eval;
}

double exact_primal_value(const MinMaxProblem& problem, const Eigen::VectorXd& x) {
  double v = problem.sup_dual(problem.apply_op(x));
  if (problem.f1_value) v += problem.f1_value(x);
  return v;
}

double exact_dual_value(const MinMaxProblem& problem, const Eigen::VectorXd& y) {
  double v = problem.min_primal(problem.apply_adjoint(y));
  if (problem.f2_value) v -= problem.f2_value(y);
  return v;
}

double lipschitz_of_smoothed(const MinMaxProblem& problem, double mu) {
  require_positive_mu(mu, "lipschitz_of_smoothed");
  return problem.lipschitz_f1 + problem.operator_norm * problem.operator_norm / mu;
}

double mu_aggressive(int T, double D1, double D2, double norm_A) {
  if (T < 0) throw std::invalid_argument("mu_aggressive: T must be >= 0");
  if (!(D1 > 0.0) || !(D2 > 0.0))
    throw std::invalid_argument("mu_aggressive: diameters must be positive");
  return 2.0 * norm_A * std::sqrt(5.0 * D1 / ((T + 1.0) * D2));
}

double mu_hybrid(int T, double alpha, double D1, double D2, double norm_A) {
  if (T < 0) throw std::invalid_argument("mu_hybrid: T must be >= 0");
  if (alpha < 0.0) throw std::invalid_argument("mu_hybrid: alpha must be >= 0");
  if (!(D1 > 0.0) || !(D2 > 0.0))
    throw std::invalid_argument("mu_hybrid: diameters must be positive");
  return 2.0 * norm_A / (T + 1.0) * std::sqrt((1.0 + alpha) * D1 / D2);
}

void DualAggregate::add(const Eigen::VectorXd& y, int t) {
  const double weight = t + 1.0;
  if (count_ == 0)
    weighted_sum_ = weight * y;
  else
    weighted_sum_ += weight * y;
  weight_sum_ += weight;
  ++count_;
}

Eigen::VectorXd DualAggregate::average() const {
  if (count_ == 0) throw std::invalid_argument("DualAggregate: empty");
  return weighted_sum_ / weight_sum_;
}

DualAggregate aggregate_dual(const std::vector<Eigen::VectorXd>& ys) {
  if (ys.empty()) throw std::invalid_argument("aggregate_dual: empty list");
  DualAggregate agg;
  for (std::size_t t = 0; t < ys.size(); ++t) agg.add(ys[t], static_cast<int>(t));
  return agg;
}

double primal_dual_gap(const MinMaxProblem& problem, const Eigen::VectorXd& x_bar,
                       const Eigen::VectorXd& y_bar) {
  return exact_primal_value(problem, x_bar) - exact_dual_value(problem, y_bar);
}

SmoothedOracle::SmoothedOracle(const MinMaxProblem& problem, double mu, bool check_sandwich)
    : problem_(problem), mu_(mu), check_sandwich_(check_sandwich) {
  require_positive_mu(mu, "SmoothedOracle");
}

double SmoothedOracle::value(const Eigen::VectorXd& x) {
  const Eigen::VectorXd w = problem_.apply_op(x);
  double v = problem_.inner_max_value ? problem_.inner_max_value(w, mu_)
                                      : problem_.inner_max(w, mu_).value;
  if (problem_.f1_value) v += problem_.f1_value(x);
  if (check_sandwich_) {
    const double exact = exact_primal_value(problem_, x);
    const double slack = 1e-9 * (1.0 + std::abs(exact));
    if (v > exact + slack || exact > v + mu_ * problem_.dual_diameter + slack)
      throw std::runtime_error("SmoothedOracle: sandwich inequality violated");
  }
  return v;
}

double SmoothedOracle::value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
  SmoothEvaluation eval = smoothed_eval(problem_, mu_, x);
  if (check_sandwich_) {
    const double exact = exact_primal_value(problem_, x);
    const double slack = 1e-9 * (1.0 + std::abs(exact));
    if (eval.value > exact + slack ||
        exact > eval.value + mu_ * problem_.dual_diameter + slack)
      throw std::runtime_error("SmoothedOracle: sandwich inequality violated");
  }
  const double weight = calls_ + 1.0;
  if (calls_ == 0)
    weighted_sum_ = weight * eval.y_star;
  else
    weighted_sum_ += weight * eval.y_star;
  last_y_ = std::move(eval.y_star);
  ++calls_;
  grad = std::move(eval.gradient);
  return eval.value;
}

Eigen::VectorXd SmoothedOracle::dual_average_upto(int t) const {
  const int want = t + 1;  // number of aggregated terms
  if (want < 1 || calls_ < want || calls_ > want + 1)
    throw std::logic_error("dual_average_upto: index out of sync with gradient calls");
  const double norm = 0.5 * (t + 1.0) * (t + 2.0);
  if (calls_ == want) return weighted_sum_ / norm;
  // Drop the newest lookahead term (index t+1, weight t+2).
  return (weighted_sum_ - (t + 2.0) * last_y_) / norm;
}

SmoothingSolveResult smoothing_solve(const MinMaxProblem& problem,
                                     const ProxSetup& primal_setup,
                                     const GammaSchedule& schedule,
                                     const SmoothingSolveOptions& options) {
  const double l_mu = lipschitz_of_smoothed(problem, options.mu);
  SmoothedOracle oracle(problem, options.mu, options.check_sandwich);

  RunOptions run_options;
  run_options.max_iters = options.max_iters;
  run_options.gap_check_period = options.gap_check_period;
  run_options.check_first_hundred = options.check_first_hundred;
  run_options.collect_certificates = options.collect_certificates;
  run_options.gap_check = [&](const SolverState& state) {
    GapCheckResult check;
    const Eigen::VectorXd y_bar = oracle.dual_average_upto(state.t);
    check.gap = primal_dual_gap(problem, state.u, y_bar);
    check.converged = options.gap_target >= 0.0 && check.gap <= options.gap_target;
    if (options.on_checkpoint) options.on_checkpoint(state, check.gap, y_bar);
    return check;
  };

  RunResult run_result =
      run(oracle, primal_setup, options.strategy, l_mu, schedule, run_options);

  SmoothingSolveResult result;
  // Always report the certified pair (u_t, y_bar_t); the recorded gap refers
  // to exactly this pair.
  result.x_bar = run_result.state.u;
  result.y_bar = oracle.dual_average_upto(run_result.state.t);
  result.gap = run_result.final_gap;
  result.converged = run_result.converged;
  result.iterations = run_result.iterations;
  result.l_mu = l_mu;
  result.switch_back_iteration = run_result.state.switch_back_t;
  result.trace = std::move(run_result.trace);
  result.certificates = std::move(run_result.certificates);
  return result;
}

}  // namespace afom
