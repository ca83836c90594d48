#include "afom/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace afom {

namespace {

void check_feasible(const Eigen::VectorXd& x, const ProxSetup& setup, const char* what) {
  if (!setup.contains(x, 1e-7))
    throw std::runtime_error(std::string("solver produced infeasible point: ") + what);
}

double choose_lipschitz(const SolverState& state, const LipschitzStrategy& strategy,
                        const ProxSetup& setup) {
  if (strategy.rule == LipschitzRule::kNonAdaptive ||
      (strategy.rule == LipschitzRule::kHybrid && state.switched_back)) {
    return state.L_global;
  }
  return aggressive_lipschitz(state.f_u_next, state.f_x_next, state.grad_x_next,
                              state.u_next, state.x_next, strategy.kappa, state.L_global,
                              setup);
}

}  // namespace

LipschitzStrategy parse_strategy(const std::string& name, double alpha, double kappa) {
  if (name == "nonadaptive") return LipschitzStrategy::nonadaptive();
  if (name == "aggressive") return LipschitzStrategy::aggressive(kappa);
  if (name == "hybrid") return LipschitzStrategy::hybrid(alpha, kappa);
  throw std::invalid_argument("unknown strategy: " + name);
}

double aggressive_lipschitz(double f_u, double f_x, const Eigen::VectorXd& grad_x,
                            const Eigen::VectorXd& u, const Eigen::VectorXd& x,
                            double kappa, double L_global, const ProxSetup& setup) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("aggressive_lipschitz: kappa must be in (0,1)");
  if (!(L_global > 0.0))
    throw std::invalid_argument("aggressive_lipschitz: L_global must be positive");
  const double dist = setup.norm(u - x);
  if (dist == 0.0) return kappa * L_global;
  const double curvature = 2.0 * (f_u - f_x - grad_x.dot(u - x)) / (dist * dist);
  return std::min(std::max(curvature, kappa * L_global), L_global);
}

SolverState init_solver(FirstOrderOracle& oracle, const ProxSetup& setup,
                        const LipschitzStrategy& strategy, double L_global,
                        const GammaSchedule& schedule) {
  (void)strategy;  // L_0 = L for every strategy; adaptation starts at t = 1
  if (!(L_global > 0.0)) throw std::invalid_argument("init_solver: L_global must be positive");

  SolverState st;
  st.L_global = L_global;
  st.L = L_global;

  const Eigen::VectorXd x0 = setup.center();
  Eigen::VectorXd g0;
  const double f0 = oracle.value_grad(x0, g0);

  const double gamma0 = schedule.gamma(0);
  st.u = setup.prox_from_center(gamma0 / L_global * g0);
  check_feasible(st.u, setup, "u_0");
  st.z = st.u;

  st.s = gamma0 * g0;
  st.offset = gamma0 * (f0 - g0.dot(x0));

  // x_1 = z_0 = u_0, so f(u_0) comes for free with the gradient call at x_1.
  st.x_next = st.z;
  st.f_x_next = oracle.value_grad(st.x_next, st.grad_x_next);
  st.f_u = st.f_x_next;

  const double tau0 = schedule.tau(0);
  st.xhat_next = setup.prox_composed(st.s / L_global,
                                     schedule.gamma(1) / L_global * st.grad_x_next);
  check_feasible(st.xhat_next, setup, "xhat_1");
  st.u_next = tau0 * st.xhat_next + (1.0 - tau0) * st.u;
  st.f_u_next = oracle.value(st.u_next);

  const Eigen::VectorXd d = st.z - st.xhat_next;
  const double dist = setup.norm(d);
  st.half_dist_next = 0.5 * dist * dist;
  return st;
}

void step(SolverState& state, FirstOrderOracle& oracle, const ProxSetup& setup,
          const LipschitzStrategy& strategy, const GammaSchedule& schedule) {
  const int t = state.t + 1;

  // Extend the minorant with the gamma_t term anchored at x_t.
  const double gamma_t = schedule.gamma(t);
  state.s += gamma_t * state.grad_x_next;
  state.offset += gamma_t * (state.f_x_next - state.grad_x_next.dot(state.x_next));

  double L_t = choose_lipschitz(state, strategy, setup);
  Eigen::VectorXd z = setup.prox_from_center(state.s / L_t);
  ChiTerm term{state.L, L_t, setup.dgf(z), state.half_dist_next};
  double chi = state.chi + (term.l_next - term.l_prev) * (term.dgf_z_next - term.half_dist_sq);

  if (strategy.rule == LipschitzRule::kHybrid && !state.switched_back &&
      hybrid_monitor_fires(chi, strategy.alpha, state.L_global, setup.diameter_bound())) {
    state.switched_back = true;
    state.switch_back_t = t;
    L_t = state.L_global;
    z = setup.prox_from_center(state.s / L_t);
    term = ChiTerm{state.L, L_t, setup.dgf(z), state.half_dist_next};
    chi = state.chi + (term.l_next - term.l_prev) * (term.dgf_z_next - term.half_dist_sq);
  }
  check_feasible(z, setup, "z_t");
  state.chi_terms.push_back(term);
  state.chi = chi;
  state.L = L_t;
  state.z = std::move(z);

  const double tau_t = schedule.tau(t);
  Eigen::VectorXd x_new = tau_t * state.z + (1.0 - tau_t) * state.u_next;
  Eigen::VectorXd g_new;
  const double f_new = oracle.value_grad(x_new, g_new);

  // z_t is itself prox_from_center(s/L_t); composing keeps the anchor's
  // exponent-scale information when its coordinates underflow.
  Eigen::VectorXd xhat_new =
      setup.prox_composed(state.s / L_t, schedule.gamma(t + 1) / L_t * g_new);
  check_feasible(xhat_new, setup, "xhat_{t+1}");
  Eigen::VectorXd u_new = tau_t * xhat_new + (1.0 - tau_t) * state.u_next;

  state.u = std::move(state.u_next);
  state.f_u = state.f_u_next;

  const Eigen::VectorXd d = state.z - xhat_new;
  const double dist = setup.norm(d);
  state.half_dist_next = 0.5 * dist * dist;

  state.x_next = std::move(x_new);
  state.grad_x_next = std::move(g_new);
  state.f_x_next = f_new;
  state.xhat_next = std::move(xhat_new);
  state.f_u_next = oracle.value(u_new);
  state.u_next = std::move(u_new);
  state.t = t;
}

bool hybrid_monitor_fires(double chi, double alpha, double L_global, double diameter_bound) {
  return -chi > alpha * L_global * diameter_bound;
}

Certificate verify_inequality(const SolverState& state, const ProxSetup& setup,
                              const GammaSchedule& schedule) {
  Certificate c;
  c.t = state.t;
  c.psi = state.offset + state.s.dot(state.z) + state.L * setup.dgf(state.z);
  c.lhs = schedule.partial_sum(state.t) * state.f_u + state.chi;
  c.residual = c.psi - c.lhs;
  return c;
}

double recompute_chi(const SolverState& state) {
  double chi = 0.0;
  for (const ChiTerm& term : state.chi_terms)
    chi += (term.l_next - term.l_prev) * (term.dgf_z_next - term.half_dist_sq);
  return chi;
}

BoundVariant parse_bound_variant(const std::string& name) {
  if (name == "nonadaptive") return BoundVariant::kNonAdaptive;
  if (name == "aggressive") return BoundVariant::kAggressive;
  if (name == "hybrid") return BoundVariant::kHybrid;
  throw std::invalid_argument("unknown bound variant: " + name);
}

double theoretical_bound(int T, BoundVariant variant, double L, double D, double alpha) {
  if (T < 0) throw std::invalid_argument("theoretical_bound: T must be >= 0");
  if (!(L > 0.0) || D < 0.0) throw std::invalid_argument("theoretical_bound: bad L or D");
  const double Tp1 = T + 1.0, Tp2 = T + 2.0;
  switch (variant) {
    case BoundVariant::kNonAdaptive:
      return 4.0 * L * D / (Tp1 * Tp2);
    case BoundVariant::kAggressive:
      return 20.0 * L * D / Tp2;
    case BoundVariant::kHybrid:
      if (alpha < 0.0) throw std::invalid_argument("theoretical_bound: alpha must be >= 0");
      return 4.0 * (1.0 + alpha) * L * D / (Tp1 * Tp2);
  }
  throw std::invalid_argument("theoretical_bound: unknown variant");
}

long aggressive_iteration_bound(double L, double D, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("aggressive_iteration_bound: eps must be > 0");
  const double raw = 20.0 * L * D / eps - 2.0;
  return std::max(0L, static_cast<long>(std::ceil(raw)));
}

RunResult run(FirstOrderOracle& oracle, const ProxSetup& setup,
              const LipschitzStrategy& strategy, double L_global,
              const GammaSchedule& schedule, const RunOptions& options) {
  if (options.max_iters < 0) throw std::invalid_argument("run: max_iters must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_ms = [&start] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };
  const auto at_checkpoint = [&options](int t) {
    if (!options.gap_check) return false;
    if (options.check_first_hundred && t <= 100) return true;
    return options.gap_check_period > 0 && t > 0 && t % options.gap_check_period == 0;
  };

  RunResult result;
  SolverState state = init_solver(oracle, setup, strategy, L_global, schedule);
  const double beta_scale = setup.diameter_bound() * L_global;

  bool converged = false;
  double last_gap = 0.0;
  while (true) {
    const int t = state.t;
    IterationRecord record;
    record.t = t;
    record.l_t = state.L;
    record.f_u = state.f_u;
    record.beta = beta_scale > 0.0 ? -state.chi / beta_scale + 0.0 : 0.0;
    if (options.collect_certificates)
      result.certificates.push_back(verify_inequality(state, setup, schedule));

    const bool exhausted = t >= options.max_iters;
    // Evaluate the gap at cadence points, and once more at exhaustion so the
    // reported gap matches the returned point.
    if (at_checkpoint(t) || (exhausted && options.gap_check)) {
      const GapCheckResult check = options.gap_check(state);
      record.gap = check.gap;
      last_gap = check.gap;
      converged = check.converged;
    }
    record.wall_ms = elapsed_ms();
    result.trace.push_back(std::move(record));

    if (converged || exhausted) break;
    step(state, oracle, setup, strategy, schedule);
  }

  result.converged = converged;
  result.iterations = state.t;
  result.final_gap = last_gap;
  result.solution = converged ? state.u : state.u_next;
  result.state = std::move(state);
  return result;
}

}  // namespace afom
