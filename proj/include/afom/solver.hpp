#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "afom/prox.hpp"
#include "afom/schedule.hpp"

namespace afom {

/// Smooth first-order oracle. Implementations must be deterministic:
/// identical inputs produce identical outputs. value_grad is called exactly
/// once per new extrapolation point, which lets adapters hook per-point
/// bookkeeping (e.g. dual aggregation) into it.
class FirstOrderOracle {
 public:
  virtual ~FirstOrderOracle() = default;
  virtual double value(const Eigen::VectorXd& x) = 0;
  virtual double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) = 0;
};

enum class LipschitzRule { kNonAdaptive, kAggressive, kHybrid };

/// How the per-iteration constant L_t is chosen:
///  - NonAdaptive: L_t = L at every step.
///  - Aggressive: L_t = min(max(Lbar_t, kappa*L), L) where Lbar_t is the
///    smallest constant validating the descent condition at the previous
///    step's points, so L_t is available at the start of the iteration.
///  - Hybrid: aggressive updates while -chi_t <= alpha*L*D, then a permanent
///    fall-back to L with the current z recomputed.
struct LipschitzStrategy {
  LipschitzRule rule = LipschitzRule::kNonAdaptive;
  double alpha = 0.0;  // hybrid switch-back threshold
  double kappa = 0.0;  // lower clamp factor, in (0,1)

  static LipschitzStrategy nonadaptive() { return {}; }
  static LipschitzStrategy aggressive(double kappa) {
    return {LipschitzRule::kAggressive, 0.0, kappa};
  }
  static LipschitzStrategy hybrid(double alpha, double kappa) {
    return {LipschitzRule::kHybrid, alpha, kappa};
  }
  bool adaptive() const { return rule != LipschitzRule::kNonAdaptive; }
};

LipschitzStrategy parse_strategy(const std::string& name, double alpha, double kappa);

/// One addend of the chi accumulator, kept so the sum can be re-derived.
struct ChiTerm {
  double l_prev = 0.0;
  double l_next = 0.0;
  double dgf_z_next = 0.0;
  double half_dist_sq = 0.0;  // 0.5 ||z_k - xhat_{k+1}||^2
};

/// Full iterate bundle. After init the state sits at index t = 0; each step
/// advances it by one. At index t the fields z, u, f_u, L, chi, s, offset
/// all refer to iteration t (so the inequality certificate can be evaluated
/// directly), while x_next/u_next/xhat_next hold the already-computed
/// iterates of index t+1 together with their cached oracle outputs.
struct SolverState {
  int t = 0;
  double L_global = 0.0;

  Eigen::VectorXd z;   // minorant argmin at index t
  Eigen::VectorXd u;   // incumbent at index t
  double f_u = 0.0;    // f(u_t)
  double L = 0.0;      // L_t
  double chi = 0.0;    // chi_t = sum_{k<t} (L_{k+1}-L_k)(d(z_{k+1}) - 0.5||z_k-xhat_{k+1}||^2)

  // Accumulated affine minorant sum_{k<=t} gamma_k (f(x_k) + <grad_k, . - x_k>)
  // stored as a gradient sum s and a scalar offset.
  Eigen::VectorXd s;
  double offset = 0.0;

  // Lookahead iterates of index t+1 and their cached oracle outputs.
  Eigen::VectorXd x_next, u_next, xhat_next;
  double f_x_next = 0.0;
  double f_u_next = 0.0;
  Eigen::VectorXd grad_x_next;
  double half_dist_next = 0.0;  // 0.5 ||z_t - xhat_{t+1}||^2

  bool switched_back = false;
  int switch_back_t = -1;

  std::vector<ChiTerm> chi_terms;
};

/// Per-iteration trace row. beta is -chi_t / (D * L_0); gap is filled only
/// at checkpoints; wall_ms is cumulative and excluded from determinism
/// guarantees.
struct IterationRecord {
  int t = 0;
  double l_t = 0.0;
  double f_u = 0.0;
  double beta = 0.0;
  std::optional<double> gap;
  double wall_ms = 0.0;
};

/// Snapshot of the per-iteration inequality: residual = psi - lhs with
/// lhs = Gamma_t f(u_t) + chi_t and psi the minorant minimum. The method is
/// running correctly iff residual >= -tol for a rounding-level tol.
struct Certificate {
  int t = 0;
  double psi = 0.0;
  double lhs = 0.0;
  double residual = 0.0;
};

struct GapCheckResult {
  double gap = 0.0;
  bool converged = false;
};

struct RunOptions {
  int max_iters = 0;
  // Gap checkpoints: every gap_check_period-th iteration (0 = never), plus
  // every iteration t <= 100 when check_first_hundred is set.
  int gap_check_period = 0;
  bool check_first_hundred = false;
  std::function<GapCheckResult(const SolverState&)> gap_check;
  bool collect_certificates = false;
};

struct RunResult {
  Eigen::VectorXd solution;
  bool converged = false;
  int iterations = 0;
  double final_gap = 0.0;  // last checkpoint value; 0 if never checked
  std::vector<IterationRecord> trace;
  std::vector<Certificate> certificates;
  SolverState state;
};

/// The most aggressive admissible constant from already-known points:
///   Lbar = 2 [f(u) - f(x) - <grad_x, u - x>] / ||u - x||^2
/// clamped into [kappa*L_global, L_global]. A zero distance returns the
/// lower clamp (the descent condition is vacuous there).
double aggressive_lipschitz(double f_u, double f_x, const Eigen::VectorXd& grad_x,
                            const Eigen::VectorXd& u, const Eigen::VectorXd& x,
                            double kappa, double L_global, const ProxSetup& setup);

/// Lines 3-7: x_0 at the center, u_0 = z_0 via one prox from the center,
/// then the lookahead x_1, xhat_1, u_1.
SolverState init_solver(FirstOrderOracle& oracle, const ProxSetup& setup,
                        const LipschitzStrategy& strategy, double L_global,
                        const GammaSchedule& schedule);

/// One loop iteration: extend the minorant, choose L_{t+1}, recompute z,
/// update chi (with the hybrid switch-back check), then form the new
/// lookahead iterates.
void step(SolverState& state, FirstOrderOracle& oracle, const ProxSetup& setup,
          const LipschitzStrategy& strategy, const GammaSchedule& schedule);

/// True when the hybrid monitor demands the permanent fall-back:
/// -chi > alpha * L_0 * D.
bool hybrid_monitor_fires(double chi, double alpha, double L_global, double diameter_bound);

/// Evaluates the certificate at the state's current index.
Certificate verify_inequality(const SolverState& state, const ProxSetup& setup,
                              const GammaSchedule& schedule);

/// Recomputes chi from the stored per-step records (consistency oracle for
/// the running accumulator).
double recompute_chi(const SolverState& state);

enum class BoundVariant { kNonAdaptive, kAggressive, kHybrid };

BoundVariant parse_bound_variant(const std::string& name);

/// Worst-case objective-gap bound after T iterations:
///   nonadaptive: 4 L D / ((T+1)(T+2))
///   aggressive : 20 L D / (T+2)
///   hybrid     : 4 (1+alpha) L D / ((T+1)(T+2))
double theoretical_bound(int T, BoundVariant variant, double L, double D, double alpha = 0.0);

/// Iterations guaranteeing an eps-solution under the aggressive rule:
/// ceil(20 L D / eps - 2).
long aggressive_iteration_bound(double L, double D, double eps);

/// Runs init + up to options.max_iters steps, recording a trace row per
/// index (including index 0). Stops early when a checkpoint converges; a
/// final off-cadence checkpoint is evaluated at exhaustion so the reported
/// gap always refers to the returned point. The returned solution is u_t of
/// the converged checkpoint, or the lookahead u_{t+1} otherwise.
RunResult run(FirstOrderOracle& oracle, const ProxSetup& setup,
              const LipschitzStrategy& strategy, double L_global,
              const GammaSchedule& schedule, const RunOptions& options);

}  // namespace afom
