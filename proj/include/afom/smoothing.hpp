#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "afom/solver.hpp"

namespace afom {

struct InnerMaxResult {
  double value = 0.0;       // max_y { <w, y> - f2(y) - mu * d2(y) }
  Eigen::VectorXd y_star;   // the unique maximizer
};

/// Bilinear saddle structure min_x max_y { f1(x) + <A(x), y> - f2(y) } over
/// compact primal/dual sets. Dual points are carried as flat vectors (matrix
/// duals are vectorized). The application supplies the closed-form inner
/// maximizer of the regularized dual problem and the two exact oracles used
/// by the duality gap; f1 and f2 default to the zero function.
struct MinMaxProblem {
  int primal_dim = 0;
  int dual_dim = 0;

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_op;       // A(x)
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_adjoint;  // A*(y)

  // max_y { <w, y> - f2(y) - mu d2(y) } with its maximizer, and a cheaper
  // value-only variant (falls back to inner_max when unset).
  std::function<InnerMaxResult(const Eigen::VectorXd& w, double mu)> inner_max;
  std::function<double(const Eigen::VectorXd& w, double mu)> inner_max_value;

  // Exact oracles: sup_y { <w, y> - f2(y) } and min_x { f1(x) + <g, x> }.
  std::function<double(const Eigen::VectorXd& w)> sup_dual;
  std::function<double(const Eigen::VectorXd& g)> min_primal;

  std::function<double(const Eigen::VectorXd&)> f1_value;           // 0 when unset
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f1_grad;   // 0 when unset
  std::function<double(const Eigen::VectorXd&)> f2_value;           // 0 when unset

  double operator_norm = 0.0;   // ||A||
  double lipschitz_f1 = 0.0;    // M
  double dual_diameter = 0.0;   // D2 = max d2
};

struct SmoothEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::VectorXd y_star;
};

/// Smoothed objective value/gradient/inner-maximizer at x:
/// value = f1(x) + inner_max(A(x), mu), gradient = grad f1(x) + A*(y_star).
SmoothEvaluation smoothed_eval(const MinMaxProblem& problem, double mu,
                               const Eigen::VectorXd& x);

/// Exact (unsmoothed) primal objective f1(x) + sup_dual(A(x)).
double exact_primal_value(const MinMaxProblem& problem, const Eigen::VectorXd& x);

/// Exact dual objective min_primal(A*(y)) - f2(y).
double exact_dual_value(const MinMaxProblem& problem, const Eigen::VectorXd& y);

/// Gradient Lipschitz constant of the smoothed objective: M + ||A||^2 / mu.
double lipschitz_of_smoothed(const MinMaxProblem& problem, double mu);

/// mu minimizing the aggressive-setting bound: 2 ||A|| sqrt(5 D1 / ((T+1) D2)).
double mu_aggressive(int T, double D1, double D2, double norm_A);

/// mu minimizing the hybrid-setting bound:
/// (2 ||A|| / (T+1)) sqrt((1+alpha) D1 / D2).
double mu_hybrid(int T, double alpha, double D1, double D2, double norm_A);

/// Streaming convex combination with weights proportional to t+1.
class DualAggregate {
 public:
  void add(const Eigen::VectorXd& y, int t);
  Eigen::VectorXd average() const;
  double weight_sum() const { return weight_sum_; }
  int count() const { return count_; }

 private:
  Eigen::VectorXd weighted_sum_;
  double weight_sum_ = 0.0;
  int count_ = 0;
};

/// Aggregates y_*(x_0..x_T) with the Theorem weights 2(t+1)/((T+1)(T+2)).
DualAggregate aggregate_dual(const std::vector<Eigen::VectorXd>& ys);

/// max_y phi(x_bar, y) - min_x phi(x, y_bar), via the exact oracles.
double primal_dual_gap(const MinMaxProblem& problem, const Eigen::VectorXd& x_bar,
                       const Eigen::VectorXd& y_bar);

/// First-order oracle adapter for the smoothed objective. Gradient calls
/// happen exactly once per extrapolation point x_t, in order, so the adapter
/// also maintains the running dual aggregate sum_k (k+1) y_*(x_k). With
/// check_sandwich set, every evaluation asserts
/// value <= exact <= value + mu * D2 (debug use; costs one exact oracle).
class SmoothedOracle final : public FirstOrderOracle {
 public:
  SmoothedOracle(const MinMaxProblem& problem, double mu, bool check_sandwich = false);

  double value(const Eigen::VectorXd& x) override;
  double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) override;

  int gradient_calls() const { return calls_; }
  /// Normalized dual aggregate over indices 0..t. Requires t+1 or t+2
  /// gradient calls so far (the newest lookahead term is subtracted).
  Eigen::VectorXd dual_average_upto(int t) const;

 private:
  const MinMaxProblem& problem_;
  double mu_;
  bool check_sandwich_;
  int calls_ = 0;
  Eigen::VectorXd weighted_sum_;
  Eigen::VectorXd last_y_;
};

struct SmoothingSolveOptions {
  double mu = 0.0;
  LipschitzStrategy strategy;
  int max_iters = 0;
  double gap_target = -1.0;  // negative: run the full budget
  int gap_check_period = 100;
  bool check_first_hundred = false;
  bool collect_certificates = false;
  bool check_sandwich = false;
  // Test/diagnostic hook invoked at every checkpoint.
  std::function<void(const SolverState&, double gap, const Eigen::VectorXd& y_bar)>
      on_checkpoint;
};

struct SmoothingSolveResult {
  Eigen::VectorXd x_bar;
  Eigen::VectorXd y_bar;
  double gap = 0.0;
  bool converged = false;
  int iterations = 0;
  double l_mu = 0.0;
  int switch_back_iteration = -1;
  std::vector<IterationRecord> trace;
  std::vector<Certificate> certificates;
};

/// The smoothed-problem driver: runs the accelerated method on the smoothed
/// objective with L = lipschitz_of_smoothed(problem, mu), checking the exact
/// primal-dual gap of the pair (u_t, y_bar_t) at the configured cadence.
SmoothingSolveResult smoothing_solve(const MinMaxProblem& problem,
                                     const ProxSetup& primal_setup,
                                     const GammaSchedule& schedule,
                                     const SmoothingSolveOptions& options);

}  // namespace afom
