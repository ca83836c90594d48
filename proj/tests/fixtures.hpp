// Shared test fixtures and independent reference oracles. Everything here
// deliberately avoids the library's incremental code paths: the reference
// solver recomputes all aggregates from stored history, and minima come
// from grids or projected gradient rather than closed forms.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "afom/prox.hpp"
#include "afom/schedule.hpp"
#include "afom/solver.hpp"

namespace afom::testing {

// ---------------------------------------------------------------------------
// Oracles

/// f(x) = 0.5 * scale * ||x - p||_2^2. With the 1-norm simplex setup its
/// gradient is (scale)-Lipschitz; the curvature observed between any two
/// points is scale * ||d||_2^2 / ||d||_1^2.
class QuadraticOracle final : public FirstOrderOracle {
 public:
  explicit QuadraticOracle(Eigen::VectorXd p, double scale = 1.0)
      : p_(std::move(p)), scale_(scale) {}

  double value(const Eigen::VectorXd& x) override {
    return 0.5 * scale_ * (x - p_).squaredNorm();
  }
  double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) override {
    grad = scale_ * (x - p_);
    return value(x);
  }

  const Eigen::VectorXd& target() const { return p_; }
  double scale() const { return scale_; }

 private:
  Eigen::VectorXd p_;
  double scale_;
};

/// Wraps value/grad lambdas as an oracle.
class FunctionOracle final : public FirstOrderOracle {
 public:
  FunctionOracle(std::function<double(const Eigen::VectorXd&)> f,
                 std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g)
      : f_(std::move(f)), g_(std::move(g)) {}
  double value(const Eigen::VectorXd& x) override { return f_(x); }
  double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) override {
    grad = g_(x);
    return f_(x);
  }

 private:
  std::function<double(const Eigen::VectorXd&)> f_;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> g_;
};

// ---------------------------------------------------------------------------
// A second prox geometry: Euclidean ball with d(x) = 0.5 ||x - c||^2.

class EuclideanBallSetup final : public ProxSetup {
 public:
  EuclideanBallSetup(Eigen::VectorXd center, double radius)
      : center_(std::move(center)), radius_(radius) {}

  int dim() const override { return static_cast<int>(center_.size()); }
  const Eigen::VectorXd& center() const override { return center_; }
  double diameter_bound() const override { return 0.5 * radius_ * radius_; }
  double dgf(const Eigen::VectorXd& x) const override {
    return 0.5 * (x - center_).squaredNorm();
  }
  double bregman(const Eigen::VectorXd& z, const Eigen::VectorXd& x) const override {
    return 0.5 * (x - z).squaredNorm();
  }
  Eigen::VectorXd prox(const Eigen::VectorXd& z, const Eigen::VectorXd& s) const override {
    return project(z - s);
  }
  Eigen::VectorXd prox_from_center(const Eigen::VectorXd& s) const override {
    return project(center_ - s);
  }
  double norm(const Eigen::VectorXd& v) const override { return v.norm(); }
  bool contains(const Eigen::VectorXd& x, double tol) const override {
    return (x - center_).norm() <= radius_ + tol;
  }

 private:
  Eigen::VectorXd project(const Eigen::VectorXd& x) const {
    const double dist = (x - center_).norm();
    if (dist <= radius_) return x;
    return center_ + (radius_ / dist) * (x - center_);
  }

  Eigen::VectorXd center_;
  double radius_;
};

// ---------------------------------------------------------------------------
// Independent minimization oracles

/// Euclidean projection onto the probability simplex (sort-based).
inline Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size();
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, lambda = 0.0;
  int rho = -1;
  for (Eigen::Index j = 0; j < m; ++j) {
    css += u[j];
    const double candidate = (1.0 - css) / (j + 1.0);
    if (u[j] + candidate > 0.0) {
      rho = static_cast<int>(j);
      lambda = candidate;
    }
  }
  if (rho < 0) throw std::logic_error("project_simplex: empty support");
  return (v.array() + lambda).cwiseMax(0.0);
}

/// Projected gradient descent on the simplex; independent f* oracle.
inline double projected_gradient_min(FirstOrderOracle& oracle, int m, double lipschitz,
                                     double tol = 1e-14, int max_iters = 200000) {
  Eigen::VectorXd x = uniform_point(m);
  Eigen::VectorXd grad;
  double f = oracle.value_grad(x, grad);
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd next = project_simplex(x - grad / lipschitz);
    const double delta = (next - x).norm();
    x = next;
    f = oracle.value_grad(x, grad);
    if (delta <= tol) break;
  }
  return f;
}

/// All compositions of `resolution` into m nonnegative parts, scaled to the
/// simplex. Sizes: C(resolution + m - 1, m - 1).
inline void simplex_grid_rec(int m, int resolution, Eigen::VectorXd& current, int pos,
                             int remaining, std::vector<Eigen::VectorXd>& out) {
  if (pos == m - 1) {
    current[pos] = static_cast<double>(remaining) / resolution;
    out.push_back(current);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current[pos] = static_cast<double>(k) / resolution;
    simplex_grid_rec(m, resolution, current, pos + 1, remaining - k, out);
  }
}

inline std::vector<Eigen::VectorXd> simplex_grid(int m, int resolution) {
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd current(m);
  simplex_grid_rec(m, resolution, current, 0, resolution, out);
  return out;
}

/// Grid resolution giving roughly `target_points` lattice points on the
/// m-simplex.
inline int grid_resolution_for(int m, int target_points) {
  int resolution = 1;
  while (true) {
    double count = 1.0;
    for (int i = 1; i < m; ++i) count *= (resolution + i) / static_cast<double>(i);
    if (count >= target_points) return resolution;
    ++resolution;
  }
}

/// Central finite differences of a scalar function.
inline Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h = 1e-6) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

/// Random interior simplex point (Dirichlet-ish via exponentials).
inline Eigen::VectorXd random_simplex_point(int m, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x[i] = expo(rng) + 1e-12;
  return x / x.sum();
}

// ---------------------------------------------------------------------------
// Reference implementation of the accelerated method. Keeps the whole
// history and recomputes every aggregate from scratch each step, so it
// shares no incremental state with the production solver. The L sequence is
// injectable: entry t (1-based step index) forces L_t; an empty schedule
// means nonadaptive, and the string "aggressive" recomputes rule (most
// aggressive) inline.

struct ReferenceTrace {
  std::vector<Eigen::VectorXd> x, u, z, xhat;
  std::vector<double> L, f_u, chi, psi;
};

class ReferenceSolver {
 public:
  ReferenceSolver(FirstOrderOracle& oracle, const ProxSetup& setup, double L_global,
                  double kappa = 1e-12)
      : oracle_(oracle), setup_(setup), L_global_(L_global), kappa_(kappa) {}

  /// forced_L[t] (t >= 1) overrides the constant choice at step t; entries
  /// <= 0 mean "use the aggressive rule at this step".
  ReferenceTrace solve(int steps, const std::vector<double>& forced_L = {}) {
    ReferenceTrace tr;
    const GammaSchedule schedule = GammaSchedule::nesterov();

    Eigen::VectorXd x0 = setup_.center();
    Eigen::VectorXd g0;
    double f0 = oracle_.value_grad(x0, g0);
    xs_ = {x0};
    gs_ = {g0};
    fs_ = {f0};

    Eigen::VectorXd u0 = setup_.prox_from_center(schedule.gamma(0) / L_global_ * g0);
    Eigen::VectorXd z0 = u0;
    Eigen::VectorXd x1 = z0;
    Eigen::VectorXd g1;
    double f1 = oracle_.value_grad(x1, g1);
    xs_.push_back(x1);
    gs_.push_back(g1);
    fs_.push_back(f1);

    Eigen::VectorXd xhat1 = setup_.prox_composed(
        schedule.gamma(0) / L_global_ * g0, schedule.gamma(1) / L_global_ * g1);
    const double tau0 = schedule.tau(0);
    Eigen::VectorXd u1 = tau0 * xhat1 + (1.0 - tau0) * u0;

    tr.x = {x0, x1};
    tr.u = {u0, u1};
    tr.z = {z0};
    tr.xhat = {xhat1};
    tr.L = {L_global_};
    tr.f_u = {oracle_.value(u0), oracle_.value(u1)};
    tr.chi = {0.0};
    tr.psi = {psi_from_history(0, L_global_, z0, schedule)};

    for (int t = 1; t <= steps; ++t) {
      double L_t;
      if (static_cast<std::size_t>(t) < forced_L.size() && forced_L[t] > 0.0) {
        L_t = forced_L[t];
      } else {
        const Eigen::VectorXd d = tr.u[t] - tr.x[t];
        const double dist = setup_.norm(d);
        if (dist == 0.0) {
          L_t = kappa_ * L_global_;
        } else {
          const double curvature =
              2.0 * (tr.f_u[t] - fs_[t] - gs_[t].dot(d)) / (dist * dist);
          L_t = std::min(std::max(curvature, kappa_ * L_global_), L_global_);
        }
      }

      // z_t from the full stored history.
      Eigen::VectorXd s = Eigen::VectorXd::Zero(setup_.dim());
      for (int k = 0; k <= t; ++k) s += schedule.gamma(k) * gs_[k];
      Eigen::VectorXd z = setup_.prox_from_center(s / L_t);

      const double dz = setup_.norm(tr.z[t - 1] - tr.xhat[t - 1]);
      const double chi =
          tr.chi[t - 1] + (L_t - tr.L[t - 1]) * (setup_.dgf(z) - 0.5 * dz * dz);

      const double tau = schedule.tau(t);
      Eigen::VectorXd x_next = tau * z + (1.0 - tau) * tr.u[t];
      Eigen::VectorXd g_next;
      const double f_next = oracle_.value_grad(x_next, g_next);
      xs_.push_back(x_next);
      gs_.push_back(g_next);
      fs_.push_back(f_next);

      Eigen::VectorXd xhat =
          setup_.prox_composed(s / L_t, schedule.gamma(t + 1) / L_t * g_next);
      Eigen::VectorXd u_next = tau * xhat + (1.0 - tau) * tr.u[t];

      tr.L.push_back(L_t);
      tr.z.push_back(z);
      tr.chi.push_back(chi);
      tr.psi.push_back(psi_from_history(t, L_t, z, schedule));
      tr.x.push_back(x_next);
      tr.xhat.push_back(xhat);
      tr.u.push_back(u_next);
      tr.f_u.push_back(oracle_.value(u_next));
    }
    return tr;
  }

 private:
  double psi_from_history(int t, double L_t, const Eigen::VectorXd& z,
                          const GammaSchedule& schedule) const {
    double psi = L_t * setup_.dgf(z);
    for (int k = 0; k <= t; ++k)
      psi += schedule.gamma(k) * (fs_[k] + gs_[k].dot(z - xs_[k]));
    return psi;
  }

  FirstOrderOracle& oracle_;
  const ProxSetup& setup_;
  double L_global_;
  double kappa_;
  std::vector<Eigen::VectorXd> xs_, gs_;
  std::vector<double> fs_;
};

}  // namespace afom::testing
