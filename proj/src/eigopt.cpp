#include "afom/eigopt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace afom {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& a,
                                                         bool vectors) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("expected a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigendecomposition failed");
  return solver;
}

double log_sum_exp_shifted(const Eigen::VectorXd& lambdas, double mu, double* max_out) {
  const double lmax = lambdas.maxCoeff();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    sum += std::exp((lambdas[i] - lmax) / mu);
  if (max_out) *max_out = lmax;
  return std::log(sum);
}

void require_mu(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
}

}  // namespace

Eigen::MatrixXd EigInstance::assemble(const Eigen::VectorXd& x) const {
  if (x.size() != m) throw std::invalid_argument("assemble: coefficient dimension mismatch");
  Eigen::VectorXd combined = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pattern.size()));
  for (int j = 0; j < m; ++j) {
    const double xj = x[j];
    if (xj != 0.0) combined += xj * values[j];
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const auto [r, c] = pattern[k];
    out(r, c) = combined[static_cast<Eigen::Index>(k)];
    out(c, r) = combined[static_cast<Eigen::Index>(k)];
  }
  return out;
}

void EigInstance::matvec(int j, const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
  out.setZero(n);
  const Eigen::VectorXd& vals = values[j];
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const auto [r, c] = pattern[k];
    const double a = vals[static_cast<Eigen::Index>(k)];
    out[r] += a * v[c];
    if (r != c) out[c] += a * v[r];
  }
}

double EigInstance::frobenius_dot(int j, const Eigen::MatrixXd& y) const {
  const Eigen::VectorXd& vals = values[j];
  double sum = 0.0;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const auto [r, c] = pattern[k];
    const double a = vals[static_cast<Eigen::Index>(k)];
    sum += (r == c) ? a * y(r, c) : 2.0 * a * y(r, c);
  }
  return sum;
}

void EigInstance::validate() const {
  if (m <= 0 || n <= 0) throw std::invalid_argument("instance dimensions must be positive");
  if (static_cast<int>(values.size()) != m)
    throw std::invalid_argument("instance value-array count mismatch");
  std::set<std::pair<int, int>> seen;
  for (const auto& [r, c] : pattern) {
    if (r < c || r >= n || c < 0)
      throw std::invalid_argument("instance pattern entry out of range");
    if (!seen.insert({r, c}).second)
      throw std::invalid_argument("instance pattern has duplicate entries");
  }
  for (const Eigen::VectorXd& v : values) {
    if (v.size() != static_cast<Eigen::Index>(pattern.size()))
      throw std::invalid_argument("instance value array misaligned with pattern");
    if (!v.allFinite()) throw std::invalid_argument("instance has non-finite values");
  }
}

double smoothed_lambda_max(const Eigen::MatrixXd& a, double mu) {
  require_mu(mu);
  const auto solver = decompose(a, /*vectors=*/false);
  double lmax = 0.0;
  const double lse = log_sum_exp_shifted(solver.eigenvalues(), mu, &lmax);
  return lmax + mu * lse - mu * std::log(static_cast<double>(a.rows()));
}

Eigen::MatrixXd density_maximizer(const Eigen::MatrixXd& a, double mu) {
  require_mu(mu);
  const auto solver = decompose(a, /*vectors=*/true);
  const Eigen::VectorXd& lambdas = solver.eigenvalues();
  const double lmax = lambdas.maxCoeff();
  Eigen::VectorXd weights(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    weights[i] = std::exp((lambdas[i] - lmax) / mu);
  weights /= weights.sum();
  return solver.eigenvectors() * weights.asDiagonal() * solver.eigenvectors().transpose();
}

SpectralSmoothing smoothed_spectral(const Eigen::MatrixXd& a, double mu) {
  require_mu(mu);
  const auto solver = decompose(a, /*vectors=*/true);
  const Eigen::VectorXd& lambdas = solver.eigenvalues();
  const double lmax = lambdas.maxCoeff();
  Eigen::VectorXd weights(lambdas.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    weights[i] = std::exp((lambdas[i] - lmax) / mu);
    sum += weights[i];
  }
  SpectralSmoothing out;
  out.value = lmax + mu * std::log(sum) - mu * std::log(static_cast<double>(a.rows()));
  weights /= sum;
  out.y_star = solver.eigenvectors() * weights.asDiagonal() * solver.eigenvectors().transpose();
  return out;
}

Eigen::VectorXd eig_gradient(const Eigen::VectorXd& x, const EigInstance& instance,
                             double mu) {
  const Eigen::MatrixXd y = smoothed_spectral(instance.assemble(x), mu).y_star;
  Eigen::VectorXd grad(instance.m);
  for (int j = 0; j < instance.m; ++j) grad[j] = instance.frobenius_dot(j, y);
  return grad;
}

double power_method_norm(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply, int n,
    double tol, int max_iters, std::uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("power_method_norm: tol must be positive");
  if (n < 1) throw std::invalid_argument("power_method_norm: empty matrix");

  // Two-column simultaneous power iteration with a Rayleigh-Ritz estimate.
  // One vector stalls on +/- paired extremes and on start vectors nearly
  // orthogonal to the dominant eigenvector; a 2-dimensional subspace
  // converges at the (lambda_3 / lambda_1)^2 rate instead.
  const int block = std::min(2, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd basis(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) basis(i, j) = normal(rng);
  const auto orthonormalize = [n, block](Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    m = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
  };
  orthonormalize(basis);

  // Stopping is deliberately conservative: Ritz values can plateau on a
  // subdominant eigenvalue before the extreme mode surfaces, which is
  // indistinguishable from convergence by local changes alone. An iteration
  // floor rides plateaus out, the ratio median smooths transient jitter,
  // and the projected geometric remainder is folded into the returned value
  // so slowly resolving spectra come out accurate within the cap.
  const int min_iters = std::min(100, max_iters / 2);
  Eigen::MatrixXd image(n, block);
  Eigen::VectorXd in(n), out(n);
  double estimate = 0.0;
  double remainder = 0.0;
  double changes[3] = {-1.0, -1.0, -1.0};
  int streak = 0;
  for (int it = 0; it < max_iters; ++it) {
    for (int j = 0; j < block; ++j) {
      in = basis.col(j);
      apply(in, out);
      image.col(j) = out;
    }
    if (image.norm() == 0.0) return 0.0;

    double theta;
    if (block == 1) {
      theta = std::abs(basis.col(0).dot(image.col(0)));
    } else {
      Eigen::Matrix2d projected = basis.transpose() * image;
      const double mean = 0.5 * (projected(0, 0) + projected(1, 1));
      const double off = 0.5 * (projected(0, 1) + projected(1, 0));
      const double radius =
          std::sqrt(0.25 * std::pow(projected(0, 0) - projected(1, 1), 2) + off * off);
      theta = std::max(std::abs(mean + radius), std::abs(mean - radius));
    }

    basis = image;
    orthonormalize(basis);

    if (it > 0) {
      const double change = theta - estimate;
      changes[2] = changes[1];
      changes[1] = changes[0];
      changes[0] = std::abs(change);
      if (changes[1] > 0.0 && changes[2] > 0.0) {
        const double r0 = changes[0] / changes[1];
        const double r1 = changes[1] / changes[2];
        const double ratio = std::min(std::max(r0, r1), 0.999);
        remainder = change == 0.0 ? 0.0 : change * ratio / (1.0 - ratio);
        if (std::abs(remainder) <= tol * std::abs(theta))
          ++streak;
        else
          streak = 0;
        if (it + 1 >= min_iters && streak >= 2) return theta + remainder;
      }
    }
    estimate = theta;
  }
  return estimate + remainder;
}

double power_method_norm(const Eigen::MatrixXd& a, double tol, int max_iters,
                         std::uint64_t seed) {
  return power_method_norm(
      [&a](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out.noalias() = a * v; },
      static_cast<int>(a.rows()), tol, max_iters, seed);
}

double exact_lambda_max(const Eigen::MatrixXd& a) {
  return decompose(a, /*vectors=*/false).eigenvalues().maxCoeff();
}

double duality_gap_eig(const Eigen::VectorXd& x_bar, const Eigen::MatrixXd& y_bar,
                       const EigInstance& instance) {
  if (x_bar.size() != instance.m || y_bar.rows() != instance.n || y_bar.cols() != instance.n)
    throw std::invalid_argument("duality_gap_eig: dimension mismatch");
  double min_dual = std::numeric_limits<double>::infinity();
  for (int j = 0; j < instance.m; ++j)
    min_dual = std::min(min_dual, instance.frobenius_dot(j, y_bar));
  return exact_lambda_max(instance.assemble(x_bar)) - min_dual;
}

EigInstance generate_instance(int m, int n, double density, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate_instance: m, n must be >= 1");
  if (!(density > 0.0) || density > 1.0)
    throw std::invalid_argument("generate_instance: density must be in (0, 1]");

  std::mt19937_64 rng(seed);
  const long target = static_cast<long>(std::ceil(density * static_cast<double>(n) * n));

  // Candidate pools for stored (lower-triangle) coordinates; a diagonal pick
  // adds one full-matrix nonzero, an off-diagonal pick adds two. When one
  // nonzero is missing we draw from the diagonal pool so the full count
  // lands exactly on the target whenever possible.
  std::vector<std::pair<int, int>> diag_pool, off_pool;
  diag_pool.reserve(n);
  for (int i = 0; i < n; ++i) diag_pool.emplace_back(i, i);
  off_pool.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int r = 1; r < n; ++r)
    for (int c = 0; c < r; ++c) off_pool.emplace_back(r, c);

  const auto draw = [&rng](std::vector<std::pair<int, int>>& pool, std::size_t& used) {
    std::uniform_int_distribution<std::size_t> pick(used, pool.size() - 1);
    std::swap(pool[used], pool[pick(rng)]);
    return pool[used++];
  };

  EigInstance instance;
  instance.m = m;
  instance.n = n;
  instance.density = density;
  instance.seed = seed;

  std::size_t diag_used = 0, off_used = 0;
  long full = 0;
  while (full < target) {
    const long remaining = target - full;
    const std::size_t diag_left = diag_pool.size() - diag_used;
    const std::size_t off_left = off_pool.size() - off_used;
    if (remaining == 1 && diag_left > 0) {
      instance.pattern.push_back(draw(diag_pool, diag_used));
      full += 1;
    } else if (diag_left + off_left == 0) {
      break;  // density 1 fully consumed
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, diag_left + off_left - 1);
      if (pick(rng) < diag_left) {
        instance.pattern.push_back(draw(diag_pool, diag_used));
        full += 1;
      } else {
        instance.pattern.push_back(draw(off_pool, off_used));
        full += 2;
      }
    }
  }
  instance.nnz_full = static_cast<int>(full);
  std::sort(instance.pattern.begin(), instance.pattern.end());

  std::normal_distribution<double> normal(0.0, 1.0);
  instance.values.reserve(m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd vals(static_cast<Eigen::Index>(instance.pattern.size()));
    for (Eigen::Index k = 0; k < vals.size(); ++k) vals[k] = normal(rng);
    instance.values.push_back(std::move(vals));
  }

  double l_prime = 0.0;
  for (int j = 0; j < m; ++j) {
    const double est = power_method_norm(
        [&instance, j](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
          instance.matvec(j, v, out);
        },
        n, 1e-4, 1000, seed + static_cast<std::uint64_t>(j));
    l_prime = std::max(l_prime, est);
  }
  instance.l_prime = l_prime;
  return instance;
}

double mu_for_accuracy(double eps_abs, int n) {
  if (!(eps_abs > 0.0)) throw std::invalid_argument("mu_for_accuracy: eps must be positive");
  if (n < 2) throw std::invalid_argument("mu_for_accuracy: n must be >= 2");
  return eps_abs / (2.0 * std::log(static_cast<double>(n)));
}

void write_instance(const EigInstance& instance, std::ostream& out) {
  out << std::setprecision(17);
  out << "afom-eig-instance 1\n";
  out << "m " << instance.m << "\n";
  out << "n " << instance.n << "\n";
  out << "density " << instance.density << "\n";
  out << "seed " << instance.seed << "\n";
  out << "value_distribution " << instance.value_distribution << "\n";
  out << "nnz_full " << instance.nnz_full << "\n";
  out << "pattern " << instance.pattern.size() << "\n";
  for (const auto& [r, c] : instance.pattern) out << r << " " << c << "\n";
  for (int j = 0; j < instance.m; ++j) {
    out << "matrix " << j << "\n";
    const Eigen::VectorXd& vals = instance.values[j];
    for (Eigen::Index k = 0; k < vals.size(); ++k) out << vals[k] << "\n";
  }
  out << "l_prime " << instance.l_prime << "\n";
  out << "end\n";
  if (!out) throw std::runtime_error("failed to write instance");
}

void write_instance_file(const EigInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_instance(instance, out);
}

namespace {

std::string expect_token(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw std::runtime_error(std::string("instance parse: missing ") + what);
  return token;
}

void expect_keyword(std::istream& in, const std::string& keyword) {
  const std::string token = expect_token(in, keyword.c_str());
  if (token != keyword)
    throw std::runtime_error("instance parse: expected '" + keyword + "', got '" + token + "'");
}

}  // namespace

EigInstance read_instance(std::istream& in) {
  expect_keyword(in, "afom-eig-instance");
  expect_keyword(in, "1");
  EigInstance instance;
  expect_keyword(in, "m");
  in >> instance.m;
  expect_keyword(in, "n");
  in >> instance.n;
  expect_keyword(in, "density");
  in >> instance.density;
  expect_keyword(in, "seed");
  in >> instance.seed;
  expect_keyword(in, "value_distribution");
  in >> instance.value_distribution;
  expect_keyword(in, "nnz_full");
  in >> instance.nnz_full;
  expect_keyword(in, "pattern");
  std::size_t count = 0;
  in >> count;
  if (!in) throw std::runtime_error("instance parse: bad header");
  instance.pattern.resize(count);
  for (auto& [r, c] : instance.pattern) {
    in >> r >> c;
  }
  instance.values.reserve(instance.m);
  for (int j = 0; j < instance.m; ++j) {
    expect_keyword(in, "matrix");
    int index = -1;
    in >> index;
    if (index != j) throw std::runtime_error("instance parse: matrix blocks out of order");
    Eigen::VectorXd vals(static_cast<Eigen::Index>(count));
    for (std::size_t k = 0; k < count; ++k) in >> vals[static_cast<Eigen::Index>(k)];
    instance.values.push_back(std::move(vals));
  }
  expect_keyword(in, "l_prime");
  in >> instance.l_prime;
  expect_keyword(in, "end");
  if (!in) throw std::runtime_error("instance parse: truncated file");
  instance.validate();
  return instance;
}

EigInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(in);
}

MinMaxProblem make_minmax_problem(const EigInstance& instance) {
  const int n = instance.n;
  const EigInstance* inst = &instance;

  const auto to_matrix = [n](const Eigen::VectorXd& w) {
    return Eigen::Map<const Eigen::MatrixXd>(w.data(), n, n);
  };

  MinMaxProblem problem;
  problem.primal_dim = instance.m;
  problem.dual_dim = n * n;
  problem.operator_norm = instance.l_prime;
  problem.lipschitz_f1 = 0.0;
  problem.dual_diameter = std::log(static_cast<double>(n));

  problem.apply_op = [inst, n](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd a = inst->assemble(x);
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(a.data(), n * n));
  };
  problem.apply_adjoint = [inst, to_matrix](const Eigen::VectorXd& y) {
    const Eigen::MatrixXd ym = to_matrix(y);
    Eigen::VectorXd g(inst->m);
    for (int j = 0; j < inst->m; ++j) g[j] = inst->frobenius_dot(j, ym);
    return g;
  };
  problem.inner_max = [to_matrix, n](const Eigen::VectorXd& w, double mu) {
    const SpectralSmoothing s = smoothed_spectral(to_matrix(w), mu);
    InnerMaxResult result;
    result.value = s.value;
    result.y_star = Eigen::Map<const Eigen::VectorXd>(s.y_star.data(), n * n);
    return result;
  };
  problem.inner_max_value = [to_matrix](const Eigen::VectorXd& w, double mu) {
    return smoothed_lambda_max(to_matrix(w), mu);
  };
  problem.sup_dual = [to_matrix](const Eigen::VectorXd& w) {
    return exact_lambda_max(to_matrix(w));
  };
  problem.min_primal = [](const Eigen::VectorXd& g) { return g.minCoeff(); };
  return problem;
}

}  // namespace afom
