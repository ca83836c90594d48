#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "afom/smoothing.hpp"

namespace afom {

/// A family of m symmetric n x n matrices sharing one sparsity pattern,
/// stored as lower-triangle coordinates (row >= col) plus per-matrix value
/// arrays aligned to the pattern. l_prime is the power-method estimate of
/// max_j ||A_j||_inf, the scale for target accuracies.
struct EigInstance {
  int m = 0;
  int n = 0;
  double density = 0.0;
  std::uint64_t seed = 0;
  std::string value_distribution = "standard_normal";
  int nnz_full = 0;  // nonzeros of the full matrix, both triangles counted

  std::vector<std::pair<int, int>> pattern;  // sorted, row >= col, no duplicates
  std::vector<Eigen::VectorXd> values;       // one array per matrix
  double l_prime = 0.0;

  /// A(x) = sum_j x_j A_j as a dense symmetric matrix.
  Eigen::MatrixXd assemble(const Eigen::VectorXd& x) const;
  /// out = A_j * v using the sparse pattern.
  void matvec(int j, const Eigen::VectorXd& v, Eigen::VectorXd& out) const;
  /// <A_j, Y>_F over the pattern (off-diagonal entries counted twice).
  double frobenius_dot(int j, const Eigen::MatrixXd& y) const;

  void validate() const;
};

/// Smoothed spectral objective of a symmetric matrix:
///   mu * ln(sum_i exp(lambda_i(A)/mu)) - mu * ln(n),
/// evaluated from the eigendecomposition with a spectral shift.
double smoothed_lambda_max(const Eigen::MatrixXd& a, double mu);

/// The unique maximizer of <A, Y> - mu * d(Y) over unit-trace PSD matrices:
/// eigenvectors of A with softmax(lambda/mu) weights.
Eigen::MatrixXd density_maximizer(const Eigen::MatrixXd& a, double mu);

/// One eigendecomposition yielding both the smoothed value and its maximizer.
struct SpectralSmoothing {
  double value = 0.0;
  Eigen::MatrixXd y_star;
};
SpectralSmoothing smoothed_spectral(const Eigen::MatrixXd& a, double mu);

/// Gradient of x -> smoothed_lambda_max(A(x), mu):
/// entry j is <A_j, Y_*(x)>_F.
Eigen::VectorXd eig_gradient(const Eigen::VectorXd& x, const EigInstance& instance,
                             double mu);

/// Largest-magnitude eigenvalue estimate by power iteration with a seeded
/// start vector; stops when the successive estimate changes by at most a
/// relative tol, or after max_iters.
double power_method_norm(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>&
                             apply,
                         int n, double tol, int max_iters, std::uint64_t seed);
double power_method_norm(const Eigen::MatrixXd& a, double tol = 1e-4, int max_iters = 1000,
                         std::uint64_t seed = 0);

/// Largest eigenvalue via a dense symmetric eigensolver.
double exact_lambda_max(const Eigen::MatrixXd& a);

/// lambda_max(A(x_bar)) - min_j <A_j, Y_bar>_F; the computable optimality
/// certificate driving termination.
double duality_gap_eig(const Eigen::VectorXd& x_bar, const Eigen::MatrixXd& y_bar,
                       const EigInstance& instance);

/// Random instance: one shared symmetric pattern with ceil(density * n^2)
/// full-matrix nonzeros sampled uniformly without replacement, standard
/// normal values mirrored across the diagonal, l_prime from the power
/// method. Identical seeds give identical instances.
EigInstance generate_instance(int m, int n, double density, std::uint64_t seed);

/// Smoothness parameter of the experimental protocol: the absolute target
/// eps_rel * l_prime spread over the dual diameter, eps_abs / (2 ln n).
double mu_for_accuracy(double eps_abs, int n);

/// Self-describing text format; round-trips bit-exactly.
void write_instance(const EigInstance& instance, std::ostream& out);
void write_instance_file(const EigInstance& instance, const std::string& path);
EigInstance read_instance(std::istream& in);
EigInstance read_instance_file(const std::string& path);

/// Wires the instance into the generic min-max structure: primal simplex of
/// dimension m, vectorized density-matrix dual, operator norm l_prime.
/// The instance must outlive the returned problem.
MinMaxProblem make_minmax_problem(const EigInstance& instance);

}  // namespace afom
