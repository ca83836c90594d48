#include "afom/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afom {

void validate_simplex_point(const Eigen::VectorXd& x, double tol) {
  if (x.size() == 0) throw std::invalid_argument("simplex point has dimension 0");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (!std::isfinite(v)) throw std::invalid_argument("simplex point has non-finite entry");
    if (v < -tol) throw std::invalid_argument("simplex point has negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol)
    throw std::invalid_argument("simplex point does not sum to 1");
}

Eigen::VectorXd uniform_point(int m) {
  if (m <= 0) throw std::invalid_argument("dimension must be positive");
  return Eigen::VectorXd::Constant(m, 1.0 / m);
}

double entropy_value(const Eigen::VectorXd& x) {
  const Eigen::Index m = x.size();
  if (m == 0) throw std::invalid_argument("entropy_value: dimension 0");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = x[i];
    if (v < 0.0) throw std::invalid_argument("entropy_value: negative coordinate");
    if (v > 0.0) sum += v * std::log(v);
  }
  return std::log(static_cast<double>(m)) + sum;
}

double relative_entropy(const Eigen::VectorXd& z, const Eigen::VectorXd& x) {
  if (z.size() != x.size() || z.size() == 0)
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] == 0.0) throw std::domain_error("relative_entropy: anchor not strictly positive");
    if (x[i] > 0.0) sum += x[i] * std::log(x[i] / z[i]);
  }
  return sum;
}

namespace {

// w_i = z_i * exp(-(s_i - shift)), normalized, with the shift taken over
// the support of z: coordinates where z is 0 stay 0 (the Bregman distance
// is finite only on the support), and every exponent there is <= 0, so
// large |s| cannot overflow. Underflowed coordinates come out exactly 0
// and are left as-is.
Eigen::VectorXd shifted_exponential_reweight(const Eigen::VectorXd& z,
                                             const Eigen::VectorXd& s) {
  double shift = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z[i] > 0.0) shift = std::min(shift, s[i]);
  if (!std::isfinite(shift))
    throw std::domain_error("entropy prox: anchor has no positive mass");
  Eigen::VectorXd w(z.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    w[i] = z[i] > 0.0 ? z[i] * std::exp(-(s[i] - shift)) : 0.0;
    sum += w[i];
  }
  return w / sum;
}

}  // namespace

Eigen::VectorXd entropy_prox(const Eigen::VectorXd& z, const Eigen::VectorXd& s) {
  if (z.size() != s.size() || z.size() == 0)
    throw std::invalid_argument("entropy_prox: dimension mismatch");
  if (!s.allFinite()) throw std::invalid_argument("entropy_prox: non-finite linear term");
  return shifted_exponential_reweight(z, s);
}

Eigen::VectorXd entropy_prox_from_center(const Eigen::VectorXd& s) {
  if (s.size() == 0) throw std::invalid_argument("entropy_prox_from_center: dimension 0");
  if (!s.allFinite())
    throw std::invalid_argument("entropy_prox_from_center: non-finite linear term");
  return shifted_exponential_reweight(Eigen::VectorXd::Ones(s.size()), s);
}

EntropySimplexSetup::EntropySimplexSetup(int m)
    : m_(m), center_(uniform_point(m)), diameter_(std::log(static_cast<double>(m))) {}

double EntropySimplexSetup::dgf(const Eigen::VectorXd& x) const { return entropy_value(x); }

double EntropySimplexSetup::bregman(const Eigen::VectorXd& z, const Eigen::VectorXd& x) const {
  return relative_entropy(z, x);
}

Eigen::VectorXd EntropySimplexSetup::prox(const Eigen::VectorXd& z,
                                          const Eigen::VectorXd& s) const {
  return entropy_prox(z, s);
}

Eigen::VectorXd EntropySimplexSetup::prox_from_center(const Eigen::VectorXd& s) const {
  return entropy_prox_from_center(s);
}

bool EntropySimplexSetup::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != m_) return false;
  if (!x.allFinite()) return false;
  if (x.minCoeff() < -tol) return false;
  return std::abs(x.sum() - 1.0) <= tol;
}

}  // namespace afom
