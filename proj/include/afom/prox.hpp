#pragma once

#include <Eigen/Core>

namespace afom {

/// Checks that x is a valid simplex point: nonnegative entries summing to
/// one within tol. Throws std::invalid_argument otherwise.
void validate_simplex_point(const Eigen::VectorXd& x, double tol = 1e-9);

/// Uniform point on the m-simplex (the entropy center).
Eigen::VectorXd uniform_point(int m);

/// Entropy distance-generating function on the simplex,
///   d(x) = ln(m) + sum_i x_i ln(x_i),
/// with the convention 0*ln(0) = 0. Ranges over [0, ln m], vanishing at
/// the uniform point.
double entropy_value(const Eigen::VectorXd& x);

/// Relative entropy sum_i x_i ln(x_i / z_i); the Bregman distance of the
/// entropy setup. Requires z strictly positive (exact zeros are a domain
/// error).
double relative_entropy(const Eigen::VectorXd& z, const Eigen::VectorXd& x);

/// Entropy prox-mapping from anchor z with linear term s:
///   argmin_x { <s, x - z> + V_z(x) }  =  z_i exp(-s_i) / sum_j z_j exp(-s_j),
/// evaluated with a subtract-the-min shift so large |s| cannot overflow.
Eigen::VectorXd entropy_prox(const Eigen::VectorXd& z, const Eigen::VectorXd& s);

/// Entropy prox anchored at the uniform center: a stable softmax(-s).
Eigen::VectorXd entropy_prox_from_center(const Eigen::VectorXd& s);

/// A prox geometry: norm, distance-generating function with its center and
/// a diameter bound D >= sup_Q d, Bregman distance, and the closed-form
/// prox-mapping. The solver is generic over this interface.
class ProxSetup {
 public:
  virtual ~ProxSetup() = default;

  virtual int dim() const = 0;
  virtual const Eigen::VectorXd& center() const = 0;
  /// D with d(x) <= D for all feasible x.
  virtual double diameter_bound() const = 0;
  /// d(x), normalized so that d(center) = 0.
  virtual double dgf(const Eigen::VectorXd& x) const = 0;
  /// V_z(x) = d(x) - d(z) - <d'(z), x - z>.
  virtual double bregman(const Eigen::VectorXd& z, const Eigen::VectorXd& x) const = 0;
  /// argmin_x { <s, x - z> + V_z(x) }.
  virtual Eigen::VectorXd prox(const Eigen::VectorXd& z, const Eigen::VectorXd& s) const = 0;
  /// argmin_x { <s, x> + d(x) }; equals prox(center, s) up to a constant shift.
  virtual Eigen::VectorXd prox_from_center(const Eigen::VectorXd& s) const = 0;
  /// prox(prox_from_center(a), w). Setups whose prox composes in closed form
  /// override this to avoid routing through an anchor whose coordinates may
  /// have underflowed.
  virtual Eigen::VectorXd prox_composed(const Eigen::VectorXd& a,
                                        const Eigen::VectorXd& w) const {
    return prox(prox_from_center(a), w);
  }
  /// The norm the setup is 1-strongly convex against.
  virtual double norm(const Eigen::VectorXd& v) const = 0;
  virtual bool contains(const Eigen::VectorXd& x, double tol) const = 0;
};

/// Probability simplex with the entropy DGF and the 1-norm. Center is the
/// uniform point, diameter bound ln(m).
class EntropySimplexSetup final : public ProxSetup {
 public:
  explicit EntropySimplexSetup(int m);

  int dim() const override { return m_; }
  const Eigen::VectorXd& center() const override { return center_; }
  double diameter_bound() const override { return diameter_; }
  double dgf(const Eigen::VectorXd& x) const override;
  double bregman(const Eigen::VectorXd& z, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(const Eigen::VectorXd& z, const Eigen::VectorXd& s) const override;
  Eigen::VectorXd prox_from_center(const Eigen::VectorXd& s) const override;
  // The entropy prox composes exactly in the exponent: the anchor
  // softmax(-a) followed by linear term w is softmax(-(a + w)).
  Eigen::VectorXd prox_composed(const Eigen::VectorXd& a,
                                const Eigen::VectorXd& w) const override {
    return entropy_prox_from_center(a + w);
  }
  double norm(const Eigen::VectorXd& v) const override { return v.cwiseAbs().sum(); }
  bool contains(const Eigen::VectorXd& x, double tol) const override;

 private:
  int m_;
  Eigen::VectorXd center_;
  double diameter_;
};

}  // namespace afom
