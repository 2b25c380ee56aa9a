#pragma once

#include "geodissip/leafgeom.hpp"

namespace geodissip {

namespace fields {

/// 1/2 ||x||^2 on R^n.
ScalarField half_norm_squared(int dim);
/// x_i (1-based index).
ScalarField coordinate(int dim, int index);
/// b . x.
ScalarField linear(Eigen::VectorXd b);
/// 1/2 sum x_i^2 / I_i.
ScalarField inertia_energy(Eigen::VectorXd inertia);
/// s * ||x||; undefined at the origin.
ScalarField scaled_norm(int dim, double scale);

}  // namespace fields

/// Sign bookkeeping: the control construction always grows its target, so
/// each model states which physical quantity that corresponds to and in
/// which direction it moves.
struct DissipationConvention {
  const char* target;
  const char* physical;
  bool physical_increases;
};

/// Damped spin precession on R^3 minus the origin. The conserved field is
/// sqrt(2 lambda/gamma C0), the dissipated one the negated Hamiltonian, so
/// the damping term is exactly the standard control vector field.
class LandauLifschitzModel {
 public:
  LandauLifschitzModel(double gamma, double lambda, ScalarField hamiltonian);
  /// H(M) = b . M (constant magnetic field).
  static LandauLifschitzModel constant_field(double gamma, double lambda,
                                             Eigen::Vector3d b);

  double gamma() const { return gamma_; }
  double lambda() const { return lambda_; }
  const ScalarField& hamiltonian() const { return hamiltonian_; }

  ScalarField conserved() const;  // sqrt(lambda/gamma) ||M||
  ScalarField target() const;     // -H
  ControlProblem control_problem() const;
  /// The grown target is -H: the physical energy decreases.
  static constexpr DissipationConvention convention() {
    return {"-H", "H", false};
  }

  /// Precession part M x grad H.
  TangentVector base_field(const ChartPoint& M) const;
  /// Damping part; coincides with the standard control vector field.
  TangentVector perturbation(const ChartPoint& M) const;
  /// Full right-hand side: precession plus damping.
  TangentVector full_field(const ChartPoint& M) const;

  /// Spherical chart of the leaf ||M|| = sqrt(gamma/lambda) c; poles excluded.
  LeafChart leaf_chart(double c) const;
  double leaf_radius(double c) const;

 private:
  double gamma_ = 1.0;
  double lambda_ = 1.0;
  ScalarField hamiltonian_;
};

/// Euler equations of the free rigid body with Morrison's cubic dissipation.
/// Conserves the Hamiltonian, dissipates the Casimir.
class RigidBodyModel {
 public:
  /// Principal moments of inertia, strictly ordered I1 > I2 > I3 > 0.
  RigidBodyModel(double I1, double I2, double I3);
  /// Axisymmetric body I1 = I2 > I3 > 0.
  static RigidBodyModel axisymmetric(double I12, double I3);

  double I1() const { return inertia_(0); }
  double I2() const { return inertia_(1); }
  double I3() const { return inertia_(2); }

  ScalarField hamiltonian() const;
  const ScalarField& casimir() const { return casimir_; }
  RigidBodyModel& with_casimir(ScalarField C);

  ControlProblem control_problem() const;  // conserves H, dissipates C
  /// The Casimir itself is the grown target.
  static constexpr DissipationConvention convention() {
    return {"C", "C", true};
  }

  /// Euler right-hand side.
  TangentVector base_field(const ChartPoint& x) const;
  /// Morrison's dissipation matrix [h^{ij}].
  Eigen::Matrix3d morrison_matrix(const ChartPoint& x) const;
  /// Morrison dissipation [h^{ij}] grad C.
  TangentVector dissipation(const ChartPoint& x) const;
  /// Euler plus Morrison dissipation.
  TangentVector full_field(const ChartPoint& x) const;

  /// Ellipsoid chart of the leaf H = c; poles excluded.
  LeafChart leaf_chart(double c) const;

 private:
  RigidBodyModel(Eigen::Vector3d inertia, bool axisymmetric);

  Eigen::Vector3d inertia_;
  ScalarField casimir_;
};

}  // namespace geodissip
