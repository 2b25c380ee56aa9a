#pragma once

#include "geodissip/control.hpp"

namespace geodissip {

/// Contravariant components of the symmetric 2-tensor built from the
/// conserved fields: signed (k-1)-minor combinations of gradient dyads plus
/// the conserved-Gram determinant times the inverse metric. Annihilates every
/// dF_s; scales the inverse metric on tangential one-forms.
Eigen::MatrixXd tensor_T(const ControlProblem& p, const ChartPoint& x);

/// Interior product of the target differential with the tensor: T * dG.
TangentVector v0_via_T(const ControlProblem& p, const ChartPoint& x);

/// Orthogonal projection of the tangent space onto the leaf tangent along the
/// span of the conserved gradients: I - A (A^T g A)^{-1} A^T g with
/// A = [grad F_1 .. grad F_k]. Requires a regular point of (F_1..F_k).
Eigen::MatrixXd projector(const ControlProblem& p, const ChartPoint& x);

/// Scaled-projection route: det of the conserved Gram matrix times the
/// projected target gradient.
TangentVector v0_via_projection(const ControlProblem& p, const ChartPoint& x);

/// Explicit parametrization of a regular leaf: leaf coordinates -> chart
/// point, with the pushforward of the coordinate frame as tangent basis.
/// When no basis provider is given, the embedding Jacobian is approximated
/// by central differences.
class LeafChart {
 public:
  using Embedding = std::function<ChartPoint(const Eigen::VectorXd&)>;
  using Basis = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using Domain = std::function<bool(const Eigen::VectorXd&)>;

  LeafChart(int leaf_dim, int ambient_dim, Embedding embed);
  LeafChart(int leaf_dim, int ambient_dim, Embedding embed, Basis basis);

  LeafChart& with_domain(Domain domain);

  int leaf_dim() const { return leaf_dim_; }
  int ambient_dim() const { return ambient_dim_; }

  bool in_domain(const Eigen::VectorXd& y) const;
  ChartPoint embed(const Eigen::VectorXd& y) const;
  /// n x m matrix of tangent-basis columns; throws DegenerateChart when the
  /// columns are numerically dependent.
  Eigen::MatrixXd basis(const Eigen::VectorXd& y) const;

 private:
  int leaf_dim_ = 0;
  int ambient_dim_ = 0;
  Embedding embed_;
  Basis basis_;
  Domain domain_;
};

/// Leaf metric at a leaf point: the induced first fundamental form divided by
/// the conserved-Gram determinant.
Eigen::MatrixXd leaf_metric(const ControlProblem& p, const LeafChart& chart,
                            const Eigen::VectorXd& y);

struct LeafGradientReport {
  /// Leaf-coordinate components of the leaf-metric gradient of the restricted
  /// target (finite-difference leaf partials).
  Eigen::VectorXd gradient_components;
  /// Leaf-coordinate components of the ambient control field, recovered by
  /// least squares against the basis columns.
  Eigen::VectorXd v0_components;
  TangentVector pushforward;
  TangentVector v0_ambient;
  double max_rel_deviation = 0.0;
};

/// Computes the leaf gradient of the restricted target, pushes it forward,
/// and compares with the ambient standard control vector field.
LeafGradientReport leaf_gradient_check(const ControlProblem& p,
                                       const LeafChart& chart,
                                       const Eigen::VectorXd& y);

struct RescaleReport {
  double factor = 0.0;          // squared Jacobian determinant
  double det_rel_error = 0.0;   // conserved-Gram determinant scaling
  double v0_rel_error = 0.0;    // control-field scaling
  bool pass(double tol) const {
    return det_rel_error <= tol && v0_rel_error <= tol;
  }
};

/// Verifies the functional-dependence scaling law: replacing the conserved
/// set by an invertible reparametrization with Jacobian determinant d
/// multiplies both the conserved-Gram determinant and the control field
/// by d^2.
RescaleReport dependent_rescale_check(const ControlProblem& original,
                                      const ControlProblem& reparametrized,
                                      double jacobian_det, const ChartPoint& x);

}  // namespace geodissip
