#pragma once

#include <optional>

#include "geodissip/gram.hpp"

namespace geodissip {

/// The data of the control construction: metric, ordered conserved fields
/// F_1..F_k, target G, optional rate h, optional transverse part w and
/// optional prolonged quotient q. Immutable after construction.
class ControlProblem {
 public:
  using VectorProvider = std::function<TangentVector(const ChartPoint&)>;
  using ScalarProvider = std::function<double(const ChartPoint&)>;

  ControlProblem(MetricField metric, std::vector<ScalarField> conserved,
                 ScalarField target);

  ControlProblem& with_rate(ScalarField h);
  /// Transverse part w. With validate set, every control_field evaluation
  /// checks that w is orthogonal to all constraint and target gradients
  /// (relative 1e-9) and throws InvalidParameter otherwise.
  ControlProblem& with_transverse(VectorProvider w, bool validate = false);
  /// Continuous prolongation of h / det Sigma; used by control_field when set.
  ControlProblem& with_prolonged_quotient(ScalarProvider q);

  int dim() const { return metric_.dim(); }
  int k() const { return static_cast<int>(conserved_.size()); }

  const MetricField& metric() const { return metric_; }
  const std::vector<ScalarField>& conserved() const { return conserved_; }
  const ScalarField& target() const { return target_; }
  const std::optional<ScalarField>& rate() const { return rate_; }
  const VectorProvider& transverse() const { return transverse_; }
  const ScalarProvider& prolonged_quotient() const { return q_; }

  /// Gradients and Gram matrix over (F_1..F_k, G) at one point.
  PointData data_at(const ChartPoint& x) const;

 private:
  MetricField metric_;
  std::vector<ScalarField> conserved_;
  ScalarField target_;
  std::optional<ScalarField> rate_;
  VectorProvider transverse_;
  bool validate_transverse_ = false;
  ScalarProvider q_;

  friend TangentVector control_field(const ControlProblem&, const ChartPoint&);
};

/// The standard control vector field: the cofactor combination of conserved
/// gradients plus the conserved-Gram determinant times the target gradient.
/// Polynomial in the Gram entries, defined at every point.
TangentVector v0(const ControlProblem& p, const ChartPoint& x);

/// Same, reusing precomputed point data over (F_1..F_k, G).
TangentVector v0_from_data(const PointData& data);

/// Control field realizing the prescribed rate: q * v0 + w with
/// q = h / det Sigma (or the supplied prolongation). Throws DegenerateGram
/// outside the regular set when no prolongation is given; MissingRate when
/// neither rate nor prolongation is set.
TangentVector control_field(const ControlProblem& p, const ChartPoint& x);

/// Lie derivative of the target along v: dG(v).
double rate_along(const ControlProblem& p, const ChartPoint& x,
                  const TangentVector& v);

/// det of the full Gram matrix over (F_1..F_k, G) at x.
double det_sigma_full(const ControlProblem& p, const ChartPoint& x);

}  // namespace geodissip
