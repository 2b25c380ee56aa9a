#include "geodissip/control.hpp"

#include <cmath>

namespace geodissip {

ControlProblem::ControlProblem(MetricField metric,
                               std::vector<ScalarField> conserved,
                               ScalarField target)
    : metric_(std::move(metric)),
      conserved_(std::move(conserved)),
      target_(std::move(target)) {
  if (conserved_.empty()) {
    throw InvalidParameter("control problem needs at least one conserved field");
  }
  for (const auto& f : conserved_) {
    if (f.dim() != metric_.dim()) {
      throw DimensionMismatch("conserved field dimension does not match metric");
    }
  }
  if (target_.dim() != metric_.dim()) {
    throw DimensionMismatch("target field dimension does not match metric");
  }
}

ControlProblem& ControlProblem::with_rate(ScalarField h) {
  if (h.dim() != metric_.dim()) {
    throw DimensionMismatch("rate field dimension does not match metric");
  }
  rate_ = std::move(h);
  return *this;
}

ControlProblem& ControlProblem::with_transverse(VectorProvider w,
                                                bool validate) {
  transverse_ = std::move(w);
  validate_transverse_ = validate;
  return *this;
}

ControlProblem& ControlProblem::with_prolonged_quotient(ScalarProvider q) {
  q_ = std::move(q);
  return *this;
}

PointData ControlProblem::data_at(const ChartPoint& x) const {
  std::vector<ScalarField> all = conserved_;
  all.push_back(target_);
  return point_data(metric_, all, x);
}

TangentVector v0_from_data(const PointData& data) {
  const int k = static_cast<int>(data.gram.rows()) - 1;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(data.gradients.rows());
  for (int i = 1; i <= k; ++i) {
    const double sign = ((i + k + 1) % 2 == 0) ? 1.0 : -1.0;
    v += sign * detail::hat_minor_det(data.gram, i - 1) *
         data.gradients.col(i - 1);
  }
  v += det_lu(data.gram.topLeftCorner(k, k)) * data.gradients.col(k);
  return TangentVector(std::move(v));
}

TangentVector v0(const ControlProblem& p, const ChartPoint& x) {
  if (x.dim() != p.dim()) {
    throw DimensionMismatch("v0: point dimension does not match problem");
  }
  return v0_from_data(p.data_at(x));
}

TangentVector control_field(const ControlProblem& p, const ChartPoint& x) {
  if (x.dim() != p.dim()) {
    throw DimensionMismatch("control_field: point dimension does not match problem");
  }
  const PointData data = p.data_at(x);
  double q;
  if (p.prolonged_quotient()) {
    q = p.prolonged_quotient()(x);
  } else if (p.rate()) {
    const double det_full = det_lu(data.gram);
    if (std::abs(det_full) <= epsilon_reg(data.gram)) {
      throw DegenerateGram(
          "control_field: point outside the regular set of the full Gram matrix",
          rank_diagnostic(data.gram));
    }
    q = p.rate()->value(x) / det_full;
  } else {
    throw MissingRate("control_field: no rate function or prolongation set");
  }
  TangentVector u = q * v0_from_data(data);
  if (p.transverse()) {
    const TangentVector w = p.transverse()(x);
    if (w.dim() != p.dim()) {
      throw DimensionMismatch("transverse field dimension does not match problem");
    }
    if (p.validate_transverse_) {
      const Eigen::MatrixXd& g_at = data.frame.matrix();
      const double w_norm =
          std::sqrt(std::max(w.components.dot(g_at * w.components), 0.0));
      for (int s = 0; s <= p.k(); ++s) {
        const Eigen::VectorXd grad = data.gradients.col(s);
        const double grad_norm = std::sqrt(std::max(grad.dot(g_at * grad), 0.0));
        if (std::abs(w.components.dot(g_at * grad)) >
            1e-9 * w_norm * grad_norm) {
          throw InvalidParameter(
              "transverse part is not orthogonal to the gradient span");
        }
      }
    }
    u = u + w;
  }
  return u;
}

double rate_along(const ControlProblem& p, const ChartPoint& x,
                  const TangentVector& v) {
  if (x.dim() != p.dim() || v.dim() != p.dim()) {
    throw DimensionMismatch("rate_along: dimension mismatch");
  }
  return p.target().partials(x).dot(v.components);
}

double det_sigma_full(const ControlProblem& p, const ChartPoint& x) {
  return det_lu(p.data_at(x).gram);
}

}  // namespace geodissip
