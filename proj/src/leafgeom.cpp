#include "geodissip/leafgeom.hpp"

#include <cmath>

namespace geodissip {

namespace {

/// Conserved-field data only (no target column).
PointData conserved_data(const ControlProblem& p, const ChartPoint& x) {
  return point_data(p.metric(), p.conserved(), x);
}

void require_regular(const Eigen::MatrixXd& gram, const char* what) {
  if (std::abs(det_lu(gram)) <= epsilon_reg(gram)) {
    throw DegenerateGram(std::string(what) +
                         ": irregular point of the conserved map");
  }
}

}  // namespace

Eigen::MatrixXd tensor_T(const ControlProblem& p, const ChartPoint& x) {
  const PointData data = conserved_data(p, x);
  const int n = p.dim();
  const int k = p.k();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      const double sign = ((i + j + 1) % 2 == 0) ? 1.0 : -1.0;
      const double minor =
          det_lu(detail::drop_row_col(data.gram, i - 1, j - 1));
      T += sign * minor * data.gradients.col(i - 1) *
           data.gradients.col(j - 1).transpose();
    }
  }
  T += det_lu(data.gram) * data.frame.inverse();
  return T;
}

TangentVector v0_via_T(const ControlProblem& p, const ChartPoint& x) {
  return TangentVector(tensor_T(p, x) * p.target().partials(x));
}

Eigen::MatrixXd projector(const ControlProblem& p, const ChartPoint& x) {
  const PointData data = conserved_data(p, x);
  require_regular(data.gram, "projector");
  const int n = p.dim();
  // I - A (A^T g A)^{-1} A^T g, with A^T g = partials^T.
  const Eigen::MatrixXd coeffs =
      data.gram.ldlt().solve(data.partials.transpose());
  return Eigen::MatrixXd::Identity(n, n) - data.gradients * coeffs;
}

TangentVector v0_via_projection(const ControlProblem& p, const ChartPoint& x) {
  const PointData data = conserved_data(p, x);
  require_regular(data.gram, "v0_via_projection");
  const TangentVector grad_G = gradient(data.frame, p.target(), x);
  const Eigen::VectorXd coeffs =
      data.gram.ldlt().solve(data.partials.transpose() * grad_G.components);
  return TangentVector(det_lu(data.gram) *
                       (grad_G.components - data.gradients * coeffs));
}

LeafChart::LeafChart(int leaf_dim, int ambient_dim, Embedding embed)
    : leaf_dim_(leaf_dim), ambient_dim_(ambient_dim), embed_(std::move(embed)) {
  if (leaf_dim_ <= 0 || ambient_dim_ <= leaf_dim_) {
    throw InvalidParameter("leaf chart dimensions out of range");
  }
  if (!embed_) throw InvalidParameter("leaf chart needs an embedding");
}

LeafChart::LeafChart(int leaf_dim, int ambient_dim, Embedding embed,
                     Basis basis)
    : LeafChart(leaf_dim, ambient_dim, std::move(embed)) {
  basis_ = std::move(basis);
}

LeafChart& LeafChart::with_domain(Domain domain) {
  domain_ = std::move(domain);
  return *this;
}

bool LeafChart::in_domain(const Eigen::VectorXd& y) const {
  return !domain_ || domain_(y);
}

ChartPoint LeafChart::embed(const Eigen::VectorXd& y) const {
  if (y.size() != leaf_dim_) {
    throw DimensionMismatch("leaf chart: wrong leaf-coordinate dimension");
  }
  ChartPoint x = embed_(y);
  if (x.dim() != ambient_dim_) {
    throw DimensionMismatch("leaf chart: embedding returned wrong dimension");
  }
  return x;
}

Eigen::MatrixXd LeafChart::basis(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd B;
  if (basis_) {
    B = basis_(y);
    if (B.rows() != ambient_dim_ || B.cols() != leaf_dim_) {
      throw DimensionMismatch("leaf chart: basis has wrong shape");
    }
  } else {
    // Central-difference Jacobian of the embedding.
    B.resize(ambient_dim_, leaf_dim_);
    Eigen::VectorXd probe = y;
    for (int a = 0; a < leaf_dim_; ++a) {
      const double h = fd_step(y(a));
      probe(a) = y(a) + h;
      const Eigen::VectorXd xp = embed_(probe).coords;
      probe(a) = y(a) - h;
      const Eigen::VectorXd xm = embed_(probe).coords;
      probe(a) = y(a);
      B.col(a) = (xp - xm) / (2.0 * h);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-8 * sv(0)) {
    throw DegenerateChart("leaf chart basis columns are numerically dependent");
  }
  return B;
}

Eigen::MatrixXd leaf_metric(const ControlProblem& p, const LeafChart& chart,
                            const Eigen::VectorXd& y) {
  const ChartPoint x = chart.embed(y);
  const PointData data = point_data(p.metric(), p.conserved(), x);
  require_regular(data.gram, "leaf_metric");
  const Eigen::MatrixXd B = chart.basis(y);
  return (B.transpose() * data.frame.matrix() * B) / det_lu(data.gram);
}

LeafGradientReport leaf_gradient_check(const ControlProblem& p,
                                       const LeafChart& chart,
                                       const Eigen::VectorXd& y) {
  const int m = chart.leaf_dim();
  const ChartPoint x = chart.embed(y);
  const Eigen::MatrixXd tau = leaf_metric(p, chart, y);

  // Leaf partials of the restricted target by central differences.
  Eigen::VectorXd partials(m);
  Eigen::VectorXd probe = y;
  for (int a = 0; a < m; ++a) {
    const double h = fd_step(y(a));
    probe(a) = y(a) + h;
    const double gp = p.target().value(chart.embed(probe));
    probe(a) = y(a) - h;
    const double gm = p.target().value(chart.embed(probe));
    probe(a) = y(a);
    partials(a) = (gp - gm) / (2.0 * h);
  }

  LeafGradientReport report;
  report.gradient_components = tau.ldlt().solve(partials);
  const Eigen::MatrixXd B = chart.basis(y);
  report.pushforward = TangentVector(B * report.gradient_components);
  report.v0_ambient = v0(p, x);
  report.v0_components =
      B.colPivHouseholderQr().solve(report.v0_ambient.components);

  const double scale = std::max(report.v0_ambient.components.cwiseAbs().maxCoeff(),
                                report.pushforward.components.cwiseAbs().maxCoeff());
  const double dev =
      (report.pushforward.components - report.v0_ambient.components)
          .cwiseAbs()
          .maxCoeff();
  report.max_rel_deviation = dev / std::max(scale, 1e-30);
  return report;
}

RescaleReport dependent_rescale_check(const ControlProblem& original,
                                      const ControlProblem& reparametrized,
                                      double jacobian_det, const ChartPoint& x) {
  if (original.k() != reparametrized.k() ||
      original.dim() != reparametrized.dim()) {
    throw DimensionMismatch(
        "dependent_rescale_check: problems of different shape");
  }
  RescaleReport report;
  report.factor = jacobian_det * jacobian_det;

  const double det_F =
      det_lu(point_data(original.metric(), original.conserved(), x).gram);
  const double det_H = det_lu(
      point_data(reparametrized.metric(), reparametrized.conserved(), x).gram);
  report.det_rel_error = std::abs(det_H - report.factor * det_F) /
                         std::max(std::abs(det_H), 1e-30);

  const TangentVector v_F = v0(original, x);
  const TangentVector v_H = v0(reparametrized, x);
  const double scale =
      std::max(v_H.components.cwiseAbs().maxCoeff(),
               report.factor * v_F.components.cwiseAbs().maxCoeff());
  report.v0_rel_error =
      (v_H.components - report.factor * v_F.components).cwiseAbs().maxCoeff() /
      std::max(scale, 1e-30);
  return report;
}

}  // namespace geodissip
