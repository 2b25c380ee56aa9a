#include "geodissip/chart.hpp"

#include <cmath>

namespace geodissip {

namespace {

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " +
                            std::to_string(expected) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace

MetricField::MetricField(int dim, Evaluator eval)
    : dim_(dim), eval_(std::move(eval)) {
  if (dim_ <= 0) throw InvalidParameter("metric dimension must be positive");
  if (!eval_) throw InvalidParameter("metric evaluator must be set");
}

MetricField MetricField::euclidean(int dim) {
  return MetricField(dim, [dim](const ChartPoint&) {
    return Eigen::MatrixXd::Identity(dim, dim);
  });
}

MetricField MetricField::diagonal(Eigen::VectorXd diag) {
  const int n = static_cast<int>(diag.size());
  return MetricField(n, [d = std::move(diag)](const ChartPoint&) {
    return Eigen::MatrixXd(d.asDiagonal());
  });
}

MetricField MetricField::constant(Eigen::MatrixXd g) {
  if (g.rows() != g.cols()) {
    throw DimensionMismatch("constant metric matrix must be square");
  }
  const int n = static_cast<int>(g.rows());
  return MetricField(n, [m = std::move(g)](const ChartPoint&) { return m; });
}

Eigen::MatrixXd MetricField::operator()(const ChartPoint& x) const {
  require_dim(dim_, x.dim(), "metric evaluation point");
  Eigen::MatrixXd g = eval_(x);
  if (g.rows() != dim_ || g.cols() != dim_) {
    throw DimensionMismatch("metric evaluator returned a matrix of wrong size");
  }
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SingularMetric("metric matrix is not symmetric");
  }
  return g;
}

MetricFrame::MetricFrame(const MetricField& g, const ChartPoint& x) : g_(g(x)) {
  factor();
}

MetricFrame::MetricFrame(Eigen::MatrixXd g_at_x) : g_(std::move(g_at_x)) {
  if (g_.rows() != g_.cols()) {
    throw DimensionMismatch("metric matrix must be square");
  }
  factor();
}

void MetricFrame::factor() {
  llt_.compute(g_);
  if (llt_.info() == Eigen::Success) {
    use_llt_ = true;
    return;
  }
  lu_.emplace(g_);
  if (!lu_->isInvertible()) {
    throw SingularMetric("metric factorization failed: matrix is singular");
  }
}

Eigen::VectorXd MetricFrame::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != g_.rows()) {
    throw DimensionMismatch("metric solve: right-hand side size mismatch");
  }
  return use_llt_ ? Eigen::VectorXd(llt_.solve(rhs))
                  : Eigen::VectorXd(lu_->solve(rhs));
}

Eigen::MatrixXd MetricFrame::solve(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != g_.rows()) {
    throw DimensionMismatch("metric solve: right-hand side size mismatch");
  }
  return use_llt_ ? Eigen::MatrixXd(llt_.solve(rhs))
                  : Eigen::MatrixXd(lu_->solve(rhs));
}

Eigen::MatrixXd MetricFrame::inverse() const {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g_.rows(), g_.cols());
  return solve(id);
}

double MetricFrame::det() const {
  if (use_llt_) {
    const Eigen::MatrixXd L = llt_.matrixL();
    double d = 1.0;
    for (int i = 0; i < L.rows(); ++i) d *= L(i, i);
    return d * d;
  }
  return lu_->determinant();
}

double MetricFrame::sqrt_det() const {
  const double d = det();
  if (!(d > 0.0)) {
    throw SingularMetric("metric determinant is not positive");
  }
  return std::sqrt(d);
}

ScalarField::ScalarField(int dim, Value value)
    : dim_(dim), value_(std::move(value)) {
  if (dim_ <= 0) throw InvalidParameter("field dimension must be positive");
  if (!value_) throw InvalidParameter("field evaluator must be set");
}

ScalarField::ScalarField(int dim, Value value, Partials partials)
    : ScalarField(dim, std::move(value)) {
  partials_ = std::move(partials);
}

double ScalarField::value(const ChartPoint& x) const {
  require_dim(dim_, x.dim(), "scalar field evaluation point");
  return value_(x);
}

Eigen::VectorXd ScalarField::partials(const ChartPoint& x) const {
  require_dim(dim_, x.dim(), "scalar field evaluation point");
  if (partials_) {
    Eigen::VectorXd p = partials_(x);
    if (p.size() != dim_) {
      throw DimensionMismatch("analytic partials returned wrong length");
    }
    return p;
  }
  return fd_partials(x);
}

Eigen::VectorXd ScalarField::fd_partials(const ChartPoint& x) const {
  require_dim(dim_, x.dim(), "scalar field evaluation point");
  Eigen::VectorXd p(dim_);
  ChartPoint probe = x;
  for (int a = 0; a < dim_; ++a) {
    const double h = fd_step(x.coords(a));
    probe.coords(a) = x.coords(a) + h;
    const double fp = value_(probe);
    probe.coords(a) = x.coords(a) - h;
    const double fm = value_(probe);
    probe.coords(a) = x.coords(a);
    p(a) = (fp - fm) / (2.0 * h);
  }
  return p;
}

ScalarField linear_combination(const std::vector<double>& weights,
                               const std::vector<ScalarField>& fields,
                               double constant) {
  if (weights.size() != fields.size() || fields.empty()) {
    throw DimensionMismatch("linear_combination: weights and fields mismatch");
  }
  const int n = fields.front().dim();
  for (const auto& f : fields) {
    if (f.dim() != n) {
      throw DimensionMismatch("linear_combination: field dimensions differ");
    }
  }
  bool analytic = true;
  for (const auto& f : fields) analytic = analytic && f.has_analytic_partials();

  auto value = [weights, fields, constant](const ChartPoint& x) {
    double v = constant;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      v += weights[i] * fields[i].value(x);
    }
    return v;
  };
  if (!analytic) return ScalarField(n, value);

  auto partials = [weights, fields, n](const ChartPoint& x) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      p += weights[i] * fields[i].partials(x);
    }
    return p;
  };
  return ScalarField(n, value, partials);
}

TangentVector gradient(const MetricField& g, const ScalarField& F,
                       const ChartPoint& x) {
  require_dim(g.dim(), F.dim(), "gradient field");
  return gradient(MetricFrame(g, x), F, x);
}

TangentVector gradient(const MetricFrame& frame, const ScalarField& F,
                       const ChartPoint& x) {
  require_dim(frame.dim(), F.dim(), "gradient field");
  return TangentVector(frame.solve(F.partials(x)));
}

double inner(const MetricField& g, const ChartPoint& x, const TangentVector& u,
             const TangentVector& v) {
  require_dim(g.dim(), u.dim(), "inner product left argument");
  require_dim(g.dim(), v.dim(), "inner product right argument");
  return u.components.dot(g(x) * v.components);
}

PartialsReport check_partials(const ScalarField& F, const ChartPoint& x) {
  if (!F.has_analytic_partials()) {
    throw InvalidParameter("check_partials requires analytic partials");
  }
  PartialsReport report;
  report.analytic = F.partials(x);
  report.finite_difference = F.fd_partials(x);
  report.pass = true;
  for (int a = 0; a < F.dim(); ++a) {
    const double pa = report.analytic(a);
    const double pf = report.finite_difference(a);
    const double diff = std::abs(pa - pf);
    const double denom = std::max(std::abs(pa), std::abs(pf));
    report.max_rel_error =
        std::max(report.max_rel_error, diff / std::max(denom, 1e-8));
    if (diff > 1e-5 * denom + 1e-8) report.pass = false;
  }
  return report;
}

}  // namespace geodissip
