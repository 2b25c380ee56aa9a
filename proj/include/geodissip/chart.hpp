#pragma once

#include <Eigen/Dense>
#include <functional>
#include <initializer_list>
#include <optional>
#include <vector>

#include "geodissip/errors.hpp"

namespace geodissip {

/// Point of an n-dimensional coordinate chart.
struct ChartPoint {
  Eigen::VectorXd coords;

  ChartPoint() = default;
  explicit ChartPoint(Eigen::VectorXd c) : coords(std::move(c)) {}
  ChartPoint(std::initializer_list<double> c)
      : coords(Eigen::Map<const Eigen::VectorXd>(c.begin(),
                                                 static_cast<long>(c.size()))) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords(i); }
  bool all_finite() const { return coords.allFinite(); }
};

/// Tangent vector given by its contravariant components.
struct TangentVector {
  Eigen::VectorXd components;

  TangentVector() = default;
  explicit TangentVector(Eigen::VectorXd c) : components(std::move(c)) {}
  TangentVector(std::initializer_list<double> c)
      : components(Eigen::Map<const Eigen::VectorXd>(
            c.begin(), static_cast<long>(c.size()))) {}

  int dim() const { return static_cast<int>(components.size()); }
  double operator[](int i) const { return components(i); }
  bool all_finite() const { return components.allFinite(); }
  double norm() const { return components.norm(); }
};

inline TangentVector operator+(const TangentVector& a, const TangentVector& b) {
  return TangentVector(a.components + b.components);
}
inline TangentVector operator*(double s, const TangentVector& v) {
  return TangentVector(s * v.components);
}

/// Central-difference step for one coordinate.
inline double fd_step(double coord) {
  return std::max(1e-6, 1e-6 * std::abs(coord));
}

/// Riemannian metric on a chart: point -> symmetric positive-definite matrix.
class MetricField {
 public:
  using Evaluator = std::function<Eigen::MatrixXd(const ChartPoint&)>;

  MetricField(int dim, Evaluator eval);

  static MetricField euclidean(int dim);
  static MetricField diagonal(Eigen::VectorXd diag);
  static MetricField constant(Eigen::MatrixXd g);

  int dim() const { return dim_; }

  /// Evaluates the components g_ij; checks shape and symmetry.
  Eigen::MatrixXd operator()(const ChartPoint& x) const;

 private:
  int dim_ = 0;
  Evaluator eval_;
};

/// Metric factored at one point. Cholesky is attempted first, full-pivot LU
/// is the fallback; positive definiteness is only checked through the
/// factorization itself.
class MetricFrame {
 public:
  MetricFrame(const MetricField& g, const ChartPoint& x);
  explicit MetricFrame(Eigen::MatrixXd g_at_x);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& matrix() const { return g_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::MatrixXd inverse() const;
  double det() const;
  /// sqrt(det g); throws SingularMetric when det g <= 0.
  double sqrt_det() const;

 private:
  void factor();

  Eigen::MatrixXd g_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::optional<Eigen::FullPivLU<Eigen::MatrixXd>> lu_;
  bool use_llt_ = false;
};

/// Smooth scalar function on the chart with partial-derivative coefficients,
/// analytic when supplied, central finite differences otherwise.
class ScalarField {
 public:
  using Value = std::function<double(const ChartPoint&)>;
  using Partials = std::function<Eigen::VectorXd(const ChartPoint&)>;

  ScalarField(int dim, Value value);
  ScalarField(int dim, Value value, Partials partials);

  int dim() const { return dim_; }
  bool has_analytic_partials() const { return static_cast<bool>(partials_); }

  double value(const ChartPoint& x) const;
  /// Coefficients dF/dx^a; analytic if available, else finite differences.
  Eigen::VectorXd partials(const ChartPoint& x) const;
  /// Central finite differences of value(), regardless of analytic partials.
  Eigen::VectorXd fd_partials(const ChartPoint& x) const;

 private:
  int dim_ = 0;
  Value value_;
  Partials partials_;
};

/// a1*F1 + ... + am*Fm + c0, with chain-rule partials when every term has
/// analytic ones.
ScalarField linear_combination(const std::vector<double>& weights,
                               const std::vector<ScalarField>& fields,
                               double constant = 0.0);

/// Gradient vector field at a point: g^{aj} dF/dx^a.
TangentVector gradient(const MetricField& g, const ScalarField& F,
                       const ChartPoint& x);
TangentVector gradient(const MetricFrame& frame, const ScalarField& F,
                       const ChartPoint& x);

/// Scalar product generated by the metric: u^T g(x) v.
double inner(const MetricField& g, const ChartPoint& x, const TangentVector& u,
             const TangentVector& v);

struct PartialsReport {
  double max_rel_error = 0.0;
  bool pass = false;
  Eigen::VectorXd analytic;
  Eigen::VectorXd finite_difference;
};

/// Compares analytic partials against central finite differences.
/// Relative tolerance 1e-5 with a 1e-8 absolute floor for near-zero entries.
PartialsReport check_partials(const ScalarField& F, const ChartPoint& x);

}  // namespace geodissip
