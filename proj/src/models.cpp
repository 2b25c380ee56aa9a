#include "geodissip/models.hpp"

#include <cmath>

namespace geodissip {

namespace {

constexpr double kPoleExclusion = 1e-6;

void require_off_origin(const ChartPoint& M) {
  if (M.coords.squaredNorm() == 0.0) {
    throw OriginExcluded("evaluation at the excluded origin");
  }
}

}  // namespace

namespace fields {

ScalarField half_norm_squared(int dim) {
  return ScalarField(
      dim, [](const ChartPoint& x) { return 0.5 * x.coords.squaredNorm(); },
      [](const ChartPoint& x) { return x.coords; });
}

ScalarField coordinate(int dim, int index) {
  if (index < 1 || index > dim) {
    throw InvalidParameter("coordinate field index out of range");
  }
  return ScalarField(
      dim, [index](const ChartPoint& x) { return x.coords(index - 1); },
      [dim, index](const ChartPoint&) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
        p(index - 1) = 1.0;
        return p;
      });
}

ScalarField linear(Eigen::VectorXd b) {
  const int n = static_cast<int>(b.size());
  return ScalarField(
      n, [b](const ChartPoint& x) { return b.dot(x.coords); },
      [b](const ChartPoint&) { return b; });
}

ScalarField inertia_energy(Eigen::VectorXd inertia) {
  const int n = static_cast<int>(inertia.size());
  for (int i = 0; i < n; ++i) {
    if (!(inertia(i) > 0.0)) {
      throw InvalidParameter("inertia entries must be positive");
    }
  }
  return ScalarField(
      n,
      [inertia](const ChartPoint& x) {
        return 0.5 * x.coords.cwiseQuotient(inertia).dot(x.coords);
      },
      [inertia](const ChartPoint& x) {
        return Eigen::VectorXd(x.coords.cwiseQuotient(inertia));
      });
}

ScalarField scaled_norm(int dim, double scale) {
  return ScalarField(
      dim,
      [scale](const ChartPoint& x) {
        require_off_origin(x);
        return scale * x.coords.norm();
      },
      [scale](const ChartPoint& x) {
        require_off_origin(x);
        return Eigen::VectorXd(scale * x.coords / x.coords.norm());
      });
}

}  // namespace fields

LandauLifschitzModel::LandauLifschitzModel(double gamma, double lambda,
                                           ScalarField hamiltonian)
    : gamma_(gamma), lambda_(lambda), hamiltonian_(std::move(hamiltonian)) {
  if (!(gamma_ > 0.0)) throw InvalidParameter("gamma must be positive");
  if (!(lambda_ / gamma_ > 0.0)) {
    throw InvalidParameter("lambda/gamma must be positive");
  }
  if (hamiltonian_.dim() != 3) {
    throw DimensionMismatch("Landau-Lifschitz Hamiltonian must live on R^3");
  }
}

LandauLifschitzModel LandauLifschitzModel::constant_field(double gamma,
                                                          double lambda,
                                                          Eigen::Vector3d b) {
  return LandauLifschitzModel(gamma, lambda, fields::linear(b));
}

ScalarField LandauLifschitzModel::conserved() const {
  return fields::scaled_norm(3, std::sqrt(lambda_ / gamma_));
}

ScalarField LandauLifschitzModel::target() const {
  return linear_combination({-1.0}, {hamiltonian_});
}

ControlProblem LandauLifschitzModel::control_problem() const {
  return ControlProblem(MetricField::euclidean(3), {conserved()}, target());
}

TangentVector LandauLifschitzModel::base_field(const ChartPoint& M) const {
  require_off_origin(M);
  const Eigen::Vector3d m = M.coords;
  const Eigen::Vector3d gradH = hamiltonian_.partials(M);
  return TangentVector(m.cross(gradH));
}

TangentVector LandauLifschitzModel::perturbation(const ChartPoint& M) const {
  require_off_origin(M);
  const Eigen::Vector3d m = M.coords;
  const Eigen::Vector3d gradH = hamiltonian_.partials(M);
  const double ratio = lambda_ / gamma_;
  return TangentVector(ratio / m.squaredNorm() * m.dot(gradH) * m -
                       ratio * gradH);
}

TangentVector LandauLifschitzModel::full_field(const ChartPoint& M) const {
  return base_field(M) + perturbation(M);
}

double LandauLifschitzModel::leaf_radius(double c) const {
  return std::sqrt(gamma_ / lambda_) * c;
}

LeafChart LandauLifschitzModel::leaf_chart(double c) const {
  if (!(c > 0.0)) throw InvalidLevel("leaf level must be positive");
  const double r = leaf_radius(c);
  auto embed = [r](const Eigen::VectorXd& y) {
    const double theta = y(0), phi = y(1);
    return ChartPoint{r * std::sin(theta) * std::cos(phi),
                      r * std::sin(theta) * std::sin(phi),
                      r * std::cos(theta)};
  };
  auto basis = [r](const Eigen::VectorXd& y) {
    const double theta = y(0), phi = y(1);
    Eigen::MatrixXd B(3, 2);
    B.col(0) << r * std::cos(theta) * std::cos(phi),
        r * std::cos(theta) * std::sin(phi), -r * std::sin(theta);
    B.col(1) << -r * std::sin(theta) * std::sin(phi),
        r * std::sin(theta) * std::cos(phi), 0.0;
    return B;
  };
  LeafChart chart(2, 3, embed, basis);
  chart.with_domain([](const Eigen::VectorXd& y) {
    return y(0) > kPoleExclusion && y(0) < M_PI - kPoleExclusion;
  });
  return chart;
}

RigidBodyModel::RigidBodyModel(Eigen::Vector3d inertia, bool axisymmetric)
    : inertia_(inertia), casimir_(fields::half_norm_squared(3)) {
  if (!(inertia_(2) > 0.0)) {
    throw InvalidParameter("moments of inertia must be positive");
  }
  if (axisymmetric) {
    if (!(inertia_(0) == inertia_(1) && inertia_(1) > inertia_(2))) {
      throw InvalidParameter("axisymmetric body requires I1 = I2 > I3");
    }
  } else if (!(inertia_(0) > inertia_(1) && inertia_(1) > inertia_(2))) {
    throw InvalidParameter("moments of inertia must satisfy I1 > I2 > I3");
  }
}

RigidBodyModel::RigidBodyModel(double I1, double I2, double I3)
    : RigidBodyModel(Eigen::Vector3d(I1, I2, I3), false) {}

RigidBodyModel RigidBodyModel::axisymmetric(double I12, double I3) {
  return RigidBodyModel(Eigen::Vector3d(I12, I12, I3), true);
}

ScalarField RigidBodyModel::hamiltonian() const {
  return fields::inertia_energy(inertia_);
}

RigidBodyModel& RigidBodyModel::with_casimir(ScalarField C) {
  if (C.dim() != 3) throw DimensionMismatch("Casimir must live on R^3");
  casimir_ = std::move(C);
  return *this;
}

ControlProblem RigidBodyModel::control_problem() const {
  return ControlProblem(MetricField::euclidean(3), {hamiltonian()}, casimir_);
}

TangentVector RigidBodyModel::base_field(const ChartPoint& x) const {
  if (x.dim() != 3) throw DimensionMismatch("rigid body state must be 3D");
  const double I1 = inertia_(0), I2 = inertia_(1), I3 = inertia_(2);
  return TangentVector{(1.0 / I3 - 1.0 / I2) * x[1] * x[2],
                       (1.0 / I1 - 1.0 / I3) * x[0] * x[2],
                       (1.0 / I2 - 1.0 / I1) * x[0] * x[1]};
}

Eigen::Matrix3d RigidBodyModel::morrison_matrix(const ChartPoint& x) const {
  if (x.dim() != 3) throw DimensionMismatch("rigid body state must be 3D");
  const double I1 = inertia_(0), I2 = inertia_(1), I3 = inertia_(2);
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  Eigen::Matrix3d h;
  h << x2 * x2 / (I2 * I2) + x3 * x3 / (I3 * I3), -x1 * x2 / (I1 * I2),
      -x1 * x3 / (I1 * I3),
      -x1 * x2 / (I1 * I2), x1 * x1 / (I1 * I1) + x3 * x3 / (I3 * I3),
      -x2 * x3 / (I2 * I3),
      -x1 * x3 / (I1 * I3), -x2 * x3 / (I2 * I3),
      x1 * x1 / (I1 * I1) + x2 * x2 / (I2 * I2);
  return h;
}

TangentVector RigidBodyModel::dissipation(const ChartPoint& x) const {
  return TangentVector(morrison_matrix(x) * casimir_.partials(x));
}

TangentVector RigidBodyModel::full_field(const ChartPoint& x) const {
  return base_field(x) + dissipation(x);
}

LeafChart RigidBodyModel::leaf_chart(double c) const {
  if (!(c > 0.0)) throw InvalidLevel("leaf level must be positive");
  const double r = std::sqrt(2.0 * c);
  const double s1 = std::sqrt(inertia_(0)), s2 = std::sqrt(inertia_(1)),
               s3 = std::sqrt(inertia_(2));
  auto embed = [r, s1, s2, s3](const Eigen::VectorXd& y) {
    const double theta = y(0), phi = y(1);
    return ChartPoint{r * s1 * std::sin(theta) * std::cos(phi),
                      r * s2 * std::sin(theta) * std::sin(phi),
                      r * s3 * std::cos(theta)};
  };
  auto basis = [r, s1, s2, s3](const Eigen::VectorXd& y) {
    const double theta = y(0), phi = y(1);
    Eigen::MatrixXd B(3, 2);
    B.col(0) << r * s1 * std::cos(theta) * std::cos(phi),
        r * s2 * std::cos(theta) * std::sin(phi), -r * s3 * std::sin(theta);
    B.col(1) << -r * s1 * std::sin(theta) * std::sin(phi),
        r * s2 * std::sin(theta) * std::cos(phi), 0.0;
    return B;
  };
  LeafChart chart(2, 3, embed, basis);
  chart.with_domain([](const Eigen::VectorXd& y) {
    return y(0) > kPoleExclusion && y(0) < M_PI - kPoleExclusion;
  });
  return chart;
}

}  // namespace geodissip
