#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geodissip/instancegen.hpp"
#include "geodissip/models.hpp"

using namespace geodissip;

namespace {

ScalarField product_x1_x2() {
  return ScalarField(
      2, [](const ChartPoint& x) { return x[0] * x[1]; },
      [](const ChartPoint& x) {
        Eigen::VectorXd p(2);
        p << x[1], x[0];
        return p;
      });
}

}  // namespace

TEST_CASE("gradient in the euclidean metric is the raw partials vector") {
  const MetricField g = MetricField::euclidean(3);
  const ScalarField F = fields::coordinate(3, 3);
  const TangentVector grad = gradient(g, F, ChartPoint{1.0, 0.0, 0.0});
  CHECK(grad.components.isApprox(Eigen::Vector3d(0.0, 0.0, 1.0), 1e-14));

  const ScalarField C0 = fields::half_norm_squared(3);
  const TangentVector grad_c0 = gradient(g, C0, ChartPoint{1.0, 2.0, 3.0});
  CHECK(grad_c0.components.isApprox(Eigen::Vector3d(1.0, 2.0, 3.0), 1e-14));
}

TEST_CASE("gradient solves the metric system for a diagonal metric") {
  const MetricField g = MetricField::diagonal(Eigen::Vector2d(4.0, 1.0));
  const ScalarField F = fields::coordinate(2, 1);
  const TangentVector grad = gradient(g, F, ChartPoint{0.0, 0.0});
  CHECK(grad[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(grad[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("inner products against the metric") {
  const MetricField g3 = MetricField::euclidean(3);
  const ChartPoint x{1.0, 1.0, 1.0};
  CHECK(inner(g3, x, TangentVector{1.0, 0.0, 0.0},
              TangentVector{0.0, 1.0, 0.0}) == doctest::Approx(0.0));

  const MetricField g2 = MetricField::diagonal(Eigen::Vector2d(4.0, 1.0));
  const TangentVector u{1.0, 1.0};
  CHECK(inner(g2, ChartPoint{0.0, 0.0}, u, u) == doctest::Approx(5.0));

  const TangentVector grad_f =
      gradient(g3, fields::half_norm_squared(3), x);
  const TangentVector grad_g = gradient(g3, fields::coordinate(3, 3), x);
  CHECK(inner(g3, x, grad_f, grad_g) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("check_partials accepts correct partials and rejects wrong ones") {
  const PartialsReport good = check_partials(product_x1_x2(), ChartPoint{2.0, 3.0});
  CHECK(good.pass);
  CHECK(good.max_rel_error < 1e-8);

  const ScalarField wrong(
      2, [](const ChartPoint& x) { return x[0] * x[0]; },
      [](const ChartPoint& x) {
        Eigen::VectorXd p(2);
        p << 3.0 * x[0], 0.0;
        return p;
      });
  CHECK_FALSE(check_partials(wrong, ChartPoint{1.0, 0.0}).pass);

  const RigidBodyModel rb(3.0, 2.0, 1.0);
  CHECK(check_partials(rb.hamiltonian(), ChartPoint{1.0, 1.0, 1.0}).pass);
}

TEST_CASE("differential pairing matches the metric inner product") {
  InstanceGenerator gen(7);
  for (int i = 0; i < 50; ++i) {
    const RandomInstance inst = gen.next();
    const MetricField& g = inst.metric;
    const ScalarField& F = inst.conserved.front();
    const ChartPoint& x = inst.point;
    const TangentVector Y = TangentVector(gen.random_point(inst.n).coords);
    const double pairing = F.partials(x).dot(Y.components);
    const double via_gradient = inner(g, x, gradient(g, F, x), Y);
    CHECK(std::abs(pairing - via_gradient) <=
          1e-10 * std::max(1.0, std::abs(pairing)));
  }
}

TEST_CASE("gradient is linear in the field") {
  InstanceGenerator gen(11);
  for (int i = 0; i < 20; ++i) {
    const RandomInstance inst = gen.make(4, 2);
    const ScalarField& F = inst.conserved[0];
    const ScalarField& H = inst.conserved[1];
    const double a = gen.uniform(-2.0, 2.0), b = gen.uniform(-2.0, 2.0);
    const ScalarField combo = linear_combination({a, b}, {F, H});
    const Eigen::VectorXd lhs =
        gradient(inst.metric, combo, inst.point).components;
    const Eigen::VectorXd rhs =
        a * gradient(inst.metric, F, inst.point).components +
        b * gradient(inst.metric, H, inst.point).components;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("metric validation") {
  CHECK_THROWS_AS(gradient(MetricField::euclidean(3),
                           fields::coordinate(2, 1), ChartPoint{0.0, 1.0, 0.0}),
                  DimensionMismatch);

  const MetricField asym(2, [](const ChartPoint&) {
    Eigen::Matrix2d m;
    m << 1.0, 0.5, 0.0, 1.0;
    return m;
  });
  CHECK_THROWS_AS(asym(ChartPoint{0.0, 0.0}), SingularMetric);

  const MetricField singular(2, [](const ChartPoint&) {
    Eigen::Matrix2d m;
    m << 1.0, 1.0, 1.0, 1.0;
    return m;
  });
  CHECK_THROWS_AS(MetricFrame(singular, ChartPoint{0.0, 0.0}), SingularMetric);

  // Indefinite but invertible: factorizable via the LU fallback.
  const MetricFrame lu_frame(Eigen::MatrixXd(
      Eigen::Vector2d(1.0, -1.0).asDiagonal()));
  CHECK(lu_frame.det() == doctest::Approx(-1.0));
  CHECK_THROWS_AS(lu_frame.sqrt_det(), SingularMetric);
}

TEST_CASE("finite-difference fallback partials") {
  const ScalarField no_partials(
      2, [](const ChartPoint& x) { return std::sin(x[0]) * x[1]; });
  CHECK_FALSE(no_partials.has_analytic_partials());
  const Eigen::VectorXd p = no_partials.partials(ChartPoint{0.3, 2.0});
  CHECK(p(0) == doctest::Approx(std::cos(0.3) * 2.0).epsilon(1e-8));
  CHECK(p(1) == doctest::Approx(std::sin(0.3)).epsilon(1e-8));
}
