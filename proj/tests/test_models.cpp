#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geodissip/instancegen.hpp"
#include "geodissip/integrate.hpp"
#include "geodissip/models.hpp"

using namespace geodissip;

TEST_CASE("landau-lifschitz precession term") {
  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(1.0, 1.0, {0.0, 0.0, 1.0});
  const TangentVector v = ll.base_field(ChartPoint{1.0, 0.0, 0.0});
  CHECK(v.components.isApprox(Eigen::Vector3d(0.0, -1.0, 0.0), 1e-14));

  // M parallel to grad H: no precession.
  const TangentVector at_pole = ll.base_field(ChartPoint{0.0, 0.0, 2.0});
  CHECK(at_pole.components.cwiseAbs().maxCoeff() <= 1e-14);

  InstanceGenerator gen(3);
  for (int i = 0; i < 25; ++i) {
    ChartPoint M = gen.random_point(3);
    if (M.coords.norm() < 0.1) M.coords(2) += 1.0;
    const Eigen::VectorXd X = ll.base_field(M).components;
    CHECK(std::abs(X.dot(M.coords)) <= 1e-12);
    CHECK(std::abs(X.dot(ll.hamiltonian().partials(M))) <= 1e-12);
  }
}

TEST_CASE("landau-lifschitz damping term") {
  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(1.0, 1.0, {0.0, 0.0, 1.0});
  const TangentVector v = ll.perturbation(ChartPoint{1.0, 0.0, 0.0});
  CHECK(v.components.isApprox(Eigen::Vector3d(0.0, 0.0, -1.0), 1e-14));

  const TangentVector aligned = ll.perturbation(ChartPoint{0.0, 0.0, 2.0});
  CHECK(aligned.components.cwiseAbs().maxCoeff() <= 1e-14);

  InstanceGenerator gen(5);
  for (int i = 0; i < 50; ++i) {
    const double gamma = gen.uniform(0.5, 2.0);
    const double lambda = gen.uniform(0.5, 2.0);
    Eigen::Vector3d b(gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0),
                      gen.uniform(-1.0, 1.0));
    const LandauLifschitzModel model =
        LandauLifschitzModel::constant_field(gamma, lambda, b);
    ChartPoint M = gen.random_point(3);
    if (M.coords.norm() < 0.1) M.coords(0) += 1.0;

    const Eigen::VectorXd damping = model.perturbation(M).components;
    // Norm conservation and agreement with the standard control field.
    CHECK(std::abs(damping.dot(M.coords)) <=
          1e-12 * std::max(1.0, damping.norm() * M.coords.norm()));
    const Eigen::VectorXd via_v0 = v0(model.control_problem(), M).components;
    CHECK((damping - via_v0).cwiseAbs().maxCoeff() <=
          1e-10 * std::max(1.0, via_v0.cwiseAbs().maxCoeff()));
    // Triple-product form of the damping.
    const Eigen::Vector3d m = M.coords;
    const Eigen::Vector3d gradH = model.hamiltonian().partials(M);
    const Eigen::Vector3d cross_form =
        (lambda / (gamma * m.squaredNorm())) * m.cross(m.cross(gradH));
    CHECK((damping - cross_form).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, cross_form.cwiseAbs().maxCoeff()));
  }

  CHECK_THROWS_AS(ll.perturbation(ChartPoint{0.0, 0.0, 0.0}), OriginExcluded);
  CHECK_THROWS_AS(LandauLifschitzModel::constant_field(1.0, -1.0, {0, 0, 1}),
                  InvalidParameter);
}

TEST_CASE("euler right-hand side") {
  const RigidBodyModel rb(3.0, 2.0, 1.0);
  CHECK(rb.base_field(ChartPoint{1.0, 0.0, 0.0}).components.cwiseAbs().maxCoeff() ==
        0.0);
  const TangentVector v = rb.base_field(ChartPoint{1.0, 1.0, 1.0});
  CHECK(v.components.isApprox(Eigen::Vector3d(0.5, -2.0 / 3.0, 1.0 / 6.0),
                              1e-14));

  InstanceGenerator gen(7);
  for (int i = 0; i < 25; ++i) {
    const ChartPoint x = gen.random_point(3);
    const Eigen::VectorXd X = rb.base_field(x).components;
    CHECK(std::abs(X.dot(rb.hamiltonian().partials(x))) <= 1e-12);
    CHECK(std::abs(X.dot(rb.casimir().partials(x))) <= 1e-12);
  }
}

TEST_CASE("morrison matrix") {
  const RigidBodyModel rb(3.0, 2.0, 1.0);
  const ChartPoint x{1.0, 1.0, 1.0};
  const Eigen::Matrix3d h = rb.morrison_matrix(x);
  CHECK(h(0, 0) == doctest::Approx(1.25));
  CHECK(h.isApprox(h.transpose()));

  InstanceGenerator gen(9);
  for (int i = 0; i < 25; ++i) {
    const ChartPoint y = gen.random_point(3);
    const Eigen::Matrix3d hy = rb.morrison_matrix(y);
    const Eigen::Vector3d gradH = rb.hamiltonian().partials(y);
    CHECK((hy * gradH).norm() <=
          1e-12 * std::max(1.0, hy.cwiseAbs().maxCoeff() * gradH.norm()));
    // -grad H x grad H + |grad H|^2 Id route.
    const Eigen::Matrix3d alt =
        -gradH * gradH.transpose() +
        gradH.squaredNorm() * Eigen::Matrix3d::Identity();
    CHECK(hy.isApprox(alt, 1e-12));
  }

  const TangentVector diss = rb.dissipation(x);
  CHECK(diss.components.isApprox(
      Eigen::Vector3d(0.75, 4.0 / 9.0, -17.0 / 36.0), 1e-12));
  CHECK(diss.components.isApprox(v0(rb.control_problem(), x).components,
                                 1e-12));
  CHECK(std::abs(diss.components.dot(rb.hamiltonian().partials(x))) <= 1e-12);

  // A non-default Casimir flows through the same dissipation route.
  RigidBodyModel custom(3.0, 2.0, 1.0);
  custom.with_casimir(fields::linear(Eigen::Vector3d(0.2, -1.0, 0.4)));
  const ChartPoint y{0.3, -1.1, 0.8};
  CHECK(custom.dissipation(y).components.isApprox(
      v0(custom.control_problem(), y).components, 1e-12));
}

TEST_CASE("dissipation conventions state the physical directions") {
  constexpr DissipationConvention ll = LandauLifschitzModel::convention();
  CHECK_FALSE(ll.physical_increases);  // energy decreases
  constexpr DissipationConvention rb = RigidBodyModel::convention();
  CHECK(rb.physical_increases);  // casimir grows
}

TEST_CASE("model construction guards") {
  CHECK_THROWS_AS(RigidBodyModel(1.0, 2.0, 3.0), InvalidParameter);
  CHECK_THROWS_AS(RigidBodyModel(2.0, 2.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(RigidBodyModel(3.0, 2.0, -1.0), InvalidParameter);
  CHECK_NOTHROW(RigidBodyModel::axisymmetric(2.0, 1.0));
  CHECK_THROWS_AS(RigidBodyModel::axisymmetric(1.0, 2.0), InvalidParameter);

  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(1.0, 1.0, {0.0, 0.0, 1.0});
  CHECK_THROWS_AS(ll.leaf_chart(0.0), InvalidLevel);
  CHECK_THROWS_AS(ll.leaf_chart(-2.0), InvalidLevel);
  const RigidBodyModel rb(3.0, 2.0, 1.0);
  CHECK_THROWS_AS(rb.leaf_chart(-1.0), InvalidLevel);
}

TEST_CASE("leaf charts hold their level sets") {
  const double gamma = 1.7, lambda = 0.6;
  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(gamma, lambda, {0.0, 0.0, 1.0});
  const double c = 1.3;
  const LeafChart sphere = ll.leaf_chart(c);
  const ScalarField F = ll.conserved();

  const RigidBodyModel rb(3.0, 2.0, 1.0);
  const LeafChart ellipsoid = rb.leaf_chart(c);
  const ScalarField H = rb.hamiltonian();

  InstanceGenerator gen(11);
  for (int i = 0; i < 30; ++i) {
    Eigen::VectorXd y(2);
    y << gen.uniform(0.05, M_PI - 0.05), gen.uniform(0.0, 2.0 * M_PI);
    CHECK(F.value(sphere.embed(y)) == doctest::Approx(c).epsilon(1e-12));
    CHECK(H.value(ellipsoid.embed(y)) == doctest::Approx(c).epsilon(1e-12));
  }
  CHECK(sphere.in_domain((Eigen::VectorXd(2) << 1.0, 0.0).finished()));
  CHECK_FALSE(sphere.in_domain((Eigen::VectorXd(2) << 1e-9, 0.0).finished()));
}

TEST_CASE("closed-form gradient norm on the ellipsoid chart") {
  const RigidBodyModel rb(3.0, 2.0, 1.0);
  const double c = 0.8;
  const LeafChart chart = rb.leaf_chart(c);
  InstanceGenerator gen(13);
  for (int i = 0; i < 20; ++i) {
    const double theta = gen.uniform(0.1, M_PI - 0.1);
    const double phi = gen.uniform(0.0, 2.0 * M_PI);
    Eigen::VectorXd y(2);
    y << theta, phi;
    const Eigen::VectorXd gradH = rb.hamiltonian().partials(chart.embed(y));
    const double closed_form =
        2.0 * c *
        (std::pow(std::sin(theta) * std::cos(phi), 2) / rb.I1() +
         std::pow(std::sin(theta) * std::sin(phi), 2) / rb.I2() +
         std::pow(std::cos(theta), 2) / rb.I3());
    CHECK(gradH.squaredNorm() == doctest::Approx(closed_form).epsilon(1e-10));
  }
}

TEST_CASE("leaf gradients match their closed forms") {
  InstanceGenerator gen(17);
  for (int i = 0; i < 15; ++i) {
    const double gamma = gen.uniform(0.5, 2.0);
    const double lambda = gen.uniform(0.5, 2.0);
    const double c = gen.uniform(0.5, 2.0);
    Eigen::Vector3d b(gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0),
                      gen.uniform(-1.0, 1.0));
    const LandauLifschitzModel ll =
        LandauLifschitzModel::constant_field(gamma, lambda, b);
    const double theta = gen.uniform(0.3, M_PI - 0.3);
    const double phi = gen.uniform(0.0, 2.0 * M_PI);
    Eigen::VectorXd y(2);
    y << theta, phi;

    const LeafGradientReport report =
        leaf_gradient_check(ll.control_problem(), ll.leaf_chart(c), y);
    CHECK(report.max_rel_deviation <= 1e-7);

    const double r = ll.leaf_radius(c);
    const double pref = lambda * lambda / (gamma * gamma * c * c);
    const double dH_dtheta = b(0) * r * std::cos(theta) * std::cos(phi) +
                             b(1) * r * std::cos(theta) * std::sin(phi) -
                             b(2) * r * std::sin(theta);
    const double dH_dphi = -b(0) * r * std::sin(theta) * std::sin(phi) +
                           b(1) * r * std::sin(theta) * std::cos(phi);
    Eigen::Vector2d closed_form(-pref * dH_dtheta,
                            -pref * dH_dphi / std::pow(std::sin(theta), 2));
    CHECK((report.gradient_components - closed_form).cwiseAbs().maxCoeff() <=
          1e-6 * std::max(1.0, closed_form.cwiseAbs().maxCoeff()));
  }

  const RigidBodyModel rb(3.0, 2.0, 1.0);
  for (int i = 0; i < 15; ++i) {
    const double c = gen.uniform(0.5, 2.0);
    const double theta = gen.uniform(0.3, M_PI - 0.3);
    const double phi = gen.uniform(0.0, 2.0 * M_PI);
    Eigen::VectorXd y(2);
    y << theta, phi;
    const LeafGradientReport report =
        leaf_gradient_check(rb.control_problem(), rb.leaf_chart(c), y);
    CHECK(report.max_rel_deviation <= 1e-7);
    Eigen::Vector2d closed_form(
        2.0 * c * std::sin(theta) * std::cos(theta) *
            (1.0 / rb.I3() - std::pow(std::sin(phi), 2) / rb.I2() -
             std::pow(std::cos(phi), 2) / rb.I1()),
        2.0 * c * (1.0 / rb.I1() - 1.0 / rb.I2()) * std::sin(phi) *
            std::cos(phi));
    CHECK((report.gradient_components - closed_form).cwiseAbs().maxCoeff() <=
          1e-6 * std::max(1.0, closed_form.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("axisymmetric bodies dissipate only in theta") {
  const RigidBodyModel axi = RigidBodyModel::axisymmetric(2.0, 1.0);
  InstanceGenerator gen(19);
  for (int i = 0; i < 20; ++i) {
    const double c = gen.uniform(0.5, 2.0);
    Eigen::VectorXd y(2);
    y << gen.uniform(0.3, M_PI - 0.3), gen.uniform(0.0, 2.0 * M_PI);
    const LeafGradientReport report =
        leaf_gradient_check(axi.control_problem(), axi.leaf_chart(c), y);
    CHECK(std::abs(report.v0_components(1)) <= 1e-10);
  }
}

TEST_CASE("spherical components of the tensor match the closed form") {
  const double gamma = 1.2, lambda = 0.9;
  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(gamma, lambda, {0.3, -0.2, 0.9});
  const ControlProblem p = ll.control_problem();
  InstanceGenerator gen(23);
  for (int i = 0; i < 20; ++i) {
    const double theta = gen.uniform(0.2, M_PI - 0.2);
    const double phi = gen.uniform(0.0, 2.0 * M_PI);
    const double r = gen.uniform(0.5, 2.0);
    const ChartPoint M{r * std::sin(theta) * std::cos(phi),
                       r * std::sin(theta) * std::sin(phi),
                       r * std::cos(theta)};
    Eigen::Matrix3d J;
    J << r * std::cos(theta) * std::cos(phi),
        -r * std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi),
        r * std::cos(theta) * std::sin(phi), r * std::sin(theta) * std::cos(phi),
        std::sin(theta) * std::sin(phi),
        -r * std::sin(theta), 0.0, std::cos(theta);
    const Eigen::Matrix3d Jinv = J.inverse();
    const Eigen::Matrix3d T_chart =
        Jinv * tensor_T(p, M) * Jinv.transpose();
    Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
    expected(0, 0) = lambda / (gamma * r * r);
    expected(1, 1) = lambda / (gamma * r * r * std::pow(std::sin(theta), 2));
    CHECK((T_chart - expected).cwiseAbs().maxCoeff() <=
          1e-8 * expected.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("full landau-lifschitz flow dissipates the energy monotonically") {
  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(1.0, 1.0, {0.0, 0.0, 1.0});
  FlowSpec spec;
  spec.base = [ll](const ChartPoint& M) { return ll.base_field(M); };
  spec.control = ll.control_problem();
  spec.mode = ControlMode::v0;
  spec.t0 = 0.0;
  spec.t1 = 10.0;
  spec.dt = 1e-3;
  spec.x0 = ChartPoint{1.0, 0.0, 0.0};
  const IntegrationResult res = integrate(spec);
  REQUIRE(res.ok());
  const ConservationReport report = conservation_report(res.samples);
  CHECK(report.max_drift <= 1e-8);
  CHECK(report.monotonicity_violations == 0);
  // H = M3 decreases while G = -H increases.
  CHECK(res.samples.back().x[2] < -0.99);
}

TEST_CASE("metriplectic rigid-body flow grows the casimir at constant energy") {
  const RigidBodyModel rb(3.0, 2.0, 1.0);
  FlowSpec spec;
  spec.base = [rb](const ChartPoint& x) { return rb.base_field(x); };
  spec.control = rb.control_problem();
  spec.mode = ControlMode::v0;
  spec.t0 = 0.0;
  spec.t1 = 50.0;
  spec.dt = 1e-3;
  spec.x0 = ChartPoint{0.1, 1.0, 0.1};
  const IntegrationResult res = integrate(spec);
  REQUIRE(res.ok());
  const ConservationReport report = conservation_report(res.samples);
  CHECK(report.max_drift <= 1e-8);
  CHECK(report.monotonicity_violations == 0);
  CHECK(res.samples.back().G_value > res.samples.front().G_value);
}
