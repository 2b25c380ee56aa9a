#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geodissip/exterior.hpp"
#include "geodissip/instancegen.hpp"
#include "geodissip/models.hpp"

using namespace geodissip;

namespace {

std::vector<std::vector<int>> increasing_tuples(int n, int r) {
  std::vector<std::vector<int>> keys;
  if (r == 0) return {{}};
  std::vector<int> key(r);
  for (int i = 0; i < r; ++i) key[i] = i + 1;
  while (true) {
    keys.push_back(key);
    int pos = r - 1;
    while (pos >= 0 && key[pos] == n - (r - 1 - pos)) --pos;
    if (pos < 0) break;
    ++key[pos];
    for (int i = pos + 1; i < r; ++i) key[i] = key[i - 1] + 1;
  }
  return keys;
}

}  // namespace

TEST_CASE("ricci symbol") {
  CHECK(ricci_epsilon(std::vector<int>{1, 2, 3}) == 1);
  CHECK(ricci_epsilon(std::vector<int>{2, 1, 3}) == -1);
  CHECK(ricci_epsilon(std::vector<int>{1, 1, 2}) == 0);
  CHECK(ricci_epsilon(std::vector<int>{2, 3}) == 0);  // not a permutation of {1,2}
}

TEST_CASE("generalized kronecker delta") {
  CHECK(gen_kronecker(std::vector<int>{1, 2}, std::vector<int>{1, 2}) == 1);
  CHECK(gen_kronecker(std::vector<int>{2, 1}, std::vector<int>{1, 2}) == -1);
  CHECK(gen_kronecker(std::vector<int>{1, 3}, std::vector<int>{1, 2}) == 0);
  CHECK(gen_kronecker(std::vector<int>{4, 7}, std::vector<int>{7, 4}) == -1);
  CHECK(gen_kronecker(std::vector<int>{1, 1}, std::vector<int>{1, 1}) == 0);
}

TEST_CASE("delta equals the product of ricci symbols on {1..r}^r") {
  for (int r = 1; r <= 4; ++r) {
    std::vector<int> lower(r, 1), upper(r, 1);
    auto advance = [r](std::vector<int>& t) {
      for (int pos = r - 1; pos >= 0; --pos) {
        if (t[pos] < r) {
          ++t[pos];
          std::fill(t.begin() + pos + 1, t.end(), 1);
          return true;
        }
      }
      return false;
    };
    do {
      std::fill(upper.begin(), upper.end(), 1);
      do {
        REQUIRE(gen_kronecker(upper, lower) ==
                ricci_epsilon(lower) * ricci_epsilon(upper));
      } while (advance(upper));
    } while (advance(lower));
  }
}

TEST_CASE("wedge products") {
  const AlternatingForm dx1 = AlternatingForm::basis(3, {1});
  const AlternatingForm dx2 = AlternatingForm::basis(3, {2});
  const AlternatingForm dx3 = AlternatingForm::basis(3, {3});

  const AlternatingForm w12 = wedge(dx1, dx2);
  CHECK(w12.coeff(std::vector<int>{1, 2}) == doctest::Approx(1.0));

  CHECK(wedge(dx1, dx1).is_zero());

  AlternatingForm sum = dx1;
  sum += dx2;
  const AlternatingForm w = wedge(sum, dx3);
  CHECK(w.coeff(std::vector<int>{1, 3}) == doctest::Approx(1.0));
  CHECK(w.coeff(std::vector<int>{2, 3}) == doctest::Approx(1.0));

  // Graded anticommutativity: a ^ b = (-1)^(deg a deg b) b ^ a.
  const AlternatingForm ab = wedge(w12, dx3);
  const AlternatingForm ba = wedge(dx3, w12);
  CHECK(ab.coeff(std::vector<int>{1, 2, 3}) ==
        doctest::Approx(ba.coeff(std::vector<int>{1, 2, 3})));
  const AlternatingForm anti = wedge(dx2, dx1);
  CHECK(anti.coeff(std::vector<int>{1, 2}) == doctest::Approx(-1.0));

  // Past top degree: the zero form.
  CHECK(wedge(w12, w12).is_zero());
  CHECK(wedge(w12, w12).degree() == 4);
}

TEST_CASE("wedge is associative and bilinear on random forms") {
  InstanceGenerator gen(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(trial % 2);
    auto random_form = [&](int degree) {
      AlternatingForm f(n, degree);
      for (const auto& key : increasing_tuples(n, degree)) {
        f.set_coeff(key, gauss(gen.rng()));
      }
      return f;
    };
    const AlternatingForm a = random_form(1);
    const AlternatingForm b = random_form(1);
    const AlternatingForm c = random_form(2);

    const AlternatingForm left = wedge(wedge(a, b), c);
    const AlternatingForm right = wedge(a, wedge(b, c));
    AlternatingForm diff = left;
    diff += right.scaled(-1.0);
    CHECK(diff.max_abs_coeff() <= 1e-12 * std::max(1.0, left.max_abs_coeff()));

    AlternatingForm a_plus_b = a;
    a_plus_b += b;
    AlternatingForm bilinear = wedge(a_plus_b, c);
    bilinear += wedge(a, c).scaled(-1.0);
    bilinear += wedge(b, c).scaled(-1.0);
    CHECK(bilinear.max_abs_coeff() <= 1e-12);
  }
}

TEST_CASE("hodge star on orthonormal frames") {
  const MetricField g = MetricField::euclidean(3);
  const ChartPoint x{0.0, 0.0, 0.0};

  const AlternatingForm star_dx1 = hodge(g, x, AlternatingForm::basis(3, {1}));
  CHECK(star_dx1.coeff(std::vector<int>{2, 3}) == doctest::Approx(1.0));
  CHECK(star_dx1.coeffs().size() == 1);

  const AlternatingForm star_dx12 =
      hodge(g, x, AlternatingForm::basis(3, {1, 2}));
  CHECK(star_dx12.coeff(std::vector<int>{3}) == doctest::Approx(1.0));
}

TEST_CASE("hodge star with a diagonal metric") {
  const double a = 3.0, b = 7.0;
  const MetricField g = MetricField::diagonal(Eigen::Vector2d(a, b));
  const AlternatingForm star_dx1 =
      hodge(g, ChartPoint{0.0, 0.0}, AlternatingForm::basis(2, {1}));
  CHECK(star_dx1.coeff(std::vector<int>{2}) ==
        doctest::Approx(std::sqrt(b / a)).epsilon(1e-13));
}

TEST_CASE("differential of scalar fields") {
  const AlternatingForm d3 =
      differential(fields::coordinate(3, 3), ChartPoint{0.2, 0.4, 0.8});
  CHECK(d3.coeff(std::vector<int>{3}) == doctest::Approx(1.0));
  CHECK(d3.coeffs().size() == 1);

  const AlternatingForm dc0 =
      differential(fields::half_norm_squared(3), ChartPoint{1.0, 2.0, 3.0});
  CHECK(dc0.coeff(std::vector<int>{1}) == doctest::Approx(1.0));
  CHECK(dc0.coeff(std::vector<int>{2}) == doctest::Approx(2.0));
  CHECK(dc0.coeff(std::vector<int>{3}) == doctest::Approx(3.0));

  const RigidBodyModel rb(3.0, 2.0, 1.0);
  const AlternatingForm dh =
      differential(rb.hamiltonian(), ChartPoint{1.0, 1.0, 1.0});
  CHECK(dh.coeff(std::vector<int>{1}) == doctest::Approx(1.0 / 3.0));
  CHECK(dh.coeff(std::vector<int>{2}) == doctest::Approx(0.5));
  CHECK(dh.coeff(std::vector<int>{3}) == doctest::Approx(1.0));
}

TEST_CASE("sharp raises indices and inverts flat") {
  const AlternatingForm a = AlternatingForm::basis(3, {3});
  const TangentVector v =
      sharp(MetricField::euclidean(3), ChartPoint{0.0, 0.0, 0.0}, a);
  CHECK(v.components.isApprox(Eigen::Vector3d(0.0, 0.0, 1.0)));

  const MetricField g = MetricField::diagonal(Eigen::Vector2d(4.0, 1.0));
  const TangentVector u =
      sharp(g, ChartPoint{0.0, 0.0}, AlternatingForm::basis(2, {1}));
  CHECK(u.components.isApprox(Eigen::Vector2d(0.25, 0.0)));

  InstanceGenerator gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const MetricFrame frame(gen.random_spd(n));
    const Eigen::VectorXd w = gen.random_point(n).coords;
    // flat then sharp is the identity
    AlternatingForm flat(n, 1);
    const Eigen::VectorXd covec = frame.matrix() * w;
    for (int i = 0; i < n; ++i) flat.set_coeff({i + 1}, covec(i));
    CHECK(sharp(frame, flat).components.isApprox(w, 1e-10));
  }
  CHECK_THROWS_AS(sharp(MetricField::euclidean(3), ChartPoint{0.0, 0.0, 0.0},
                        AlternatingForm::basis(3, {1, 2})),
                  DegreeMismatch);
}

TEST_CASE("v0_hodge on the hand example and the degenerate target") {
  const ControlProblem p(MetricField::euclidean(3),
                         {fields::half_norm_squared(3)},
                         fields::coordinate(3, 3));
  const TangentVector v = v0_hodge(p, ChartPoint{1.0, 0.0, 0.0});
  CHECK(v.components.isApprox(Eigen::Vector3d(0.0, 0.0, 1.0), 1e-12));

  const ScalarField F = fields::half_norm_squared(3);
  const ControlProblem self(MetricField::euclidean(3), {F}, F);
  CHECK(v0_hodge(self, ChartPoint{1.0, 2.0, 2.0}).components.cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("v0_hodge matches the Landau-Lifschitz damping at a pole point") {
  const LandauLifschitzModel ll =
      LandauLifschitzModel::constant_field(1.0, 1.0, {0.0, 0.0, 1.0});
  const TangentVector v = v0_hodge(ll.control_problem(), ChartPoint{1.0, 0.0, 0.0});
  CHECK(v.components.isApprox(Eigen::Vector3d(0.0, 0.0, -1.0), 1e-12));
}

TEST_CASE("v0_hodge rejects too many constraints") {
  const ScalarField F = fields::half_norm_squared(3);
  const ControlProblem p(
      MetricField::euclidean(3),
      {fields::coordinate(3, 1), fields::coordinate(3, 2), F},
      fields::coordinate(3, 3));
  CHECK_THROWS_AS(v0_hodge(p, ChartPoint{1.0, 1.0, 1.0}), DegreeOverflow);
}

TEST_CASE("delta contraction identities") {
  CHECK(delta_contraction_check(3, 1, 2));
  CHECK(delta_contraction_check(4, 2, 4));
  CHECK(delta_contraction_check(2, 2, 2));
  CHECK(delta_contraction_check(5, 2, 3));
}

TEST_CASE("double hodge sign law on random metrics") {
  InstanceGenerator gen(29);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    const int r = trial % (n + 1);
    const MetricFrame frame(gen.random_spd(n, 100.0));
    AlternatingForm a(n, r);
    for (const auto& key : increasing_tuples(n, r)) {
      a.set_coeff(key, gauss(gen.rng()));
    }
    const AlternatingForm twice = hodge(frame, hodge(frame, a));
    const double sign = ((r * (n - r)) % 2 == 0) ? 1.0 : -1.0;
    AlternatingForm diff = twice;
    diff += a.scaled(-sign);
    CHECK(diff.max_abs_coeff() <= 1e-10 * std::max(1.0, a.max_abs_coeff()));
  }
}

TEST_CASE("hodge isometry for one-forms") {
  InstanceGenerator gen(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const MetricFrame frame(gen.random_spd(n));
    Eigen::VectorXd covec(n);
    AlternatingForm a(n, 1);
    for (int i = 0; i < n; ++i) {
      covec(i) = gauss(gen.rng());
      a.set_coeff({i + 1}, covec(i));
    }
    const AlternatingForm top = wedge(a, hodge(frame, a));
    std::vector<int> full(n);
    for (int i = 0; i < n; ++i) full[i] = i + 1;
    const double lhs = covec.dot(frame.solve(covec)) * frame.sqrt_det();
    CHECK(top.coeff(full) ==
          doctest::Approx(lhs).epsilon(1e-10));
  }
}

TEST_CASE("gram determinant via index contraction matches the direct route") {
  InstanceGenerator gen(37);
  for (int i = 0; i < 60; ++i) {
    const RandomInstance inst = gen.next();
    const double direct = gram_det(inst.metric, inst.conserved, inst.point);
    const double contracted =
        gram_det_contraction(inst.metric, inst.conserved, inst.point);
    CHECK(std::abs(direct - contracted) <=
          1e-9 * std::max(1.0, std::abs(direct)));
  }
}
