#include "geodissip/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "geodissip/exterior.hpp"
#include "geodissip/instancegen.hpp"
#include "geodissip/integrate.hpp"
#include "geodissip/leafgeom.hpp"
#include "geodissip/models.hpp"

namespace geodissip::verify {

namespace {

double apply_override(const VerifyConfig& config, const std::string& name,
                      double default_tol) {
  if (auto it = config.tolerance_overrides.find(name);
      it != config.tolerance_overrides.end()) {
    return it->second;
  }
  if (auto it = config.tolerance_overrides.find("all");
      it != config.tolerance_overrides.end()) {
    return it->second;
  }
  return default_tol;
}

/// Collects the running maximum deviation of one property.
struct Gauge {
  long instances = 0;
  double max_dev = 0.0;
  void observe(double dev) {
    ++instances;
    max_dev = std::max(max_dev, dev);
  }
};

struct Recorder {
  const VerifyConfig& config;
  SuiteReport& report;
  void add(const std::string& name, const Gauge& gauge, double default_tol) {
    const double tol = apply_override(config, name, default_tol);
    report.properties.push_back(PropertyResult{
        name, gauge.instances, gauge.max_dev, tol, gauge.max_dev <= tol});
  }
};

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale =
      std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale < 1e-300) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale < 1e-300) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

std::vector<std::vector<int>> increasing_tuples(int n, int r) {
  std::vector<std::vector<int>> keys;
  if (r == 0) {
    keys.push_back({});
    return keys;
  }
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

bool advance(std::vector<int>& t, int n) {
  for (int pos = static_cast<int>(t.size()) - 1; pos >= 0; --pos) {
    if (t[pos] < n) {
      ++t[pos];
      std::fill(t.begin() + pos + 1, t.end(), 1);
      return true;
    }
  }
  return false;
}

SuiteReport suite_formulations(const VerifyConfig& config) {
  SuiteReport report{"formulations", {}};
  Recorder rec{config, report};
  InstanceGenerator gen(config.seed);
  Gauge fourway, conserve, selfrate, nonneg, member, cramer;

  for (int i = 0; i < config.count; ++i) {
    const RandomInstance inst = gen.next();
    const ControlProblem p = inst.problem();
    const ChartPoint& x = inst.point;

    const Eigen::VectorXd va = v0(p, x).components;
    const Eigen::VectorXd vb = v0_hodge(p, x).components;
    const Eigen::VectorXd vc = v0_via_T(p, x).components;
    const Eigen::VectorXd vd = v0_via_projection(p, x).components;
    fourway.observe(std::max({rel_diff(va, vb), rel_diff(va, vc),
                              rel_diff(va, vd), rel_diff(vb, vc),
                              rel_diff(vb, vd), rel_diff(vc, vd)}));

    const PointData data = p.data_at(x);
    const Eigen::MatrixXd g = data.frame.matrix();
    const double v_norm = std::sqrt(std::max(va.dot(g * va), 0.0));
    double worst = 0.0;
    for (int s = 0; s < inst.k; ++s) {
      const Eigen::VectorXd grad = data.gradients.col(s);
      const double grad_norm = std::sqrt(std::max(grad.dot(g * grad), 0.0));
      worst = std::max(worst, std::abs(va.dot(g * grad)) /
                                  std::max(v_norm * grad_norm, 1e-300));
    }
    conserve.observe(worst);

    const double det_full = det_lu(data.gram);
    const double rate = data.partials.col(inst.k).dot(va);
    selfrate.observe(std::abs(rate - det_full) /
                     std::max(std::abs(det_full), 1e-300));
    nonneg.observe(std::max(0.0, -rate));

    const Eigen::VectorXd fitted =
        data.gradients.colPivHouseholderQr().solve(va);
    member.observe((va - data.gradients * fitted).norm() /
                   std::max(va.norm(), 1e-300));

    if (std::abs(det_full) > 1e-6) {
      const CramerSolution sol =
          cramer_solve(p.metric(), p.conserved(), p.target(), det_full, x);
      Eigen::VectorXd assembled =
          data.gradients.leftCols(inst.k) * sol.alphas +
          sol.alpha * data.gradients.col(inst.k);
      cramer.observe(rel_diff(assembled, va));
    }
  }
  rec.add("v0-four-formulations", fourway, 1e-8);
  rec.add("v0-conserves-constraints", conserve, 1e-9);
  rec.add("v0-prescribed-self-rate", selfrate, 1e-9);
  rec.add("target-rate-nonnegative", nonneg, 1e-10);
  rec.add("v0-span-membership", member, 1e-9);
  rec.add("cramer-assembly-oracle", cramer, 1e-9);
  return report;
}

SuiteReport suite_gram(const VerifyConfig& config) {
  SuiteReport report{"gram", {}};
  Recorder rec{config, report};
  InstanceGenerator gen(config.seed);
  Gauge psd, lu, schwarz;

  for (int i = 0; i < config.count; ++i) {
    const RandomInstance inst = gen.next();
    std::vector<ScalarField> all = inst.conserved;
    all.push_back(inst.target);
    const Eigen::MatrixXd gram =
        point_data(inst.metric, all, inst.point).gram;
    const Eigen::VectorXd eigs =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues();
    psd.observe(std::max(0.0, -eigs.minCoeff()));

    const double h = gen.uniform(-2.0, 2.0);
    const CramerSolution sol =
        cramer_solve(inst.metric, inst.conserved, inst.target, h, inst.point);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(inst.k + 1);
    rhs(inst.k) = h;
    const Eigen::VectorXd dense = gram.fullPivLu().solve(rhs);
    Eigen::VectorXd packed(inst.k + 1);
    packed.head(inst.k) = sol.alphas;
    packed(inst.k) = sol.alpha;
    lu.observe(rel_diff(packed, dense));
  }
  for (int i = 0; i < config.count; ++i) {
    const RandomInstance inst = gen.make(3 + static_cast<int>(i % 3), 1);
    std::vector<ScalarField> pair = inst.conserved;
    pair.push_back(inst.target);
    const double det = det_lu(point_data(inst.metric, pair, inst.point).gram);
    schwarz.observe(std::max(0.0, -det));
  }
  rec.add("gram-psd-eigenvalues", psd, 1e-10);
  rec.add("cramer-vs-dense-solve", lu, 1e-9);
  rec.add("cauchy-schwarz-pairs", schwarz, 1e-12);
  return report;
}

SuiteReport suite_exterior(const VerifyConfig& config) {
  SuiteReport report{"exterior-identities", {}};
  Recorder rec{config, report};
  InstanceGenerator gen(config.seed);

  // delta = epsilon * epsilon over every index assignment from {1..r}^r.
  Gauge eps_product;
  for (int r = 1; r <= 4; ++r) {
    std::vector<int> lower(r, 1);
    do {
      std::vector<int> upper(r, 1);
      do {
        const int delta = gen_kronecker(upper, lower);
        const int product = ricci_epsilon(lower) * ricci_epsilon(upper);
        eps_product.observe(delta == product ? 0.0 : 1.0);
      } while (advance(upper, r));
    } while (advance(lower, r));
  }
  rec.add("kronecker-epsilon-product", eps_product, 0.0);

  // Moving a trailing index to position k+1 flips the sign r-k-1 times.
  Gauge eps_shift;
  for (int r = 1; r <= 5; ++r) {
    std::vector<int> body(r - 1, 1);
    do {
      for (int q = 1; q <= r; ++q) {
        std::vector<int> lhs(body);
        lhs.push_back(q);
        for (int split = 0; split < r; ++split) {
          std::vector<int> rhs(body.begin(), body.begin() + split);
          rhs.push_back(q);
          rhs.insert(rhs.end(), body.begin() + split, body.end());
          const int sign = ((r - split - 1) % 2 == 0) ? 1 : -1;
          eps_shift.observe(
              ricci_epsilon(lhs) == sign * ricci_epsilon(rhs) ? 0.0 : 1.0);
        }
      }
    } while (advance(body, r));
  }
  rec.add("epsilon-index-shift", eps_shift, 0.0);

  Gauge contraction;
  for (int n = 1; n <= 5; ++n) {
    for (int r = 0; r <= std::min(n, 4); ++r) {
      for (int p = r; p <= n; ++p) {
        contraction.observe(delta_contraction_check(n, r, p) ? 0.0 : 1.0);
      }
    }
  }
  rec.add("delta-contraction-sums", contraction, 0.0);

  Gauge double_hodge, isometry, det_routes;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < config.count; ++i) {
    const int n = 2 + static_cast<int>(i % 4);
    const int r = static_cast<int>(i % (n + 1));
    // Two Hodge applications square the conditioning error, so keep these
    // metrics moderate.
    const MetricFrame frame(gen.random_spd(n, 100.0));
    AlternatingForm a(n, r);
    for (const auto& key : increasing_tuples(n, r)) {
      a.set_coeff(key, gauss(gen.rng()));
    }
    const AlternatingForm twice = hodge(frame, hodge(frame, a));
    const double sign = ((r * (n - r)) % 2 == 0) ? 1.0 : -1.0;
    double dev = 0.0;
    const AlternatingForm expected = a.scaled(sign);
    AlternatingForm diff = twice;
    diff += expected.scaled(-1.0);
    dev = diff.max_abs_coeff() / std::max(a.max_abs_coeff(), 1e-300);
    double_hodge.observe(dev);

    // <a, a>_g vol = a ^ *a on one-forms.
    AlternatingForm one(n, 1);
    Eigen::VectorXd covec(n);
    for (int c = 0; c < n; ++c) {
      covec(c) = gauss(gen.rng());
      one.set_coeff({c + 1}, covec(c));
    }
    const AlternatingForm top = wedge(one, hodge(frame, one));
    std::vector<int> full(n);
    for (int c = 0; c < n; ++c) full[c] = c + 1;
    const double lhs = covec.dot(frame.solve(covec)) * frame.sqrt_det();
    const double rhs = top.coeff(full);
    isometry.observe(std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300));
  }
  rec.add("double-hodge-sign-law", double_hodge, 1e-10);
  rec.add("hodge-isometry-one-forms", isometry, 1e-10);

  for (int i = 0; i < config.count; ++i) {
    const RandomInstance inst = gen.next();
    const double via_gram =
        gram_det(inst.metric, inst.conserved, inst.point);
    const double via_contraction =
        gram_det_contraction(inst.metric, inst.conserved, inst.point);
    det_routes.observe(std::abs(via_gram - via_contraction) /
                       std::max(std::abs(via_gram), 1e-300));
  }
  rec.add("gram-det-contraction-route", det_routes, 1e-9);
  return report;
}

SuiteReport suite_leaf(const VerifyConfig& config) {
  SuiteReport report{"leaf", {}};
  Recorder rec{config, report};
  InstanceGenerator gen(config.seed);
  Gauge idempotent, self_adjoint, kernel, trace, annihilate, tangential, psd,
      flat_t, rescale;

  for (int i = 0; i < config.count; ++i) {
    const RandomInstance inst = gen.next();
    const ControlProblem p = inst.problem();
    const ChartPoint& x = inst.point;
    const PointData data = point_data(p.metric(), p.conserved(), x);
    const Eigen::MatrixXd g = data.frame.matrix();

    const Eigen::MatrixXd P = projector(p, x);
    const double p_scale = std::max(P.cwiseAbs().maxCoeff(), 1e-300);
    idempotent.observe((P * P - P).cwiseAbs().maxCoeff() / p_scale);
    const Eigen::MatrixXd gP = g * P;
    self_adjoint.observe((gP - gP.transpose()).cwiseAbs().maxCoeff() /
                         std::max(gP.cwiseAbs().maxCoeff(), 1e-300));
    trace.observe(std::abs(P.trace() - (inst.n - inst.k)));
    double worst = 0.0;
    for (int s = 0; s < inst.k; ++s) {
      worst = std::max(worst, (P * data.gradients.col(s)).norm() /
                                  data.gradients.col(s).norm());
    }
    kernel.observe(worst);

    const Eigen::MatrixXd T = tensor_T(p, x);
    const double t_scale = std::max(T.cwiseAbs().maxCoeff(), 1e-300);
    worst = 0.0;
    for (int s = 0; s < inst.k; ++s) {
      worst = std::max(worst,
                       (T * data.partials.col(s)).norm() /
                           (t_scale * data.partials.col(s).norm()));
    }
    annihilate.observe(worst);

    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd u(inst.n);
    for (int c = 0; c < inst.n; ++c) u(c) = gauss(gen.rng());
    const Eigen::VectorXd tangent = P * u;
    const Eigen::VectorXd alpha = g * tangent;
    tangential.observe(rel_diff(Eigen::VectorXd(T * alpha),
                                Eigen::VectorXd(det_lu(data.gram) * tangent)));

    const Eigen::VectorXd eigs =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T).eigenvalues();
    psd.observe(std::max(0.0, -eigs.minCoeff() / t_scale));
  }
  rec.add("projector-idempotent", idempotent, 1e-9);
  rec.add("projector-g-self-adjoint", self_adjoint, 1e-9);
  rec.add("projector-annihilates-gradients", kernel, 1e-9);
  rec.add("projector-trace-rank", trace, 1e-9);
  rec.add("tensor-annihilates-differentials", annihilate, 1e-9);
  rec.add("tensor-tangential-scaling", tangential, 1e-9);
  rec.add("tensor-positive-semidefinite", psd, 1e-10);

  // flat_T on leaf-tangent fields of the Landau-Lifschitz spheres.
  for (int i = 0; i < std::max(config.count / 4, 8); ++i) {
    const double gamma = gen.uniform(0.5, 2.0);
    const double lambda = gen.uniform(0.5, 2.0);
    Eigen::Vector3d b;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int c = 0; c < 3; ++c) b(c) = gauss(gen.rng());
    const LandauLifschitzModel model =
        LandauLifschitzModel::constant_field(gamma, lambda, b);
    const ControlProblem p = model.control_problem();
    const double c = gen.uniform(0.5, 2.0);
    const LeafChart chart = model.leaf_chart(c);
    Eigen::VectorXd y(2);
    y << gen.uniform(0.3, M_PI - 0.3), gen.uniform(0.0, 2.0 * M_PI);
    const ChartPoint x = chart.embed(y);
    const Eigen::MatrixXd B = chart.basis(y);
    Eigen::VectorXd xi(2);
    xi << gauss(gen.rng()), gauss(gen.rng());
    const Eigen::VectorXd X = B * xi;
    const double det_sigma =
        det_lu(point_data(p.metric(), p.conserved(), x).gram);
    const Eigen::MatrixXd T = tensor_T(p, x);
    const Eigen::VectorXd alpha = (p.metric()(x) * X) / det_sigma;
    flat_t.observe(rel_diff(Eigen::VectorXd(T * alpha), X));
  }
  rec.add("flat-t-leaf-tangent-identity", flat_t, 1e-9);

  for (int i = 0; i < config.count; ++i) {
    const RandomInstance inst = gen.next();
    const Eigen::MatrixXd R = gen.random_linear_map(inst.k);
    std::vector<ScalarField> reparam;
    reparam.reserve(inst.k);
    for (int r = 0; r < inst.k; ++r) {
      std::vector<double> weights(inst.k);
      for (int c = 0; c < inst.k; ++c) weights[c] = R(r, c);
      reparam.push_back(linear_combination(weights, inst.conserved));
    }
    const ControlProblem original = inst.problem();
    const ControlProblem mapped(inst.metric, reparam, inst.target);
    const RescaleReport rr =
        dependent_rescale_check(original, mapped, det_lu(R), inst.point);
    rescale.observe(std::max(rr.det_rel_error, rr.v0_rel_error));
  }
  rec.add("dependent-rescale-factor", rescale, 1e-8);
  return report;
}

SuiteReport suite_models(const VerifyConfig& config) {
  SuiteReport report{"models", {}};
  Recorder rec{config, report};
  InstanceGenerator gen(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Gauge ll_v0, ll_base, morrison_v0, morrison_kernel, rb_base;
  for (int i = 0; i < config.count; ++i) {
    const double gamma = gen.uniform(0.5, 2.0);
    const double lambda = gen.uniform(0.5, 2.0);
    Eigen::Vector3d b;
    for (int c = 0; c < 3; ++c) b(c) = gauss(gen.rng());
    const LandauLifschitzModel ll =
        LandauLifschitzModel::constant_field(gamma, lambda, b);
    ChartPoint M = gen.random_point(3);
    if (M.coords.norm() < 0.2) M.coords(0) += 1.0;

    ll_v0.observe(rel_diff(ll.perturbation(M).components,
                           v0(ll.control_problem(), M).components));
    const Eigen::VectorXd X = ll.base_field(M).components;
    const Eigen::VectorXd gradH = ll.hamiltonian().partials(M);
    const double x_scale = std::max(X.norm() * M.coords.norm(), 1e-300);
    ll_base.observe(std::max(std::abs(X.dot(M.coords)) / x_scale,
                             std::abs(X.dot(gradH)) /
                                 std::max(X.norm() * gradH.norm(), 1e-300)));

    const RigidBodyModel rb(3.0, 2.0, 1.0);
    const ChartPoint x = gen.random_point(3);
    const Eigen::Matrix3d h = rb.morrison_matrix(x);
    morrison_v0.observe(rel_diff(Eigen::VectorXd(h * rb.casimir().partials(x)),
                                 v0(rb.control_problem(), x).components));
    const Eigen::VectorXd gradHrb = rb.hamiltonian().partials(x);
    morrison_kernel.observe(
        (h * gradHrb).norm() /
        std::max(h.cwiseAbs().maxCoeff() * gradHrb.norm(), 1e-300));
    const Eigen::VectorXd euler = rb.base_field(x).components;
    rb_base.observe(std::max(
        std::abs(euler.dot(gradHrb)) /
            std::max(euler.norm() * gradHrb.norm(), 1e-300),
        std::abs(euler.dot(rb.casimir().partials(x))) /
            std::max(euler.norm() * rb.casimir().partials(x).norm(), 1e-300)));
  }
  rec.add("ll-damping-equals-v0", ll_v0, 1e-10);
  rec.add("ll-precession-conserves-both", ll_base, 1e-12);
  rec.add("rb-morrison-equals-v0", morrison_v0, 1e-12);
  rec.add("rb-morrison-kernel", morrison_kernel, 1e-12);
  rec.add("rb-euler-conserves-both", rb_base, 1e-12);

  // Closed-form leaf expressions.
  Gauge ll_tau, ll_induced, rb_gradnorm, ll_leafgrad, rb_leafgrad, rb_axisym,
      ll_tensor_chart;
  const int chart_points = std::max(config.count / 5, 20);
  for (int i = 0; i < chart_points; ++i) {
    const double gamma = gen.uniform(0.5, 2.0);
    const double lambda = gen.uniform(0.5, 2.0);
    const double c = gen.uniform(0.5, 2.0);
    Eigen::Vector3d b;
    for (int q = 0; q < 3; ++q) b(q) = gauss(gen.rng());
    const LandauLifschitzModel ll =
        LandauLifschitzModel::constant_field(gamma, lambda, b);
    const ControlProblem llp = ll.control_problem();
    const LeafChart chart = ll.leaf_chart(c);
    Eigen::VectorXd y(2);
    const double theta = gen.uniform(0.3, M_PI - 0.3);
    const double phi = gen.uniform(0.0, 2.0 * M_PI);
    y << theta, phi;

    Eigen::Matrix2d tau_expected = Eigen::Matrix2d::Zero();
    tau_expected(0, 0) = gamma * gamma * c * c / (lambda * lambda);
    tau_expected(1, 1) = tau_expected(0, 0) * std::sin(theta) * std::sin(theta);
    ll_tau.observe(rel_diff(leaf_metric(llp, chart, y),
                            Eigen::MatrixXd(tau_expected)));

    const Eigen::MatrixXd B = chart.basis(y);
    Eigen::Matrix2d induced_expected = Eigen::Matrix2d::Zero();
    induced_expected(0, 0) = (gamma / lambda) * c * c;
    induced_expected(1, 1) =
        induced_expected(0, 0) * std::sin(theta) * std::sin(theta);
    ll_induced.observe(rel_diff(Eigen::MatrixXd(B.transpose() * B),
                                Eigen::MatrixXd(induced_expected)));

    // Gradient of the restricted target in the spherical chart.
    const double r = ll.leaf_radius(c);
    const double pref = lambda * lambda / (gamma * gamma * c * c);
    const double dH_dtheta =
        b(0) * r * std::cos(theta) * std::cos(phi) +
        b(1) * r * std::cos(theta) * std::sin(phi) - b(2) * r * std::sin(theta);
    const double dH_dphi = -b(0) * r * std::sin(theta) * std::sin(phi) +
                           b(1) * r * std::sin(theta) * std::cos(phi);
    Eigen::VectorXd expected(2);
    expected << -pref * dH_dtheta,
        -pref * dH_dphi / (std::sin(theta) * std::sin(theta));
    const LeafGradientReport lg = leaf_gradient_check(llp, chart, y);
    ll_leafgrad.observe(rel_diff(lg.gradient_components, expected));

    // Spherical-chart components of the tensor: (theta, phi, radius) frame.
    Eigen::Matrix3d J;
    J << r * std::cos(theta) * std::cos(phi),
        -r * std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi),
        r * std::cos(theta) * std::sin(phi),
        r * std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
        -r * std::sin(theta), 0.0, std::cos(theta);
    const Eigen::MatrixXd T = tensor_T(llp, chart.embed(y));
    const Eigen::Matrix3d Jinv = J.inverse();
    const Eigen::Matrix3d T_chart = Jinv * T * Jinv.transpose();
    Eigen::Matrix3d T_expected = Eigen::Matrix3d::Zero();
    T_expected(0, 0) = lambda / (gamma * r * r);
    T_expected(1, 1) =
        lambda / (gamma * r * r * std::sin(theta) * std::sin(theta));
    ll_tensor_chart.observe(rel_diff(Eigen::MatrixXd(T_chart),
                                     Eigen::MatrixXd(T_expected)));

    const RigidBodyModel rb(3.0, 2.0, 1.0);
    const ControlProblem rbp = rb.control_problem();
    const LeafChart ellipsoid = rb.leaf_chart(c);
    const ChartPoint xe = ellipsoid.embed(y);
    const double closed_form_norm =
        2.0 * c *
        (std::sin(theta) * std::sin(theta) * std::cos(phi) * std::cos(phi) /
             rb.I1() +
         std::sin(theta) * std::sin(theta) * std::sin(phi) * std::sin(phi) /
             rb.I2() +
         std::cos(theta) * std::cos(theta) / rb.I3());
    const Eigen::VectorXd gradH = rb.hamiltonian().partials(xe);
    rb_gradnorm.observe(std::abs(gradH.squaredNorm() - closed_form_norm) /
                        closed_form_norm);

    Eigen::VectorXd rb_expected(2);
    rb_expected << 2.0 * c * std::sin(theta) * std::cos(theta) *
                       (1.0 / rb.I3() -
                        std::sin(phi) * std::sin(phi) / rb.I2() -
                        std::cos(phi) * std::cos(phi) / rb.I1()),
        2.0 * c * (1.0 / rb.I1() - 1.0 / rb.I2()) * std::sin(phi) *
            std::cos(phi);
    const LeafGradientReport rg = leaf_gradient_check(rbp, ellipsoid, y);
    rb_leafgrad.observe(rel_diff(rg.gradient_components, rb_expected));

    const RigidBodyModel axi = RigidBodyModel::axisymmetric(2.0, 1.0);
    const LeafGradientReport ag =
        leaf_gradient_check(axi.control_problem(), axi.leaf_chart(c), y);
    rb_axisym.observe(std::abs(ag.v0_components(1)));
  }
  rec.add("ll-leaf-metric-closed-form", ll_tau, 1e-10);
  rec.add("ll-induced-metric-closed-form", ll_induced, 1e-10);
  rec.add("ll-leaf-gradient-closed-form", ll_leafgrad, 1e-6);
  rec.add("ll-tensor-spherical-closed-form", ll_tensor_chart, 1e-8);
  rec.add("rb-gradient-norm-closed-form", rb_gradnorm, 1e-10);
  rec.add("rb-leaf-gradient-closed-form", rb_leafgrad, 1e-6);
  rec.add("rb-axisymmetric-theta-only", rb_axisym, 1e-10);

  // Short flow regressions; the acceptance suite runs the full-length ones.
  Gauge ll_drift, ll_monotone, rb_drift, rb_monotone;
  {
    const LandauLifschitzModel ll =
        LandauLifschitzModel::constant_field(1.0, 1.0, {0.0, 0.0, 1.0});
    FlowSpec spec;
    spec.base = [ll](const ChartPoint& M) { return ll.base_field(M); };
    spec.control = ll.control_problem();
    spec.mode = ControlMode::v0;
    spec.t0 = 0.0;
    spec.t1 = 2.0;
    spec.dt = 1e-3;
    spec.x0 = ChartPoint{1.0, 0.0, 0.0};
    const IntegrationResult res = integrate(spec);
    const ConservationReport cons = conservation_report(res.samples);
    ll_drift.observe(res.ok() ? cons.max_drift : 1.0);
    ll_monotone.observe(static_cast<double>(cons.monotonicity_violations));
  }
  {
    const RigidBodyModel rb(3.0, 2.0, 1.0);
    FlowSpec spec;
    spec.base = [rb](const ChartPoint& x) { return rb.base_field(x); };
    spec.control = rb.control_problem();
    spec.mode = ControlMode::v0;
    spec.t0 = 0.0;
    spec.t1 = 5.0;
    spec.dt = 1e-3;
    spec.x0 = ChartPoint{0.1, 1.0, 0.1};
    const IntegrationResult res = integrate(spec);
    const ConservationReport cons = conservation_report(res.samples);
    rb_drift.observe(res.ok() ? cons.max_drift : 1.0);
    rb_monotone.observe(static_cast<double>(cons.monotonicity_violations));
  }
  rec.add("ll-flow-norm-drift", ll_drift, 1e-8);
  rec.add("ll-flow-monotone-target", ll_monotone, 0.0);
  rec.add("rb-flow-energy-drift", rb_drift, 1e-8);
  rec.add("rb-flow-monotone-casimir", rb_monotone, 0.0);
  return report;
}

}  // namespace

bool SuiteReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "formulations", "gram", "exterior-identities", "leaf", "models"};
  return names;
}

bool is_suite(const std::string& name) {
  if (name == "all") return true;
  const auto& names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SuiteReport run_suite(const std::string& name, const VerifyConfig& config) {
  if (name == "formulations") return suite_formulations(config);
  if (name == "gram") return suite_gram(config);
  if (name == "exterior-identities") return suite_exterior(config);
  if (name == "leaf") return suite_leaf(config);
  if (name == "models") return suite_models(config);
  throw ConfigError("unknown verification suite '" + name + "'");
}

std::vector<SuiteReport> run(const std::string& selection,
                             const VerifyConfig& config) {
  std::vector<SuiteReport> reports;
  if (selection == "all") {
    for (const auto& name : suite_names()) {
      reports.push_back(run_suite(name, config));
    }
  } else {
    reports.push_back(run_suite(selection, config));
  }
  return reports;
}

std::string report_json(const std::vector<SuiteReport>& reports,
                        const VerifyConfig& config) {
  nlohmann::ordered_json root;
  root["seed"] = config.seed;
  root["count"] = config.count;
  if (!config.tolerance_overrides.empty()) {
    nlohmann::ordered_json overrides;
    for (const auto& [name, tol] : config.tolerance_overrides) {
      overrides[name] = tol;
    }
    root["tolerance_overrides"] = overrides;
  }
  bool all = true;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& report : reports) {
    nlohmann::ordered_json suite;
    suite["suite"] = report.suite;
    nlohmann::ordered_json props = nlohmann::ordered_json::array();
    for (const auto& p : report.properties) {
      nlohmann::ordered_json prop;
      prop["name"] = p.name;
      prop["instances"] = p.instances;
      prop["max_deviation"] = p.max_deviation;
      prop["tolerance"] = p.tolerance;
      prop["pass"] = p.pass;
      props.push_back(prop);
    }
    suite["properties"] = props;
    suite["all_pass"] = report.all_pass();
    all = all && report.all_pass();
    suites.push_back(suite);
  }
  root["suites"] = suites;
  root["all_pass"] = all;
  return root.dump(2) + "\n";
}

std::string report_text(const std::vector<SuiteReport>& reports) {
  std::ostringstream out;
  for (const auto& report : reports) {
    out << "suite " << report.suite << "\n";
    for (const auto& p : report.properties) {
      out << "  " << (p.pass ? "PASS" : "FAIL") << "  " << p.name
          << "  instances=" << p.instances << "  max_dev=" << p.max_deviation
          << "  tol=" << p.tolerance << "\n";
    }
  }
  return out.str();
}

}  // namespace geodissip::verify
