#include "geodissip/instancegen.hpp"

#include <cmath>

namespace geodissip {

namespace {

// (n, k) pairs with n in {3,4,5}, k in {1,2,3} and k+1 <= n, so that every
// formulation of the control field (including the Hodge route) is defined.
constexpr std::pair<int, int> kShapes[] = {{3, 1}, {3, 2}, {4, 1}, {4, 2},
                                           {4, 3}, {5, 1}, {5, 2}, {5, 3}};

/// Hadamard ratio of a Gram matrix: det / product of diagonal entries.
/// Lies in [0, 1]; small values flag nearly dependent gradients.
double gram_quality(const Eigen::MatrixXd& gram) {
  double diag = 1.0;
  for (int i = 0; i < gram.rows(); ++i) diag *= std::max(gram(i, i), 1e-300);
  return det_lu(gram) / diag;
}

}  // namespace

double InstanceGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Eigen::MatrixXd InstanceGenerator::random_spd(int n, double max_condition) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd raw(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) raw(i, j) = gauss(rng_);
  }
  const Eigen::MatrixXd Q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ();
  const double half_log = 0.5 * std::log10(max_condition);
  Eigen::VectorXd eigs(n);
  for (int i = 0; i < n; ++i) {
    eigs(i) = std::pow(10.0, uniform(-half_log, half_log));
  }
  return Q * eigs.asDiagonal() * Q.transpose();
}

ScalarField InstanceGenerator::random_field(int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int kind = static_cast<int>(rng_() % 3);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n), amp_sin(n), amp_cos(n);
  for (int i = 0; i < n; ++i) {
    b(i) = gauss(rng_);
    amp_sin(i) = gauss(rng_);
    amp_cos(i) = gauss(rng_);
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng_);
  }
  A = Eigen::MatrixXd(0.5 * (A + A.transpose()));
  const bool quadratic = kind != 1;
  const bool trig = kind != 0;
  if (!quadratic) A.setZero();
  if (!trig) {
    amp_sin.setZero();
    amp_cos.setZero();
  }

  auto value = [A, b, amp_sin, amp_cos, n](const ChartPoint& x) {
    double v = 0.5 * x.coords.dot(A * x.coords) + b.dot(x.coords);
    for (int i = 0; i < n; ++i) {
      v += amp_sin(i) * std::sin(x.coords(i)) +
           amp_cos(i) * std::cos(x.coords(i));
    }
    return v;
  };
  auto partials = [A, b, amp_sin, amp_cos, n](const ChartPoint& x) {
    Eigen::VectorXd p = A * x.coords + b;
    for (int i = 0; i < n; ++i) {
      p(i) += amp_sin(i) * std::cos(x.coords(i)) -
              amp_cos(i) * std::sin(x.coords(i));
    }
    return p;
  };
  return ScalarField(n, value, partials);
}

ChartPoint InstanceGenerator::random_point(int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd coords(n);
  for (int i = 0; i < n; ++i) coords(i) = gauss(rng_);
  return ChartPoint(std::move(coords));
}

Eigen::MatrixXd InstanceGenerator::random_linear_map(int k) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd R(k, k);
  for (int attempt = 0; attempt < 256; ++attempt) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) R(i, j) = gauss(rng_);
    }
    if (std::abs(det_lu(R)) >= 0.1) return R;
  }
  return Eigen::MatrixXd::Identity(k, k);
}

RandomInstance InstanceGenerator::make(int n, int k) {
  if (k + 1 > n) {
    throw InvalidParameter("instance needs k+1 <= n for independent gradients");
  }
  for (int attempt = 0; attempt < 256; ++attempt) {
    MetricField metric = MetricField::constant(random_spd(n));
    std::vector<ScalarField> conserved;
    conserved.reserve(k);
    for (int i = 0; i < k; ++i) conserved.push_back(random_field(n));
    ScalarField target = random_field(n);

    std::vector<ScalarField> all = conserved;
    all.push_back(target);
    for (int tries = 0; tries < 32; ++tries) {
      ChartPoint x = random_point(n);
      const Eigen::MatrixXd gram = point_data(metric, all, x).gram;
      if (gram_quality(gram) >= 1e-3) {
        return RandomInstance{std::move(metric), std::move(conserved),
                              std::move(target), std::move(x), n, k};
      }
    }
  }
  throw Error("instance generation failed to find a well-conditioned point");
}

RandomInstance InstanceGenerator::next() {
  const auto [n, k] = kShapes[counter_ % std::size(kShapes)];
  ++counter_;
  return make(n, k);
}

}  // namespace geodissip
