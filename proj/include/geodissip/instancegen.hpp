#pragma once

#include <random>

#include "geodissip/control.hpp"

namespace geodissip {

/// A randomly generated, well-conditioned control problem instance.
struct RandomInstance {
  MetricField metric;
  std::vector<ScalarField> conserved;
  ScalarField target;
  ChartPoint point;
  int n = 0;
  int k = 0;

  ControlProblem problem() const {
    return ControlProblem(metric, conserved, target);
  }
};

/// Seeded generator of problem instances: constant SPD metrics with condition
/// number at most 1e3, polynomial/trigonometric fields with analytic
/// partials, and evaluation points kept away from degenerate Gram
/// configurations. Deterministic for a fixed seed.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  /// Instance with the given chart dimension and conserved count (k+1 <= n).
  RandomInstance make(int n, int k);

  /// Cycles through the admissible (n, k) pairs with n in {3,4,5},
  /// k in {1,2,3}.
  RandomInstance next();

  Eigen::MatrixXd random_spd(int n, double max_condition = 1e3);
  ScalarField random_field(int n);
  ChartPoint random_point(int n);
  /// Random k x k matrix with |det| >= 0.1.
  Eigen::MatrixXd random_linear_map(int k);

  double uniform(double lo, double hi);
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  long counter_ = 0;
};

}  // namespace geodissip
