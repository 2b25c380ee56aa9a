#pragma once

#include <span>
#include <string>

#include "geodissip/control.hpp"

namespace geodissip {

enum class ControlMode { off, v0, rate };

/// A flow to integrate: optional base field X plus an optional control term,
/// with fixed-step bounds. The last step is shortened to land on t1.
struct FlowSpec {
  std::function<TangentVector(const ChartPoint&)> base;
  std::optional<ControlProblem> control;
  ControlMode mode = ControlMode::off;
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-3;
  ChartPoint x0;
};

struct TrajectorySample {
  double t = 0.0;
  ChartPoint x;
  Eigen::VectorXd F_values;
  double G_value = 0.0;
  double detSigma_full = 0.0;
  /// Finite-difference dG/dt, filled after integration (one-sided at the ends).
  double G_rate_fd = 0.0;
  /// Rate the control term is expected to realize: det Sigma in v0 mode,
  /// h(x) in rate mode, NaN when control is off or unknown.
  double rate_expected = 0.0;
};

enum class FlowStatus { ok, step_failure, degenerate_gram };

struct IntegrationResult {
  std::vector<TrajectorySample> samples;
  FlowStatus status = FlowStatus::ok;
  std::string message;
  double t_fail = 0.0;

  bool ok() const { return status == FlowStatus::ok; }
};

/// Classical fixed-step RK4. On a non-finite state or a degenerate Gram
/// matrix in rate mode, integration stops and the partial trajectory is
/// returned with the failure status.
IntegrationResult integrate(const FlowSpec& spec);

/// Which reference the rate-mismatch diagnostic compares against.
enum class RateReference { stored, det_sigma, none };

struct ConservationReport {
  Eigen::VectorXd max_drift_per_field;
  double max_drift = 0.0;
  /// Samples where the target decreases by more than 1e-10 from the previous
  /// sample.
  int monotonicity_violations = 0;
  double worst_decrease = 0.0;
  /// Max relative mismatch between the finite-difference target rate and the
  /// reference rate, interior samples only; NaN when no reference applies.
  double max_rate_mismatch = 0.0;
};

ConservationReport conservation_report(
    std::span<const TrajectorySample> trajectory,
    RateReference reference = RateReference::stored);

}  // namespace geodissip
