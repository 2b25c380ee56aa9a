#include "geodissip/integrate.hpp"

#include <cmath>
#include <limits>

namespace geodissip {

namespace {

constexpr double kMonotonicitySlack = 1e-10;

}  // namespace

IntegrationResult integrate(const FlowSpec& spec) {
  if (!(spec.t1 > spec.t0)) {
    throw InvalidParameter("integrate: t1 must exceed t0");
  }
  if (!(spec.dt > 0.0) || spec.dt > (spec.t1 - spec.t0) * (1.0 + 1e-12)) {
    throw InvalidParameter("integrate: dt must be positive and at most t1 - t0");
  }
  if (spec.mode != ControlMode::off && !spec.control) {
    throw InvalidParameter("integrate: control mode set without a problem");
  }
  if (spec.control && spec.x0.dim() != spec.control->dim()) {
    throw DimensionMismatch("integrate: x0 dimension does not match problem");
  }
  if (!spec.base && spec.mode == ControlMode::off) {
    throw InvalidParameter("integrate: neither base field nor control term");
  }

  const int n = spec.x0.dim();
  auto rhs = [&](const ChartPoint& x) -> Eigen::VectorXd {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (spec.base) v += spec.base(x).components;
    switch (spec.mode) {
      case ControlMode::off:
        break;
      case ControlMode::v0:
        v += v0(*spec.control, x).components;
        break;
      case ControlMode::rate:
        v += control_field(*spec.control, x).components;
        break;
    }
    return v;
  };

  auto sample_at = [&](double t, const ChartPoint& x) {
    TrajectorySample s;
    s.t = t;
    s.x = x;
    if (spec.control) {
      const auto& fields = spec.control->conserved();
      s.F_values.resize(static_cast<long>(fields.size()));
      for (std::size_t i = 0; i < fields.size(); ++i) {
        s.F_values(static_cast<long>(i)) = fields[i].value(x);
      }
      s.G_value = spec.control->target().value(x);
      s.detSigma_full = det_sigma_full(*spec.control, x);
      switch (spec.mode) {
        case ControlMode::v0:
          s.rate_expected = s.detSigma_full;
          break;
        case ControlMode::rate:
          s.rate_expected = spec.control->rate()
                                ? spec.control->rate()->value(x)
                                : std::numeric_limits<double>::quiet_NaN();
          break;
        case ControlMode::off:
          s.rate_expected = std::numeric_limits<double>::quiet_NaN();
          break;
      }
    } else {
      s.F_values.resize(0);
      s.G_value = std::numeric_limits<double>::quiet_NaN();
      s.detSigma_full = std::numeric_limits<double>::quiet_NaN();
      s.rate_expected = std::numeric_limits<double>::quiet_NaN();
    }
    return s;
  };

  IntegrationResult result;
  ChartPoint x = spec.x0;
  double t = spec.t0;
  // Kahan compensation for the state update, so conservation drift reflects
  // the truncation order of the scheme instead of rounding accumulation.
  Eigen::VectorXd carry = Eigen::VectorXd::Zero(n);

  try {
    result.samples.push_back(sample_at(t, x));
    while (t < spec.t1 - 1e-12 * (spec.t1 - spec.t0)) {
      const double h = std::min(spec.dt, spec.t1 - t);
      ChartPoint stage = x;
      const Eigen::VectorXd k1 = rhs(stage);
      stage.coords = x.coords + 0.5 * h * k1;
      const Eigen::VectorXd k2 = rhs(stage);
      stage.coords = x.coords + 0.5 * h * k2;
      const Eigen::VectorXd k3 = rhs(stage);
      stage.coords = x.coords + h * k3;
      const Eigen::VectorXd k4 = rhs(stage);
      const Eigen::VectorXd increment =
          (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      for (int i = 0; i < n; ++i) {
        const double y = increment(i) - carry(i);
        const double updated = x.coords(i) + y;
        carry(i) = (updated - x.coords(i)) - y;
        x.coords(i) = updated;
      }
      t += h;
      if (!x.all_finite()) {
        result.status = FlowStatus::step_failure;
        result.message = "non-finite state";
        result.t_fail = t;
        break;
      }
      result.samples.push_back(sample_at(t, x));
    }
  } catch (const DegenerateGram& e) {
    result.status = FlowStatus::degenerate_gram;
    result.message = e.what();
    result.t_fail = t;
  }

  // Post-hoc finite-difference target rate.
  auto& s = result.samples;
  const std::size_t m = s.size();
  if (m >= 2) {
    s[0].G_rate_fd = (s[1].G_value - s[0].G_value) / (s[1].t - s[0].t);
    s[m - 1].G_rate_fd =
        (s[m - 1].G_value - s[m - 2].G_value) / (s[m - 1].t - s[m - 2].t);
    for (std::size_t j = 1; j + 1 < m; ++j) {
      s[j].G_rate_fd =
          (s[j + 1].G_value - s[j - 1].G_value) / (s[j + 1].t - s[j - 1].t);
    }
  } else if (m == 1) {
    s[0].G_rate_fd = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

ConservationReport conservation_report(
    std::span<const TrajectorySample> trajectory, RateReference reference) {
  if (trajectory.empty()) {
    throw EmptyTrajectory("conservation_report: empty trajectory");
  }
  ConservationReport report;
  const Eigen::VectorXd initial = trajectory.front().F_values;
  report.max_drift_per_field = Eigen::VectorXd::Zero(initial.size());
  for (const auto& sample : trajectory) {
    if (sample.F_values.size() != initial.size()) {
      throw DimensionMismatch("conservation_report: inconsistent field counts");
    }
    report.max_drift_per_field = report.max_drift_per_field.cwiseMax(
        (sample.F_values - initial).cwiseAbs());
  }
  report.max_drift = report.max_drift_per_field.size() > 0
                         ? report.max_drift_per_field.maxCoeff()
                         : 0.0;

  for (std::size_t j = 1; j < trajectory.size(); ++j) {
    const double decrease = trajectory[j - 1].G_value - trajectory[j].G_value;
    report.worst_decrease = std::max(report.worst_decrease, decrease);
    if (decrease > kMonotonicitySlack) ++report.monotonicity_violations;
  }

  report.max_rate_mismatch = std::numeric_limits<double>::quiet_NaN();
  if (reference != RateReference::none && trajectory.size() >= 3) {
    double worst = -1.0;
    for (std::size_t j = 1; j + 1 < trajectory.size(); ++j) {
      const double expected = reference == RateReference::stored
                                  ? trajectory[j].rate_expected
                                  : trajectory[j].detSigma_full;
      if (!std::isfinite(expected)) continue;
      const double err = std::abs(trajectory[j].G_rate_fd - expected) /
                         std::max(std::abs(expected), 1e-12);
      worst = std::max(worst, err);
    }
    if (worst >= 0.0) report.max_rate_mismatch = worst;
  }
  return report;
}

}  // namespace geodissip
