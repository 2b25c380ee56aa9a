#pragma once

#include <stdexcept>
#include <string>

namespace geodissip {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// Metric factorization failed (singular, non-symmetric, or not positive definite).
struct SingularMetric : Error {
  explicit SingularMetric(const std::string& msg) : Error(msg) {}
};

/// Rank comparison for the defining linear system at a point where the full
/// Gram determinant vanishes. `rank_system` is the rank of the k x (k+1)
/// coefficient block, `rank_full` the rank of the (k+1) x (k+1) Gram matrix.
/// When the two coincide the system admits a solution only for zero rate.
struct RankDiagnostic {
  int k = 0;
  int rank_system = 0;
  int rank_full = 0;

  bool requires_zero_rate() const { return rank_system == rank_full; }
  bool compatible(double h_value) const {
    return !requires_zero_rate() || h_value == 0.0;
  }
  std::string describe() const;
};

/// The full Gram determinant is below the regularity threshold.
struct DegenerateGram : Error {
  RankDiagnostic diagnostic;
  DegenerateGram(const std::string& msg, RankDiagnostic diag)
      : Error(msg + " [" + diag.describe() + "]"), diagnostic(diag) {}
  explicit DegenerateGram(const std::string& msg) : Error(msg) {}
};

struct MissingRate : Error {
  explicit MissingRate(const std::string& msg) : Error(msg) {}
};

struct DegreeMismatch : Error {
  explicit DegreeMismatch(const std::string& msg) : Error(msg) {}
};

struct DegreeOverflow : Error {
  explicit DegreeOverflow(const std::string& msg) : Error(msg) {}
};

struct OriginExcluded : Error {
  explicit OriginExcluded(const std::string& msg) : Error(msg) {}
};

struct InvalidLevel : Error {
  explicit InvalidLevel(const std::string& msg) : Error(msg) {}
};

struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

/// Leaf-chart basis columns are (numerically) linearly dependent.
struct DegenerateChart : Error {
  explicit DegenerateChart(const std::string& msg) : Error(msg) {}
};

struct EmptyTrajectory : Error {
  explicit EmptyTrajectory(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

inline std::string RankDiagnostic::describe() const {
  return "rank(system)=" + std::to_string(rank_system) +
         ", rank(full)=" + std::to_string(rank_full) +
         (requires_zero_rate() ? ", solvable only for zero rate"
                               : ", solvable for any rate");
}

}  // namespace geodissip
