#pragma once

#include <span>
#include <vector>

#include "geodissip/chart.hpp"

namespace geodissip {

/// Matrix of pairwise gradient inner products. Entry (i, j) holds
/// <grad col_j, grad row_i>; rows/cols record the positions of the labelling
/// fields in the caller's lists.
struct SigmaMatrix {
  std::vector<int> rows;
  std::vector<int> cols;
  Eigen::MatrixXd entries;
};

/// Determinant with partial-pivot LU; closed-form expansion for sizes <= 3.
double det_lu(const Eigen::MatrixXd& m);

/// Regularity threshold for a Gram matrix: 1e-10 * max(1, largest diagonal)^2.
double epsilon_reg(const Eigen::MatrixXd& gram);

/// Gradients, partials and the Gram matrix of a field list at one point.
/// `partials` and `gradients` are n x m with one column per field;
/// gram = partials^T * gradients.
struct PointData {
  MetricFrame frame;
  Eigen::MatrixXd partials;
  Eigen::MatrixXd gradients;
  Eigen::MatrixXd gram;
};

PointData point_data(const MetricField& g, std::span<const ScalarField> fields,
                     const ChartPoint& x);

SigmaMatrix sigma(const MetricField& g, std::span<const ScalarField> row_fields,
                  std::span<const ScalarField> col_fields, const ChartPoint& x);

/// det of the Gram matrix of the given fields' gradients.
double gram_det(const MetricField& g, std::span<const ScalarField> fields,
                const ChartPoint& x);

/// Rank comparison (SVD, tolerance 1e-10 * sigma_max) between the k x (k+1)
/// coefficient block and the full (k+1) x (k+1) Gram matrix.
RankDiagnostic rank_diagnostic(const Eigen::MatrixXd& full_gram);

/// Coefficients of the dissipative part: alpha_1..alpha_k multiply the
/// conserved-field gradients, alpha multiplies the target gradient.
struct CramerSolution {
  Eigen::VectorXd alphas;
  double alpha = 0.0;
};

/// Cramer solution of the defining linear system for a prescribed rate.
/// Throws DegenerateGram (with rank diagnostic) when the full Gram
/// determinant is below the regularity threshold.
CramerSolution cramer_solve(const MetricField& g,
                            std::span<const ScalarField> conserved,
                            const ScalarField& target, double rate_value,
                            const ChartPoint& x);

namespace detail {
/// Minor of `m` with one row and one column removed (0-based indices).
Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, int row, int col);
/// Determinant of the Gram submatrix with rows = all fields, cols = all
/// conserved fields except `skip` followed by the target column. `gram` is
/// the full (k+1) x (k+1) matrix over (F_1..F_k, G); `skip` is 0-based.
double hat_minor_det(const Eigen::MatrixXd& gram, int skip);
}  // namespace detail

}  // namespace geodissip
