#include "geodissip/gram.hpp"

#include <cmath>

namespace geodissip {

double det_lu(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("determinant of non-square matrix");
  }
  switch (m.rows()) {
    case 0:
      return 1.0;  // empty minor convention
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
  }
}

double epsilon_reg(const Eigen::MatrixXd& gram) {
  double scale = 1.0;
  for (int i = 0; i < gram.rows(); ++i) scale = std::max(scale, gram(i, i));
  return 1e-10 * scale * scale;
}

PointData point_data(const MetricField& g, std::span<const ScalarField> fields,
                     const ChartPoint& x) {
  const int n = g.dim();
  const int m = static_cast<int>(fields.size());
  Eigen::MatrixXd partials(n, m);
  for (int j = 0; j < m; ++j) {
    if (fields[j].dim() != n) {
      throw DimensionMismatch("field dimension does not match metric");
    }
    partials.col(j) = fields[j].partials(x);
  }
  MetricFrame frame(g, x);
  Eigen::MatrixXd gradients = frame.solve(partials);
  Eigen::MatrixXd gram = partials.transpose() * gradients;
  return PointData{std::move(frame), std::move(partials), std::move(gradients),
                   std::move(gram)};
}

SigmaMatrix sigma(const MetricField& g, std::span<const ScalarField> row_fields,
                  std::span<const ScalarField> col_fields, const ChartPoint& x) {
  const int n = g.dim();
  const int r = static_cast<int>(row_fields.size());
  const int s = static_cast<int>(col_fields.size());
  Eigen::MatrixXd row_partials(n, r), col_partials(n, s);
  for (int i = 0; i < r; ++i) {
    if (row_fields[i].dim() != n) {
      throw DimensionMismatch("row field dimension does not match metric");
    }
    row_partials.col(i) = row_fields[i].partials(x);
  }
  for (int j = 0; j < s; ++j) {
    if (col_fields[j].dim() != n) {
      throw DimensionMismatch("column field dimension does not match metric");
    }
    col_partials.col(j) = col_fields[j].partials(x);
  }
  MetricFrame frame(g, x);
  SigmaMatrix out;
  out.rows.resize(r);
  out.cols.resize(s);
  for (int i = 0; i < r; ++i) out.rows[i] = i;
  for (int j = 0; j < s; ++j) out.cols[j] = j;
  // <grad col_j, grad row_i> = (d col_j)^T g^{-1} (d row_i)
  out.entries = row_partials.transpose() * frame.solve(col_partials);
  return out;
}

double gram_det(const MetricField& g, std::span<const ScalarField> fields,
                const ChartPoint& x) {
  return det_lu(point_data(g, fields, x).gram);
}

RankDiagnostic rank_diagnostic(const Eigen::MatrixXd& full_gram) {
  RankDiagnostic diag;
  diag.k = static_cast<int>(full_gram.rows()) - 1;
  auto rank_of = [](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double tol = 1e-10 * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > tol) ++rank;
    }
    return rank;
  };
  diag.rank_system = rank_of(full_gram.topRows(full_gram.rows() - 1));
  diag.rank_full = rank_of(full_gram);
  return diag;
}

namespace detail {

Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, int row, int col) {
  const int r = static_cast<int>(m.rows());
  const int c = static_cast<int>(m.cols());
  Eigen::MatrixXd out(r - 1, c - 1);
  for (int i = 0, oi = 0; i < r; ++i) {
    if (i == row) continue;
    for (int j = 0, oj = 0; j < c; ++j) {
      if (j == col) continue;
      out(oi, oj) = m(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

double hat_minor_det(const Eigen::MatrixXd& gram, int skip) {
  // Rows F_1..F_k; columns F_1..F_k without `skip`, target column last.
  // Dropping the target row and the skipped column from the full matrix
  // produces exactly that layout.
  const int k = static_cast<int>(gram.rows()) - 1;
  return det_lu(drop_row_col(gram, k, skip));
}

}  // namespace detail

CramerSolution cramer_solve(const MetricField& g,
                            std::span<const ScalarField> conserved,
                            const ScalarField& target, double rate_value,
                            const ChartPoint& x) {
  const int k = static_cast<int>(conserved.size());
  if (k < 1) throw InvalidParameter("cramer_solve needs at least one conserved field");
  std::vector<ScalarField> all(conserved.begin(), conserved.end());
  all.push_back(target);
  const PointData data = point_data(g, all, x);
  const Eigen::MatrixXd& S = data.gram;
  const double det_full = det_lu(S);
  if (std::abs(det_full) <= epsilon_reg(S)) {
    throw DegenerateGram("cramer_solve: full Gram determinant below threshold",
                         rank_diagnostic(S));
  }
  CramerSolution sol;
  sol.alphas.resize(k);
  for (int i = 1; i <= k; ++i) {
    const double sign = ((i + k + 1) % 2 == 0) ? 1.0 : -1.0;
    sol.alphas(i - 1) =
        sign * rate_value * detail::hat_minor_det(S, i - 1) / det_full;
  }
  sol.alpha = rate_value * det_lu(S.topLeftCorner(k, k)) / det_full;
  return sol;
}

}  // namespace geodissip
