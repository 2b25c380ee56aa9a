#pragma once

#include <map>
#include <span>
#include <vector>

#include "geodissip/control.hpp"

namespace geodissip {

/// Alternating form of degree r on an n-dimensional chart, stored as a sparse
/// map from strictly increasing 1-based index tuples to coefficients.
/// Degrees above n are admitted and are necessarily the zero form (no valid
/// key exists), which is what a wedge product past top degree returns.
class AlternatingForm {
 public:
  using Index = std::vector<int>;
  using CoeffMap = std::map<Index, double>;

  AlternatingForm(int dim, int degree);

  /// Single basis monomial c * dx^{i_1} ^ ... ^ dx^{i_r} (indices increasing).
  static AlternatingForm basis(int dim, Index indices, double coeff = 1.0);

  int dim() const { return dim_; }
  int degree() const { return degree_; }

  double coeff(std::span<const int> indices) const;
  void set_coeff(Index indices, double value);
  /// Accumulates into the coefficient of a key.
  void add_coeff(const Index& indices, double value);

  const CoeffMap& coeffs() const { return coeffs_; }

  AlternatingForm& operator+=(const AlternatingForm& other);
  AlternatingForm scaled(double s) const;
  bool is_zero(double tol = 0.0) const;
  double max_abs_coeff() const;

 private:
  void check_key(std::span<const int> indices) const;

  int dim_ = 0;
  int degree_ = 0;
  CoeffMap coeffs_;
};

/// Sign of the permutation (i_1..i_r) of {1..r}; 0 when the indices repeat or
/// do not exhaust {1..r}.
int ricci_epsilon(std::span<const int> indices);

/// Generalized Kronecker delta: +1/-1 when `upper` is an even/odd permutation
/// of the distinct tuple `lower`, 0 otherwise.
int gen_kronecker(std::span<const int> upper, std::span<const int> lower);

/// Exterior product; bilinear, associative, graded-anticommutative.
AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);

/// Metric Hodge star in local coordinates, by direct summation over
/// permutations. Oracle-grade: chart dimension is capped at 8.
AlternatingForm hodge(const MetricField& g, const ChartPoint& x,
                      const AlternatingForm& a);
AlternatingForm hodge(const MetricFrame& frame, const AlternatingForm& a);

/// Differential of a scalar field at a point, as a degree-1 form.
AlternatingForm differential(const ScalarField& F, const ChartPoint& x);

/// Index-raising of a degree-1 form: components g^{-1} * coefficients.
TangentVector sharp(const MetricField& g, const ChartPoint& x,
                    const AlternatingForm& a);
TangentVector sharp(const MetricFrame& frame, const AlternatingForm& a);

/// Covariant route to the standard control vector field:
/// (-1)^(n+1) sharp(*(dF_1 ^ ... ^ dF_k ^ *(dG ^ dF_1 ^ ... ^ dF_k))).
TangentVector v0_hodge(const ControlProblem& p, const ChartPoint& x);

/// Brute-force verification of the delta contraction identity: summing the
/// trailing p-r indices of a length-p delta over 1..n multiplies the length-r
/// delta by (n-r)!/(n-p)!. Checks every choice of free indices.
bool delta_contraction_check(int n, int r, int p);

/// Conserved-Gram determinant through the index-contraction expansion
/// (partials contracted with the inverse metric against Jacobian minors).
/// Independent of the inner-product route; small n and k only.
double gram_det_contraction(const MetricField& g,
                            std::span<const ScalarField> fields,
                            const ChartPoint& x);

}  // namespace geodissip
