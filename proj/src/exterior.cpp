#include "geodissip/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geodissip {

namespace {

constexpr int kMaxHodgeDim = 8;
constexpr int kMaxDeltaDim = 6;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Parity sign of an integer sequence: +1/-1 by inversion count, 0 on repeats.
int permutation_sign(std::span<const int> seq) {
  int inversions = 0;
  for (std::size_t a = 0; a < seq.size(); ++a) {
    for (std::size_t b = a + 1; b < seq.size(); ++b) {
      if (seq[a] == seq[b]) return 0;
      if (seq[a] > seq[b]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

bool has_repeats(std::span<const int> seq) {
  for (std::size_t a = 0; a < seq.size(); ++a) {
    for (std::size_t b = a + 1; b < seq.size(); ++b) {
      if (seq[a] == seq[b]) return true;
    }
  }
  return false;
}

/// Advances a tuple with entries in 1..n through all n^len assignments.
bool next_tuple(std::vector<int>& t, int n) {
  for (int pos = static_cast<int>(t.size()) - 1; pos >= 0; --pos) {
    if (t[pos] < n) {
      ++t[pos];
      std::fill(t.begin() + pos + 1, t.end(), 1);
      return true;
    }
  }
  return false;
}

}  // namespace

AlternatingForm::AlternatingForm(int dim, int degree)
    : dim_(dim), degree_(degree) {
  if (dim_ <= 0) throw InvalidParameter("form dimension must be positive");
  if (degree_ < 0) throw InvalidParameter("form degree must be nonnegative");
}

AlternatingForm AlternatingForm::basis(int dim, Index indices, double coeff) {
  AlternatingForm f(dim, static_cast<int>(indices.size()));
  f.set_coeff(std::move(indices), coeff);
  return f;
}

void AlternatingForm::check_key(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_) {
    throw DegreeMismatch("form key length does not match degree");
  }
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] < 1 || indices[t] > dim_) {
      throw DegreeMismatch("form key index out of range 1..n");
    }
    if (t > 0 && indices[t] <= indices[t - 1]) {
      throw DegreeMismatch("form key must be strictly increasing");
    }
  }
}

double AlternatingForm::coeff(std::span<const int> indices) const {
  check_key(indices);
  auto it = coeffs_.find(Index(indices.begin(), indices.end()));
  return it == coeffs_.end() ? 0.0 : it->second;
}

void AlternatingForm::set_coeff(Index indices, double value) {
  check_key(indices);
  coeffs_[std::move(indices)] = value;
}

void AlternatingForm::add_coeff(const Index& indices, double value) {
  check_key(indices);
  coeffs_[indices] += value;
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& other) {
  if (other.dim_ != dim_ || other.degree_ != degree_) {
    throw DegreeMismatch("form addition requires equal dimension and degree");
  }
  for (const auto& [key, c] : other.coeffs_) coeffs_[key] += c;
  return *this;
}

AlternatingForm AlternatingForm::scaled(double s) const {
  AlternatingForm out(dim_, degree_);
  for (const auto& [key, c] : coeffs_) out.coeffs_[key] = s * c;
  return out;
}

bool AlternatingForm::is_zero(double tol) const {
  return max_abs_coeff() <= tol;
}

double AlternatingForm::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [key, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

int ricci_epsilon(std::span<const int> indices) {
  const int r = static_cast<int>(indices.size());
  // Must be a permutation of {1..r}.
  for (int v : indices) {
    if (v < 1 || v > r) return 0;
  }
  return permutation_sign(indices);
}

int gen_kronecker(std::span<const int> upper, std::span<const int> lower) {
  if (upper.size() != lower.size()) {
    throw DimensionMismatch("gen_kronecker: index tuples of unequal length");
  }
  if (has_repeats(lower) || has_repeats(upper)) return 0;
  // Position of each upper index inside the lower tuple.
  std::vector<int> positions;
  positions.reserve(upper.size());
  for (int u : upper) {
    auto it = std::find(lower.begin(), lower.end(), u);
    if (it == lower.end()) return 0;
    positions.push_back(static_cast<int>(it - lower.begin()));
  }
  return permutation_sign(positions);
}

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("wedge: forms on charts of different dimension");
  }
  const int n = a.dim();
  AlternatingForm out(n, a.degree() + b.degree());
  if (a.degree() + b.degree() > n) return out;  // zero past top degree

  std::vector<int> merged;
  for (const auto& [ka, ca] : a.coeffs()) {
    for (const auto& [kb, cb] : b.coeffs()) {
      // Sign of merging two increasing tuples; vanishes on shared indices.
      int inversions = 0;
      bool shared = false;
      for (int ib : kb) {
        for (int ia : ka) {
          if (ia == ib) {
            shared = true;
            break;
          }
          if (ia > ib) ++inversions;
        }
        if (shared) break;
      }
      if (shared) continue;
      merged.clear();
      merged.insert(merged.end(), ka.begin(), ka.end());
      merged.insert(merged.end(), kb.begin(), kb.end());
      std::sort(merged.begin(), merged.end());
      const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
      out.add_coeff(merged, sign * ca * cb);
    }
  }
  return out;
}

AlternatingForm hodge(const MetricField& g, const ChartPoint& x,
                      const AlternatingForm& a) {
  if (g.dim() != a.dim()) {
    throw DimensionMismatch("hodge: form and metric dimensions differ");
  }
  return hodge(MetricFrame(g, x), a);
}

AlternatingForm hodge(const MetricFrame& frame, const AlternatingForm& a) {
  const int n = a.dim();
  const int r = a.degree();
  if (frame.dim() != n) {
    throw DimensionMismatch("hodge: form and metric dimensions differ");
  }
  if (n > kMaxHodgeDim) {
    throw DegreeOverflow("hodge: chart dimension exceeds the supported n <= 8");
  }
  if (r > n) {
    throw DegreeMismatch("hodge: form degree exceeds chart dimension");
  }

  const Eigen::MatrixXd ginv = frame.inverse();
  const double scale = frame.sqrt_det() / factorial(n - r);

  AlternatingForm out(n, n - r);
  std::vector<int> perm(n);
  std::vector<int> trailing(n - r);
  for (const auto& [key, c] : a.coeffs()) {
    if (c == 0.0) continue;
    std::iota(perm.begin(), perm.end(), 1);
    do {
      const int eps = permutation_sign(perm);
      double contracted = 1.0;
      for (int t = 0; t < r; ++t) {
        contracted *= ginv(key[t] - 1, perm[t] - 1);
      }
      if (contracted == 0.0) continue;
      std::copy(perm.begin() + r, perm.end(), trailing.begin());
      const int sort_sign = permutation_sign(trailing);
      std::sort(trailing.begin(), trailing.end());
      out.add_coeff(trailing, c * scale * eps * sort_sign * contracted);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

AlternatingForm differential(const ScalarField& F, const ChartPoint& x) {
  const Eigen::VectorXd p = F.partials(x);
  AlternatingForm out(F.dim(), 1);
  for (int a = 0; a < F.dim(); ++a) {
    if (p(a) != 0.0) out.set_coeff({a + 1}, p(a));
  }
  return out;
}

TangentVector sharp(const MetricField& g, const ChartPoint& x,
                    const AlternatingForm& a) {
  return sharp(MetricFrame(g, x), a);
}

TangentVector sharp(const MetricFrame& frame, const AlternatingForm& a) {
  if (a.degree() != 1) {
    throw DegreeMismatch("sharp is defined for degree-1 forms");
  }
  if (frame.dim() != a.dim()) {
    throw DimensionMismatch("sharp: form and metric dimensions differ");
  }
  Eigen::VectorXd covector = Eigen::VectorXd::Zero(a.dim());
  for (const auto& [key, c] : a.coeffs()) covector(key[0] - 1) = c;
  return TangentVector(frame.solve(covector));
}

TangentVector v0_hodge(const ControlProblem& p, const ChartPoint& x) {
  const int n = p.dim();
  const int k = p.k();
  if (k + 1 > n) {
    throw DegreeOverflow("v0_hodge: k+1 one-forms exceed the chart dimension");
  }
  const MetricFrame frame(p.metric(), x);

  std::vector<AlternatingForm> dF;
  dF.reserve(k);
  for (const auto& F : p.conserved()) dF.push_back(differential(F, x));
  const AlternatingForm dG = differential(p.target(), x);

  AlternatingForm inner_form = dG;
  for (const auto& f : dF) inner_form = wedge(inner_form, f);
  const AlternatingForm inner_star = hodge(frame, inner_form);

  AlternatingForm outer_form = dF[0];
  for (int i = 1; i < k; ++i) outer_form = wedge(outer_form, dF[i]);
  outer_form = wedge(outer_form, inner_star);

  const AlternatingForm one_form = hodge(frame, outer_form);
  const double sign = ((n + 1) % 2 == 0) ? 1.0 : -1.0;
  return sign * sharp(frame, one_form);
}

bool delta_contraction_check(int n, int r, int p) {
  if (!(0 <= r && r <= p && p <= n)) {
    throw InvalidParameter("delta_contraction_check requires 0 <= r <= p <= n");
  }
  if (n > kMaxDeltaDim) {
    throw InvalidParameter("delta_contraction_check supports n <= 6");
  }
  const double factor = factorial(n - r) / factorial(n - p);

  std::vector<int> i_free(r, 1), j_free(r, 1);
  std::vector<int> lower(p), upper(p);
  if (r == 0) {
    // Pure trace of the trailing block.
    double lhs = 0.0;
    std::vector<int> trailing(p, 1);
    if (p == 0) {
      lhs = 1.0;
    } else {
      do {
        lhs += gen_kronecker(trailing, trailing);
      } while (next_tuple(trailing, n));
    }
    return lhs == factor;
  }

  do {
    std::copy(i_free.begin(), i_free.end(), lower.begin());
    do {
      std::copy(j_free.begin(), j_free.end(), upper.begin());
      double lhs = 0.0;
      if (p == r) {
        lhs = gen_kronecker(upper, lower);
      } else {
        std::vector<int> trailing(p - r, 1);
        do {
          std::copy(trailing.begin(), trailing.end(), lower.begin() + r);
          std::copy(trailing.begin(), trailing.end(), upper.begin() + r);
          lhs += gen_kronecker(upper, lower);
        } while (next_tuple(trailing, n));
      }
      const double rhs = factor * gen_kronecker(j_free, i_free);
      if (lhs != rhs) return false;
    } while (next_tuple(j_free, n));
  } while (next_tuple(i_free, n));
  return true;
}

double gram_det_contraction(const MetricField& g,
                            std::span<const ScalarField> fields,
                            const ChartPoint& x) {
  const int n = g.dim();
  const int k = static_cast<int>(fields.size());
  if (k < 1) throw InvalidParameter("gram_det_contraction needs fields");
  if (n > kMaxDeltaDim || k > 4) {
    throw InvalidParameter("gram_det_contraction supports n <= 6, k <= 4");
  }
  Eigen::MatrixXd partials(n, k);
  for (int j = 0; j < k; ++j) partials.col(j) = fields[j].partials(x);
  const Eigen::MatrixXd ginv = MetricFrame(g, x).inverse();

  double total = 0.0;
  Eigen::MatrixXd jac(k, k);
  std::vector<int> b(k, 1), s(k, 1);
  do {
    double pb = 1.0;
    for (int t = 0; t < k; ++t) pb *= partials(b[t] - 1, t);
    if (pb == 0.0) continue;
    std::fill(s.begin(), s.end(), 1);
    do {
      double gprod = 1.0;
      for (int t = 0; t < k; ++t) gprod *= ginv(b[t] - 1, s[t] - 1);
      if (gprod == 0.0) continue;
      for (int row = 0; row < k; ++row) {
        for (int col = 0; col < k; ++col) {
          jac(row, col) = partials(s[row] - 1, col);
        }
      }
      total += pb * gprod * det_lu(jac);
    } while (next_tuple(s, n));
  } while (next_tuple(b, n));
  return total;
}

}  // namespace geodissip
