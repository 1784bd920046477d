#include <algorithm>
#include <limits>
#include <utility>

#include "gridsec/matrix.hpp"

namespace gridsec {

RationalMatrix to_rational(const IntMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = Rational(static_cast<long>(m(r, c)));
  return out;
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = static_cast<double>(m(r, c));
  return out;
}

Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).get_d();
  return out;
}

RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots) {
  RationalMatrix a = m;
  if (pivots) pivots->clear();
  std::size_t lead = 0;
  Rational factor;
  for (std::size_t col = 0; col < a.cols() && lead < a.rows(); ++col) {
    std::size_t p = lead;
    while (p < a.rows() && sgn(a(p, col)) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != lead)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(lead, c));
    const Rational inv = 1 / a(lead, col);
    for (std::size_t c = col; c < a.cols(); ++c)
      if (sgn(a(lead, c)) != 0) a(lead, c) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead || sgn(a(r, col)) == 0) continue;
      factor = a(r, col);
      for (std::size_t c = col; c < a.cols(); ++c)
        if (sgn(a(lead, c)) != 0) a(r, c) -= factor * a(lead, c);
    }
    if (pivots) pivots->push_back(col);
    ++lead;
  }
  return a;
}

namespace {

// Incremental echelon basis: rows kept reduced against each other's pivots.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

  // Reduces `v` in place against the basis; returns true if it became zero.
  bool reduce(RationalVector& v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t pc = pivot_cols_[i];
      if (sgn(v[pc]) == 0) continue;
      const Rational f = v[pc];
      for (std::size_t c = 0; c < cols_; ++c)
        if (sgn(rows_[i][c]) != 0) v[c] -= f * rows_[i][c];
    }
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
  }

  // `v` must already be reduced and nonzero.
  void add(RationalVector v) {
    std::size_t pc = 0;
    while (sgn(v[pc]) == 0) ++pc;
    const Rational inv = 1 / v[pc];
    for (auto& x : v) x *= inv;
    for (auto& r : rows_) {
      if (sgn(r[pc]) == 0) continue;
      const Rational f = r[pc];
      for (std::size_t c = 0; c < cols_; ++c)
        if (sgn(v[c]) != 0) r[c] -= f * v[c];
    }
    rows_.push_back(std::move(v));
    pivot_cols_.push_back(pc);
  }

  std::size_t size() const { return rows_.size(); }

 private:
  std::size_t cols_;
  std::vector<RationalVector> rows_;
  std::vector<std::size_t> pivot_cols_;
};

}  // namespace

std::vector<std::size_t> independent_rows(const RationalMatrix& m) {
  EchelonBasis basis(m.cols());
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    RationalVector v(m.row(r).begin(), m.row(r).end());
    if (!basis.reduce(v)) {
      basis.add(std::move(v));
      kept.push_back(r);
    }
  }
  return kept;
}

std::size_t rank(const RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  rref(m, &pivots);
  return pivots.size();
}

namespace {

__extension__ typedef __int128 Wide;

bool fits(Wide v) {
  return v <= std::numeric_limits<std::int64_t>::max() &&
         v >= std::numeric_limits<std::int64_t>::min();
}

// Fraction-free elimination. Every intermediate entry is a minor of the input,
// so the division by the previous pivot is exact. Returns false on overflow.
bool bareiss_rank(IntMatrix a, std::size_t& out) {
  std::int64_t prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t p = r;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(r, c));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      for (std::size_t j = col + 1; j < a.cols(); ++j) {
        const Wide v = (static_cast<Wide>(a(r, col)) * a(i, j) -
                        static_cast<Wide>(a(i, col)) * a(r, j)) / prev;
        if (!fits(v)) return false;
        a(i, j) = static_cast<std::int64_t>(v);
      }
      a(i, col) = 0;
    }
    prev = a(r, col);
    ++r;
  }
  out = r;
  return true;
}

}  // namespace

std::size_t rank(const IntMatrix& m) {
  std::size_t r = 0;
  if (bareiss_rank(m, r)) return r;
  return rank(to_rational(m));
}

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  RationalMatrix a = m;
  Rational det = 1;
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && sgn(a(p, col)) == 0) ++p;
    if (p == n) return 0;
    if (p != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(p, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (sgn(a(i, col)) == 0) continue;
      const Rational f = a(i, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(i, c) -= f * a(col, c);
    }
  }
  return det;
}

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  std::int64_t prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(p, c), a(k, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        const Wide v = (static_cast<Wide>(a(k, k)) * a(i, j) -
                        static_cast<Wide>(a(i, k)) * a(k, j)) / prev;
        if (!fits(v)) throw SizeLimitExceeded("determinant overflows 64-bit integers");
        a(i, j) = static_cast<std::int64_t>(v);
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

RationalMatrix nullspace_basis(const RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  const RationalMatrix r = rref(m, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;

  RationalMatrix basis(0, m.cols());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
    basis.append_row(v);
  }
  if (basis.rows() == 0) return basis;
  return rref(basis);
}

bool same_row_space(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.cols()) return false;
  RationalMatrix stacked = a;
  for (std::size_t r = 0; r < b.rows(); ++r) stacked.append_row(b.row(r));
  const std::size_t joint = rank(stacked);
  return rank(a) == joint && rank(b) == joint;
}

RationalVector multiply(const RationalMatrix& m, std::span<const Rational> v) {
  if (v.size() != m.cols()) throw DimensionMismatch("matrix-vector product: wrong length");
  RationalVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (sgn(m(r, c)) != 0 && sgn(v[c]) != 0) out[r] += m(r, c) * v[c];
  return out;
}

}  // namespace gridsec
