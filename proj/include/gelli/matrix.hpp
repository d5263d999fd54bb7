#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gelli/intmath.hpp"

namespace gelli {

// Dense matrix over Z with exact entries, row-major.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, Int(0)) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
      : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != rows_ * cols_)
      throw std::invalid_argument("entry count does not match dimensions");
  }

  // Row-major initializer, e.g. IntMatrix::of({{1,1},{-1,2}}).
  static IntMatrix of(const std::vector<std::vector<long>>& rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows[0].size() : 0;
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c)
        throw std::invalid_argument("ragged initializer");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix zero(std::size_t rows, std::size_t cols) {
    return IntMatrix(rows, cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return e_[i * cols_ + j];
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const Int& x : e_)
      if (x != 0) return false;
    return true;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<Int> col(std::size_t j) const {
    std::vector<Int> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, const std::vector<Int>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }

  std::vector<Int> apply(const std::vector<Int>& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("dimension mismatch");
    std::vector<Int> w(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) w[i] += (*this)(i, j) * v[j];
    return w;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("dimension mismatch");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = e_[i] + o.e_[i];
    return s;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("dimension mismatch");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = e_[i] - o.e_[i];
    return s;
  }

  IntMatrix operator-() const {
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) s.e_[i] = -e_[i];
    return s;
  }

  // [ this | o ] side by side.
  IntMatrix hcat(const IntMatrix& o) const {
    if (rows_ != o.rows_) throw std::invalid_argument("row count mismatch");
    IntMatrix m(rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < o.cols_; ++j) m(i, cols_ + j) = o(i, j);
    }
    return m;
  }

  IntMatrix vcat(const IntMatrix& o) const {
    if (cols_ != o.cols_) throw std::invalid_argument("column count mismatch");
    IntMatrix m(rows_ + o.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < o.rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = o(i, j);
    return m;
  }

  // Block diagonal sum.
  IntMatrix dsum(const IntMatrix& o) const {
    IntMatrix m(rows_ + o.rows_, cols_ + o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t i = 0; i < o.rows_; ++i)
      for (std::size_t j = 0; j < o.cols_; ++j)
        m(rows_ + i, cols_ + j) = o(i, j);
    return m;
  }

  IntMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const {
    IntMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> e_;
};

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det of non-square");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        a(i, j) = t / prev;  // exact by Bareiss
      }
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

struct SmithDecomposition {
  IntMatrix u;  // unimodular, rows x rows
  IntMatrix d;  // diagonal with divisibility chain, non-negative
  IntMatrix v;  // unimodular, cols x cols
};

// Smith normal form: u*m*v = d with u, v unimodular and
// d[i][i] | d[i+1][i+1], all diagonal entries >= 0.
// Pivot choice: minimal absolute value nonzero entry, to limit growth.
inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
  std::size_t nr = m.rows(), nc = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(nr);
  IntMatrix v = IntMatrix::identity(nc);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < nc; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < nr; ++k) std::swap(u(i, k), u(j, k));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < nr; ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < nc; ++k) std::swap(v(k, i), v(k, j));
  };
  auto addmul_row = [&](std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t k = 0; k < nc; ++k) a(dst, k) += c * a(src, k);
    for (std::size_t k = 0; k < nr; ++k) u(dst, k) += c * u(src, k);
  };
  auto addmul_col = [&](std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t k = 0; k < nr; ++k) a(k, dst) += c * a(k, src);
    for (std::size_t k = 0; k < nc; ++k) v(k, dst) += c * v(k, src);
  };
  auto negate_row = [&](std::size_t i) {
    for (std::size_t k = 0; k < nc; ++k) a(i, k) = -a(i, k);
    for (std::size_t k = 0; k < nr; ++k) u(i, k) = -u(i, k);
  };

  std::size_t t = 0;
  std::size_t nmin = nr < nc ? nr : nc;
  while (t < nmin) {
    // Locate minimal |entry| != 0 in the trailing block.
    std::size_t pi = t, pj = t;
    bool found = false;
    Int best(0);
    for (std::size_t i = t; i < nr; ++i)
      for (std::size_t j = t; j < nc; ++j) {
        if (a(i, j) == 0) continue;
        Int ab = abs(a(i, j));
        if (!found || ab < best) {
          found = true;
          best = ab;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    bool clean = true;
    for (std::size_t i = t + 1; i < nr; ++i) {
      if (a(i, t) == 0) continue;
      Int q = fdiv(a(i, t), a(t, t));
      if (q != 0) addmul_row(i, t, -q);
      if (a(i, t) != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < nc; ++j) {
      if (a(t, j) == 0) continue;
      Int q = fdiv(a(t, j), a(t, t));
      if (q != 0) addmul_col(j, t, -q);
      if (a(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders exist; re-pick pivot

    // Row and column at t are clear; enforce pivot | trailing block.
    bool divides_all = true;
    for (std::size_t i = t + 1; i < nr && divides_all; ++i)
      for (std::size_t j = t + 1; j < nc; ++j)
        if (!divides(a(t, t), a(i, j))) {
          // Fold the offending row in and restart this pivot.
          addmul_row(t, i, Int(1));
          divides_all = false;
          break;
        }
    if (!divides_all) continue;
    if (a(t, t) < 0) negate_row(t);
    ++t;
  }

  // Diagonal divisibility chain is a consequence of the pivot-divides-block
  // loop above; entries are already non-negative.
  return SmithDecomposition{std::move(u), std::move(a), std::move(v)};
}

// Diagonal of the Smith form, including zeros up to min(rows, cols).
inline std::vector<Int> smith_diagonal(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  std::size_t nmin = m.rows() < m.cols() ? m.rows() : m.cols();
  std::vector<Int> d(nmin);
  for (std::size_t i = 0; i < nmin; ++i) d[i] = s.d(i, i);
  return d;
}

// Basis of the integer kernel lattice {x : m x = 0}, as matrix columns.
inline IntMatrix kernel_lattice(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  std::size_t nmin = m.rows() < m.cols() ? m.rows() : m.cols();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < nmin; ++i)
    if (s.d(i, i) != 0) ++rank;
  std::size_t dim = m.cols() - rank;
  IntMatrix k(m.cols(), dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) k(i, j) = s.v(i, rank + j);
  return k;
}

// Basis of the column span lattice of m, as matrix columns.
// From u*m*v = d: the columns of u^-1 * d generate the span, and the
// nonzero ones are independent.  u^-1 columns are recovered by solving
// u * x = d_col, which is exact since u is unimodular.
inline IntMatrix column_span_basis(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  std::size_t nmin = m.rows() < m.cols() ? m.rows() : m.cols();
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < nmin; ++i)
    if (s.d(i, i) != 0) nz.push_back(i);
  // m*v has the same column span as m and equals u^-1 * d; its first
  // rank columns form the basis (scaled u^-1 columns).
  IntMatrix mv = m * s.v;
  IntMatrix b(m.rows(), nz.size());
  for (std::size_t j = 0; j < nz.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) b(i, j) = mv(i, nz[j]);
  return b;
}

// One integer solution x of m x = y, if any.
inline std::optional<std::vector<Int>> solve(const IntMatrix& m,
                                             const std::vector<Int>& y) {
  if (y.size() != m.rows()) throw std::invalid_argument("dimension mismatch");
  SmithDecomposition s = smith_normal_form(m);
  std::vector<Int> uy = s.u.apply(y);
  std::size_t nmin = m.rows() < m.cols() ? m.rows() : m.cols();
  std::vector<Int> w(m.cols(), Int(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int di = i < nmin ? s.d(i, i) : Int(0);
    if (di == 0) {
      if (uy[i] != 0) return std::nullopt;
    } else {
      if (!divides(di, uy[i])) return std::nullopt;
      w[i] = uy[i] / di;
    }
  }
  return s.v.apply(w);
}

// Whether each column of b lies in the column span of a.
inline bool spans_columns(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("dimension mismatch");
  SmithDecomposition s = smith_normal_form(a);
  std::size_t nmin = a.rows() < a.cols() ? a.rows() : a.cols();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    std::vector<Int> uy = s.u.apply(b.col(j));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Int di = i < nmin ? s.d(i, i) : Int(0);
      if (di == 0) {
        if (uy[i] != 0) return false;
      } else if (!divides(di, uy[i])) {
        return false;
      }
    }
  }
  return true;
}

// Lattice equality of column spans.
inline bool same_column_span(const IntMatrix& a, const IntMatrix& b) {
  return spans_columns(a, b) && spans_columns(b, a);
}

inline bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  Int d = det(m);
  return d == 1 || d == -1;
}

}  // namespace gelli
