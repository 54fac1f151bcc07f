#pragma once

// Exact symmetric matrices: PSD test, rank, and the linear solves the
// completion and Krawtchouk code needs.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/rational.hpp"

namespace dlp {

class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  static SymMatrix identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1);
    return m;
  }

  /// Builds from a full row-major table; throws ShapeError if not square or
  /// not symmetric.
  static SymMatrix from_rows(const std::vector<RationalVector>& rows) {
    SymMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw ShapeError("matrix is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) m.a_[i * m.dim_ + j] = rows[i][j];
    }
    for (std::size_t i = 0; i < m.dim_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (m(i, j) != m(j, i)) throw ShapeError("matrix is not symmetric");
    return m;
  }

  std::size_t dim() const { return dim_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, const Rational& v) {
    a_[i * dim_ + j] = v;
    a_[j * dim_ + i] = v;
  }

  SymMatrix principal(const std::vector<std::size_t>& idx) const {
    SymMatrix s(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) s.set(i, j, (*this)(idx[i], idx[j]));
    return s;
  }

  /// Leading principal block of size k.
  SymMatrix leading(std::size_t k) const {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    return principal(idx);
  }

  std::vector<RationalVector> rows() const {
    std::vector<RationalVector> r(dim_, RationalVector(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) r[i][j] = (*this)(i, j);
    return r;
  }

  friend bool operator==(const SymMatrix& x, const SymMatrix& y) { return x.dim_ == y.dim_ && x.a_ == y.a_; }

 private:
  std::size_t dim_ = 0;
  RationalVector a_;
};

/// Symmetric matrix where each entry is either specified or unknown.
class PartialSymMatrix {
 public:
  PartialSymMatrix() = default;
  explicit PartialSymMatrix(std::size_t dim) : values_(dim), mask_(dim * dim, false) {}

  static PartialSymMatrix fully_specified(const SymMatrix& m) {
    PartialSymMatrix p(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j <= i; ++j) p.specify(i, j, m(i, j));
    return p;
  }

  std::size_t dim() const { return values_.dim(); }
  bool specified(std::size_t i, std::size_t j) const { return mask_[i * dim() + j]; }
  const Rational& value(std::size_t i, std::size_t j) const { return values_(i, j); }

  void specify(std::size_t i, std::size_t j, const Rational& v) {
    values_.set(i, j, v);
    mask_[i * dim() + j] = mask_[j * dim() + i] = true;
  }
  void unspecify(std::size_t i, std::size_t j) {
    values_.set(i, j, 0);
    mask_[i * dim() + j] = mask_[j * dim() + i] = false;
  }

  bool all_specified() const {
    for (bool b : mask_)
      if (!b) return false;
    return true;
  }

  /// Values with unknown entries as 0; only meaningful where specified.
  const SymMatrix& values() const { return values_; }

  friend bool operator==(const PartialSymMatrix& x, const PartialSymMatrix& y) {
    return x.values_ == y.values_ && x.mask_ == y.mask_;
  }

 private:
  SymMatrix values_;
  std::vector<bool> mask_;
};

/// Exact PSD test by symmetric elimination with diagonal pivoting. A
/// negative pivot, or a zero diagonal with a nonzero entry in its row of the
/// reduced matrix, means not PSD.
inline bool is_psd_exact(const SymMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<RationalVector> a = m.rows();
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> p;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      if (a[i][i].sign() < 0) return false;
      if (a[i][i].sign() > 0 && !p) p = i;
    }
    if (!p) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && !a[i][j].is_zero()) return false;
      return true;
    }
    const std::size_t k = *p;
    done[k] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || a[i][k].is_zero()) continue;
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j] && !a[k][j].is_zero()) a[i][j] -= f * a[k][j];
    }
  }
  return true;
}

/// Rank of an arbitrary rational matrix by Gaussian elimination.
inline std::size_t matrix_rank(std::vector<RationalVector> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      Rational f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Exact rank of a PSD matrix. Throws PreconditionViolation when the input
/// is not PSD.
inline std::size_t psd_rank(const SymMatrix& m) {
  if (!is_psd_exact(m)) throw PreconditionViolation("psd_rank called on a matrix that is not PSD");
  return matrix_rank(m.rows());
}

/// Some solution of A x = b, or nullopt when the system is inconsistent.
/// Free variables are set to zero.
inline std::optional<RationalVector> solve_linear(std::vector<RationalVector> a, RationalVector b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rational inv = a[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!b[i].is_zero()) return std::nullopt;
  RationalVector x(cols);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace dlp
