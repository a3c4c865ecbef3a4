#pragma once

// Dense exact linear algebra over a prime field GF(p).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bipath/errors.hpp"

namespace bipath {

using Scalar = std::uint32_t;

class Field {
 public:
  constexpr Field() = default;
  explicit Field(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p >= (1u << 31))
      throw DomainError("field modulus " + std::to_string(p) + " is not a prime below 2^31");
  }

  static constexpr bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  std::uint32_t modulus() const { return p_; }

  Scalar reduce(std::int64_t x) const {
    auto r = x % static_cast<std::int64_t>(p_);
    return static_cast<Scalar>(r < 0 ? r + p_ : r);
  }
  Scalar add(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} + b) % p_); }
  Scalar sub(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} + p_ - b) % p_); }
  Scalar mul(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} * b) % p_); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }

  Scalar inv(Scalar a) const {
    if (a == 0) throw DomainError("inverse of zero");
    // a^(p-2)
    Scalar result = 1, base = a;
    for (std::uint32_t e = p_ - 2; e > 0; e >>= 1) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint32_t p_ = 2;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Field field = Field{})
      : rows_(rows), cols_(cols), field_(field), entries_(rows * cols, 0) {}

  // Entries are reduced modulo p.
  static Matrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, Field field,
                          std::size_t cols_if_empty = 0) {
    std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    Matrix m(rows.size(), cols, field);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw ShapeError("ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c, field.reduce(rows[r][c]));
    }
    return m;
  }

  static Matrix identity(std::size_t n, Field field = Field{}) {
    Matrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Scalar v) { entries_[r * cols_ + c] = v; }
  std::span<const Scalar> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  std::span<const Scalar> entries() const { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](Scalar s) { return s == 0; });
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_;
  std::vector<Scalar> entries_;
};

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

namespace detail {

inline void require_same_field(const Matrix& a, const Matrix& b) {
  if (a.field() != b.field()) throw DomainError("matrices over different fields");
}

}  // namespace detail

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.rows())
    throw ShapeError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  const Field& f = a.field();
  const std::uint64_t p = f.modulus();
  Matrix out(a.rows(), b.cols(), f);
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t aik = a.at(i, k);
      if (aik == 0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) acc[j] = (acc[j] + aik * brow[j]) % p;
    }
    for (std::size_t j = 0; j < b.cols(); ++j) out.set(i, j, static_cast<Scalar>(acc[j]));
  }
  return out;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

inline Matrix mat_add(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("mat_add: shape mismatch");
  Matrix out(a.rows(), a.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.field().add(a.at(r, c), b.at(r, c)));
  return out;
}

inline Matrix negate(const Matrix& a) {
  Matrix out(a.rows(), a.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.field().neg(a.at(r, c)));
  return out;
}

inline Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(c, r, a.at(r, c));
  return out;
}

// [a | b]
inline Matrix hstack(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.rows() != b.rows()) throw ShapeError("hstack: row counts differ");
  Matrix out(a.rows(), a.cols() + b.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.at(r, c));
    for (std::size_t c = 0; c < b.cols(); ++c) out.set(r, a.cols() + c, b.at(r, c));
  }
  return out;
}

// [a ; b]
inline Matrix vstack(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  if (a.cols() != b.cols()) throw ShapeError("vstack: column counts differ");
  Matrix out(a.rows() + b.rows(), a.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.at(r, c));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out.set(a.rows() + r, c, b.at(r, c));
  return out;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
  detail::require_same_field(a, b);
  Matrix out(a.rows() + b.rows(), a.cols() + b.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(r, c, a.at(r, c));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out.set(a.rows() + r, a.cols() + c, b.at(r, c));
  return out;
}

// Copy of rows [r0, r0+nr) and columns [c0, c0+nc).
inline Matrix submatrix(const Matrix& a, std::size_t r0, std::size_t nr, std::size_t c0,
                        std::size_t nc) {
  if (r0 + nr > a.rows() || c0 + nc > a.cols()) throw ShapeError("submatrix out of range");
  Matrix out(nr, nc, a.field());
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) out.set(r, c, a.at(r0 + r, c0 + c));
  return out;
}

inline Rref rref(Matrix m) {
  const Field f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    std::size_t r = pivot_row;
    while (r < m.rows() && m.at(r, col) == 0) ++r;
    if (r == m.rows()) continue;
    if (r != pivot_row)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        Scalar t = m.at(r, c);
        m.set(r, c, m.at(pivot_row, c));
        m.set(pivot_row, c, t);
      }
    const Scalar inv = f.inv(m.at(pivot_row, col));
    for (std::size_t c = col; c < m.cols(); ++c) m.set(pivot_row, c, f.mul(m.at(pivot_row, c), inv));
    for (std::size_t other = 0; other < m.rows(); ++other) {
      if (other == pivot_row) continue;
      const Scalar factor = m.at(other, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < m.cols(); ++c)
        m.set(other, c, f.sub(m.at(other, c), f.mul(factor, m.at(pivot_row, c))));
    }
    pivots.push_back(col);
    ++pivot_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  return rref(m).pivots.size();
}

// Columns form a basis of {x : m x = 0}.
inline Matrix kernel_basis(const Matrix& m) {
  const Field& f = m.field();
  const Rref red = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : red.pivots) is_pivot[p] = true;
  Matrix basis(m.cols(), m.cols() - red.pivots.size(), f);
  std::size_t k = 0;
  for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    basis.set(free_col, k, 1);
    for (std::size_t i = 0; i < red.pivots.size(); ++i)
      basis.set(red.pivots[i], k, f.neg(red.reduced.at(i, free_col)));
    ++k;
  }
  return basis;
}

// Rows form a basis of {y : y m = 0}; multiplying by it projects onto the
// cokernel of m.
inline Matrix cokernel_projection(const Matrix& m) { return transpose(kernel_basis(transpose(m))); }

inline Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const Rref red = rref(hstack(m, Matrix::identity(n, m.field())));
  if (red.pivots.size() < n || (n > 0 && red.pivots[n - 1] != n - 1))
    throw DomainError("matrix is not invertible");
  return submatrix(red.reduced, 0, n, n, n);
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Field field, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, field.modulus() - 1);
  Matrix m(rows, cols, field);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, dist(rng));
  return m;
}

inline Matrix random_invertible(std::size_t dim, std::mt19937_64& rng, Field field = Field{}) {
  while (true) {
    Matrix m = random_matrix(dim, dim, field, rng);
    if (rank(m) == dim) return m;
  }
}

inline Matrix random_invertible(std::size_t dim, std::uint64_t seed, Field field = Field{}) {
  std::mt19937_64 rng(seed);
  return random_invertible(dim, rng, field);
}

}  // namespace bipath
