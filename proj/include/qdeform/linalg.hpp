#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdeform/scalar.hpp"

namespace qdeform {

using Vec = std::vector<Scalar>;
/// Sparse vector: (index, coefficient) pairs with nonzero coefficients.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

SparseVec to_sparse(const Vec& v);

Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero(const Vec& v);
/// y += a * x
void axpy(Vec& y, const Scalar& a, const Vec& x);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scale(const Scalar& a, const Vec& x);
Vec concat(const Vec& x, const Vec& y);
std::string vec_to_string(const Vec& v);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_columns(std::size_t rows, const std::vector<Vec>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec column(std::size_t c) const;
  void set_column(std::size_t c, const Vec& v);

  Vec apply(const Vec& x) const;
  Matrix transpose() const;
  bool is_zero() const;
  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Incremental row echelon form over a fixed ambient dimension.
///
/// Stored rows have distinct pivots and each is reduced against the rows
/// inserted before it, so a single forward pass reduces any vector. With
/// tracking enabled every stored row remembers its expression in terms of
/// the inserted vectors, which gives solutions and kernel relations.
class Echelon {
 public:
  explicit Echelon(std::size_t dim, bool track = false) : dim_(dim), track_(track) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return inserted_; }

  /// Returns true when v was independent of everything inserted so far. For a
  /// dependent vector with tracking on, `relation` receives coefficients c
  /// over all inserted vectors (including this one, with c = 1) summing to 0.
  bool insert(const Vec& v, Vec* relation = nullptr);

  /// Residue of v after elimination; zero iff v lies in the span.
  Vec reduce(const Vec& v) const;
  bool contains(const Vec& v) const;

  /// Coefficients over the inserted vectors whose combination equals v.
  /// Requires tracking.
  std::optional<Vec> express(const Vec& v) const;

  /// Pivot column of each stored row, in insertion order.
  std::vector<std::size_t> pivots() const;

 private:
  struct Row {
    Vec v;
    std::size_t pivot;
    Vec combo;
  };

  Vec reduce_tracked(const Vec& v, Vec* coeffs) const;

  std::size_t dim_;
  bool track_;
  std::size_t inserted_ = 0;
  std::vector<Row> rows_;
};

std::size_t rank(const Matrix& m);
/// Basis of {x : m x = 0}.
std::vector<Vec> nullspace(const Matrix& m);
/// Some x with m x = b, if one exists.
std::optional<Vec> solve(const Matrix& m, const Vec& b);
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace qdeform
