#include "qdeform/linalg.hpp"

#include <fmt/format.h>

#include "qdeform/errors.hpp"

namespace qdeform {

Vec zero_vec(std::size_t n) { return Vec(n); }

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = Scalar(1);
  return v;
}

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(i, v[i]);
  return s;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

void axpy(Vec& y, const Scalar& a, const Vec& x) {
  if (a.is_zero()) return;
  if (y.size() < x.size()) y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
}

Vec add(const Vec& x, const Vec& y) {
  Vec r = x;
  axpy(r, Scalar(1), y);
  return r;
}

Vec sub(const Vec& x, const Vec& y) {
  Vec r = x;
  axpy(r, Scalar(-1), y);
  return r;
}

Vec scale(const Scalar& a, const Vec& x) {
  Vec r(x.size());
  axpy(r, a, x);
  return r;
}

Vec concat(const Vec& x, const Vec& y) {
  Vec r = x;
  r.insert(r.end(), y.begin(), y.end());
  return r;
}

std::string vec_to_string(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += v[i].to_string();
  }
  return out + "]";
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vec>& columns) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void Matrix::set_column(std::size_t c, const Vec& v) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = r < v.size() ? v[r] : Scalar();
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_)
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("matrix with {} columns applied to vector of length {}", cols_, x.size()));
  Vec y(rows_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (x[c].is_zero()) continue;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Scalar& a = (*this)(r, c);
      if (!a.is_zero()) y[r] += a * x[c];
    }
  }
  return y;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_)
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("cannot multiply {}x{} by {}x{}", a.rows_, a.cols_, b.rows_, b.cols_));
  Matrix p(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& y = b(k, j);
        if (!y.is_zero()) p(i, j) += x * y;
      }
    }
  return p;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorKind::ShapeMismatch, "matrix sum of different shapes");
  Matrix s = a;
  for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] += b.data_[i];
  return s;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + Scalar(-1) * b; }

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix r = a;
  for (auto& x : r.data_) x *= s;
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Vec Echelon::reduce_tracked(const Vec& v, Vec* coeffs) const {
  Vec r = v;
  r.resize(dim_);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Row& row = rows_[k];
    if (r[row.pivot].is_zero()) continue;
    const Scalar c = r[row.pivot];
    axpy(r, -c, row.v);
    if (coeffs != nullptr) (*coeffs)[k] += c;
  }
  return r;
}

bool Echelon::insert(const Vec& v, Vec* relation) {
  Vec coeffs(rows_.size());
  Vec r = reduce_tracked(v, track_ ? &coeffs : nullptr);
  const std::size_t index = inserted_++;
  std::size_t pivot = 0;
  while (pivot < dim_ && r[pivot].is_zero()) ++pivot;
  if (pivot == dim_) {
    if (track_ && relation != nullptr) {
      // v - sum coeffs_k row_k = 0, and row_k = sum combo_k[j] inserted_j
      Vec rel(inserted_);
      rel[index] = Scalar(1);
      for (std::size_t k = 0; k < rows_.size(); ++k) axpy(rel, -coeffs[k], rows_[k].combo);
      *relation = std::move(rel);
    }
    return false;
  }
  const Scalar inv = invert(r[pivot]);
  for (auto& x : r) x *= inv;
  Row row{std::move(r), pivot, {}};
  if (track_) {
    // new row = inv * (v - sum coeffs_k row_k)
    Vec combo(inserted_);
    combo[index] = Scalar(1);
    for (std::size_t k = 0; k < rows_.size(); ++k) axpy(combo, -coeffs[k], rows_[k].combo);
    for (auto& x : combo) x *= inv;
    row.combo = std::move(combo);
  }
  rows_.push_back(std::move(row));
  return true;
}

Vec Echelon::reduce(const Vec& v) const { return reduce_tracked(v, nullptr); }

bool Echelon::contains(const Vec& v) const { return is_zero(reduce(v)); }

std::optional<Vec> Echelon::express(const Vec& v) const {
  if (!track_) throw std::logic_error("Echelon::express needs tracking");
  Vec coeffs(rows_.size());
  Vec r = reduce_tracked(v, &coeffs);
  if (!is_zero(r)) return std::nullopt;
  Vec out(inserted_);
  for (std::size_t k = 0; k < rows_.size(); ++k) axpy(out, coeffs[k], rows_[k].combo);
  out.resize(inserted_);
  return out;
}

std::vector<std::size_t> Echelon::pivots() const {
  std::vector<std::size_t> p;
  p.reserve(rows_.size());
  for (const auto& row : rows_) p.push_back(row.pivot);
  return p;
}

std::size_t rank(const Matrix& m) {
  Echelon e(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) e.insert(m.row(r));
  return e.rank();
}

std::vector<Vec> nullspace(const Matrix& m) {
  Echelon e(m.rows(), true);
  std::vector<Vec> basis;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Vec rel;
    if (!e.insert(m.column(c), &rel)) {
      rel.resize(m.cols());
      basis.push_back(std::move(rel));
    }
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  Echelon e(m.rows(), true);
  for (std::size_t c = 0; c < m.cols(); ++c) e.insert(m.column(c));
  auto x = e.express(b);
  if (x) x->resize(m.cols());
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  Echelon e(n, true);
  for (std::size_t c = 0; c < n; ++c)
    if (!e.insert(m.column(c))) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = e.express(unit_vec(n, i));
    x->resize(n);
    inv.set_column(i, *x);
  }
  return inv;
}

}  // namespace qdeform
