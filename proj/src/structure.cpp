#include "qdeform/structure.hpp"

#include <fmt/format.h>

#include "qdeform/algebra.hpp"
#include "qdeform/errors.hpp"

namespace qdeform {

FinDimAlgebra::FinDimAlgebra(std::vector<std::string> labels, std::vector<SparseVec> table, Vec unit,
                             FieldSpec field)
    : labels_(std::move(labels)), table_(std::move(table)), unit_(std::move(unit)), field_(field) {
  if (table_.size() != labels_.size() * labels_.size() || unit_.size() != labels_.size())
    throw Error(ErrorKind::ShapeMismatch, "structure constants do not match the basis size");
}

FinDimAlgebra FinDimAlgebra::from_basis(const AlgebraBasis& basis) {
  const std::size_t n = basis.dim();
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(basis.label(i));
  std::vector<SparseVec> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = basis.product(i, j);
  return FinDimAlgebra(std::move(labels), std::move(table), basis.unit(), basis.field());
}

Vec FinDimAlgebra::multiply(const Vec& a, const Vec& b) const {
  const std::size_t n = dim();
  Vec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      const SparseVec& p = table_[i * n + j];
      if (p.empty()) continue;
      const Scalar c = a[i] * b[j];
      for (const auto& [k, d] : p) r[k] += c * d;
    }
  }
  return r;
}

Vec FinDimAlgebra::one() const { return unit_; }

Matrix FinDimAlgebra::left_matrix(const Vec& a) const {
  Matrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) m.set_column(j, multiply(a, basis_vec(j)));
  return m;
}

Matrix FinDimAlgebra::right_matrix(const Vec& a) const {
  Matrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) m.set_column(j, multiply(basis_vec(j), a));
  return m;
}

std::optional<std::string> FinDimAlgebra::find_axiom_failure() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec x = basis_vec(i);
    if (multiply(unit_, x) != x || multiply(x, unit_) != x)
      return fmt::format("unit fails on {}", labels_[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVec& ij = product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        Vec left(n);
        for (const auto& [m, c] : ij)
          for (const auto& [l, d] : product(m, k)) left[l] += c * d;
        Vec right(n);
        for (const auto& [m, c] : product(j, k))
          for (const auto& [l, d] : product(i, m)) right[l] += c * d;
        if (left != right)
          return fmt::format("associativity fails on ({}, {}, {})", labels_[i], labels_[j], labels_[k]);
      }
    }
  return std::nullopt;
}

void FinDimAlgebra::verify() const {
  if (auto failure = find_axiom_failure()) throw Error(ErrorKind::InvalidAlgebra, *failure);
}

std::string FinDimAlgebra::element_string(const Vec& v) const {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    if (!v[i].is_one()) out += v[i].to_string() + '*';
    out += labels_[i];
  }
  return out.empty() ? "0" : out;
}

}  // namespace qdeform
