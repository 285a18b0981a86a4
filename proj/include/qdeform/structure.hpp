#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdeform/linalg.hpp"

namespace qdeform {

class AlgebraBasis;

/// A finite-dimensional associative unital algebra given by structure
/// constants on a labelled basis.
class FinDimAlgebra {
 public:
  FinDimAlgebra() = default;
  FinDimAlgebra(std::vector<std::string> labels, std::vector<SparseVec> table, Vec unit, FieldSpec field);

  static FinDimAlgebra from_basis(const AlgebraBasis& basis);

  std::size_t dim() const { return labels_.size(); }
  FieldSpec field() const { return field_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  const SparseVec& product(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  Vec multiply(const Vec& a, const Vec& b) const;
  const Vec& unit() const { return unit_; }
  Vec basis_vec(std::size_t i) const { return unit_vec(dim(), i); }
  Vec one() const;

  /// Matrix of x -> a x (columns indexed by the basis).
  Matrix left_matrix(const Vec& a) const;
  /// Matrix of x -> x a.
  Matrix right_matrix(const Vec& a) const;

  /// First violated axiom (associativity on basis triples, unit on basis
  /// elements), if any.
  std::optional<std::string> find_axiom_failure() const;
  /// Throws InvalidAlgebra on a failure.
  void verify() const;

  std::string element_string(const Vec& v) const;

 private:
  std::vector<std::string> labels_;
  std::vector<SparseVec> table_;
  Vec unit_;
  FieldSpec field_;
};

}  // namespace qdeform
