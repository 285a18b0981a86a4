#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdeform/linalg.hpp"
#include "qdeform/quiver.hpp"

namespace qdeform {

inline constexpr std::size_t kDefaultMaxDegree = 30;

/// Rewrite rule lead -> tail, with tail strictly smaller than lead.
struct Rule {
  Path lead;
  FreeElement tail;
};

/// The quotient kQ/I with its standard-monomial basis. Elements of the
/// quotient are dense coordinate vectors over `paths()`.
class AlgebraBasis {
 public:
  const Quiver& quiver() const { return quiver_; }
  FieldSpec field() const { return field_; }
  /// The generating relations the basis was computed from.
  const std::vector<FreeElement>& relations() const { return relations_; }
  std::size_t max_degree() const { return max_degree_; }
  const std::vector<Rule>& rules() const { return rules_; }

  std::size_t dim() const { return paths_.size(); }
  const std::vector<Path>& paths() const { return paths_; }
  const Path& path(std::size_t i) const { return paths_[i]; }
  std::optional<std::size_t> index_of(const Path& p) const;
  std::string label(std::size_t i) const { return path_to_string(quiver_, paths_[i]); }

  /// Rewrites x to a combination of standard monomials.
  FreeElement reduce(const FreeElement& x) const;
  Vec normal_form(const FreeElement& x) const;
  Vec normal_form(const Path& p) const;
  /// The basis expansion of v as an element of kQ.
  FreeElement lift(const Vec& v) const;

  const SparseVec& product(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  Vec multiply(const Vec& a, const Vec& b) const;
  Vec basis_vec(std::size_t i) const { return unit_vec(dim(), i); }
  Vec unit() const;
  /// Indices of the trivial paths, one per vertex in vertex order.
  const std::vector<std::size_t>& trivial_indices() const { return trivial_; }
  /// Index of e_v.
  std::size_t vertex_idempotent(int v) const { return trivial_[static_cast<std::size_t>(v)]; }

  std::string element_string(const Vec& v) const;

 private:
  friend AlgebraBasis compute_basis(const Quiver&, const std::vector<FreeElement>&, FieldSpec,
                                    std::size_t);

  Quiver quiver_;
  FieldSpec field_;
  std::vector<FreeElement> relations_;
  std::size_t max_degree_ = kDefaultMaxDegree;
  std::vector<Rule> rules_;
  std::vector<Path> paths_;
  std::map<Path, std::size_t, DeglexLess> index_;
  std::vector<SparseVec> table_;
  std::vector<std::size_t> trivial_;
};

/// Completes the relations to a rewrite system under DeglexLess and
/// enumerates the standard monomials. Throws NotFiniteDimensional when a
/// standard monomial of length max_degree exists, InconsistentRelation when
/// a relation mixes endpoints or forces a trivial path into the ideal.
AlgebraBasis compute_basis(const Quiver& quiver, const std::vector<FreeElement>& relations,
                           FieldSpec field, std::size_t max_degree = kDefaultMaxDegree);

/// Shape check for user-supplied (Q, I): at least one vertex, every term of
/// every relation a path of length >= 2, common endpoints per relation.
void validate_input_presentation(const Quiver& quiver, const std::vector<FreeElement>& relations);

Vec normal_form(const FreeElement& x, const AlgebraBasis& basis);
Vec multiply(const Vec& a, const Vec& b, const AlgebraBasis& basis);
std::vector<Path> decompose_unit(const AlgebraBasis& basis);

/// Both ideals contain each other's generators (quotient comparison through
/// the rewrite systems of each side).
bool same_ideal(const AlgebraBasis& a, const AlgebraBasis& b);

}  // namespace qdeform
