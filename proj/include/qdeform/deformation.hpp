#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdeform/algebra.hpp"
#include "qdeform/hochschild.hpp"
#include "qdeform/report.hpp"
#include "qdeform/structure.hpp"

namespace qdeform {

/// Element a + b t of A_f, written (a, b).
struct DeformedElement {
  Vec a;
  Vec b;

  friend bool operator==(const DeformedElement&, const DeformedElement&) = default;
};

/// A_f = A ⊕ A t with (a0, b0)(a1, b1) = (a0 a1, a0 b1 + b0 a1 + f(a0 ⊗ a1)).
/// Basis: (γ, 0) at index i and (0, γ) at index dim A + i.
class DeformedAlgebra {
 public:
  /// Throws InvalidCochain when f is not a well-formed reduced 2-cochain.
  /// Associativity is not enforced here; see associativity_failure().
  DeformedAlgebra(AlgebraBasis basis, Cochain f);

  const AlgebraBasis& basis() const { return basis_; }
  const Cochain& cocycle() const { return f_; }
  const FullCochain& full_cocycle() const { return full_; }
  std::size_t dim() const { return 2 * basis_.dim(); }

  DeformedElement multiply(const DeformedElement& x, const DeformedElement& y) const;
  DeformedElement element(std::size_t index) const;
  DeformedElement one() const;
  Vec pack(const DeformedElement& x) const { return concat(x.a, x.b); }
  DeformedElement unpack(const Vec& v) const;

  /// Structure constants on the basis above, labels "γ" and "t*γ".
  FinDimAlgebra structure() const;
  std::optional<std::string> associativity_failure() const;

 private:
  AlgebraBasis basis_;
  Cochain f_;
  FullCochain full_;
};

DeformedElement deformed_multiply(const DeformedElement& x, const DeformedElement& y, const DeformedAlgebra& d);

/// f̂ on kQ: a path α1⋯αs maps to Σ_{i<s} f(ᾱ1⋯ᾱi ⊗ ᾱ_{i+1}) ᾱ_{i+2}⋯ᾱs.
Vec hat_f(const FreeElement& w, const AlgebraBasis& basis, const Cochain& f);

/// First basis path α1⋯αs for which (ᾱ1, 0)⋯(ᾱs, 0) != (w̄, f̂(w)) in A_f.
std::optional<std::string> path_product_failure(const DeformedAlgebra& d);

/// An element u·ρ·v of the ideal with u, v basis paths and ρ a generator.
struct IdealMultiple {
  std::size_t left;
  std::size_t generator;
  std::size_t right;
  FreeElement element;
};

/// Ideal multiples within the degree bound; the generators themselves
/// (u, v trivial) come first, in generator order.
std::vector<IdealMultiple> ideal_multiples(const AlgebraBasis& basis);

struct ImageCondition {
  bool holds = false;
  std::size_t image_rank = 0;
  std::size_t hat_rank = 0;
  /// For each spanning value of Im f: an ideal element x with f̂(x) equal to it.
  std::vector<std::pair<Vec, FreeElement>> witnesses;
};

/// Whether span{f(γ ⊗ δ)} lies in span f̂(u·ρ·v).
ImageCondition check_image_condition(const AlgebraBasis& basis, const Cochain& f);

/// A cohomologous cocycle satisfying the image condition (f itself when it
/// already does), built through the comparison maps between the bar and
/// the small resolution. Throws NormalizationFailed if the result does not
/// verify.
Cochain normalize_cocycle(const AlgebraBasis& basis, const Cochain& f);

enum class RelationKind { Input, Square, Commute, Lift };
std::string_view relation_kind_name(RelationKind kind);
std::optional<RelationKind> relation_kind_from_name(std::string_view name);

/// A quiver with relations, optionally tagged with their origin.
struct Presentation {
  Quiver quiver;
  FieldSpec field;
  std::vector<FreeElement> relations;
  std::vector<RelationKind> kinds;

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

inline constexpr std::string_view kDeformationTag = "deformation";

/// ε_i: either the new loop at i or a combination Σ μ_j ρ̂_j with
/// e_i = f̂(Σ μ_j ρ_j).
struct EpsilonEntry {
  int vertex = 0;
  bool is_arrow = false;
  int arrow = -1;
  std::vector<std::pair<FreeElement, Scalar>> combination;
  /// ε_i as an element of kQ_f.
  FreeElement element;
};

struct DeformedPresentation {
  Presentation presentation;
  std::vector<EpsilonEntry> epsilons;
  /// The relations ρ used for the lift relations: the input generators,
  /// followed by any ideal multiples an ε needed.
  std::vector<FreeElement> generators;
  bool used_ideal_multiples = false;
};

/// (Q_f, I_f). Throws NotACocycle, ImageConditionFailed (normalize first) or
/// EpsilonUnresolvable.
DeformedPresentation build_presentation(const AlgebraBasis& basis, const Cochain& f);

/// The map π: kQ_f -> A_f, π(e_i) = (e_i, 0), π(α) = (ᾱ, 0), π(ε loop at i) = (0, e_i).
DeformedElement project(const FreeElement& x, const Presentation& pres, const DeformedAlgebra& d);

/// Dimension, π-kernel and independence checks of the presentation theorem.
Report verify_presentation(const AlgebraBasis& basis, const Cochain& f, const DeformedPresentation& pres);

/// Replaces the relations by the reduced rewrite system of the ideal.
Presentation interreduce(const Presentation& pres, std::size_t max_degree = kDefaultMaxDegree);

/// φ(a, b) = (a, b + σ g(a)) from A_f to A_f', with d g = f - f'.
struct Equivalence {
  Cochain g;
  int sign = 1;
  /// Matrix of φ on the basis of A_f.
  Matrix map;
};

/// nullopt when f and f' are not cohomologous; throws SignResolutionFailed
/// when neither sign makes φ multiplicative.
std::optional<Equivalence> deformation_equivalence(const Cochain& f, const Cochain& f2,
                                                   const AlgebraBasis& basis);

/// φ multiplicative on every pair of basis elements.
bool verify_equivalence(const Equivalence& e, const DeformedAlgebra& from, const DeformedAlgebra& to);

}  // namespace qdeform
