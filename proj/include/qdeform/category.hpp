#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdeform/deformation.hpp"
#include "qdeform/linalg.hpp"
#include "qdeform/report.hpp"

namespace qdeform {

/// A finite-dimensional left A_f-module: one action matrix per basis
/// element of A_f, in the DeformedAlgebra basis order.
struct ConcreteModule {
  std::size_t dim = 0;
  std::vector<Matrix> action;
};

/// Matrix by which an arbitrary element of A (given by `actions` on the
/// basis of A) acts.
Matrix act(const std::vector<Matrix>& actions, const Vec& a, std::size_t dim);

/// An A_f-module as a uple (M0, M1, T, f_M): A-modules M0, M1 by action
/// matrices over the basis of A, T: M0 -> M1, and f_M(a ⊗ -) as one
/// dim M1 x dim M0 matrix per basis element a.
struct UpleModule {
  std::size_t dim0 = 0;
  std::size_t dim1 = 0;
  std::vector<Matrix> act0;
  std::vector<Matrix> act1;
  Matrix T;
  std::vector<Matrix> fM;
};

/// (u0, u1, u2): u0: M0 -> N0, u1: M0 -> N1, u2: M1 -> N1.
struct MorphismTriple {
  Matrix u0;
  Matrix u1;
  Matrix u2;
};

/// Checks the module axioms (unit, compatibility with the products of A_f
/// on all basis pairs).
std::optional<std::string> module_failure(const ConcreteModule& m, const DeformedAlgebra& d);
/// A-module axioms, A-linearity and injectivity of T, and the twisted
/// compatibility of f_M on all basis pairs.
std::optional<std::string> uple_failure(const UpleModule& u, const DeformedAlgebra& d);
/// A-linearity of u0, u2, the commuting square and the twisted condition on u1.
std::optional<std::string> triple_failure(const MorphismTriple& t, const UpleModule& from, const UpleModule& to,
                                          const DeformedAlgebra& d);

/// F(u) on M0 ⊕ M1 with (a, b)(m0, m1) = (a m0, a m1 + b T m0 + f_M(a ⊗ m0)).
/// Throws InvalidModule when u is not a valid uple.
ConcreteModule functor_F(const UpleModule& u, const DeformedAlgebra& d);
/// F on morphisms: the block matrix [[u0, 0], [u1, u2]].
Matrix functor_F(const MorphismTriple& t);

/// Reconstructs a uple: T = action of (0, 1), M1 = Ker T, M0 the greedy
/// complement of M1 by standard basis vectors. `change_of_basis` (if given)
/// receives S with columns (basis of M0, basis of M1) in the coordinates of M.
UpleModule uple_from_module(const ConcreteModule& m, const DeformedAlgebra& d, Matrix* change_of_basis = nullptr);

/// (v0 u0, v2 u1 + v1 u0, v2 u2).
MorphismTriple compose_triples(const MorphismTriple& v, const MorphismTriple& u);
MorphismTriple identity_triple(const UpleModule& u);

/// Regular uple (A, A, Id, f).
UpleModule regular_uple(const DeformedAlgebra& d);
/// Regular module of A_f.
ConcreteModule regular_module(const DeformedAlgebra& d);

/// An explicit isomorphism triple from u to uple_from_module(functor_F(u)),
/// verified together with its inverse; nullopt if the construction fails.
std::optional<MorphismTriple> roundtrip_isomorphism(const UpleModule& u, const DeformedAlgebra& d,
                                                    UpleModule* reconstructed = nullptr);

/// Module from the action of generators: labels "e(v)" for vertices, arrow
/// ids, and "t" for (0, 1). Throws InvalidModule when the data does not
/// define an A_f-module.
ConcreteModule module_from_generators(const std::vector<std::pair<std::string, Matrix>>& actions, std::size_t dim,
                                      const DeformedAlgebra& d);

/// Reconstruction report used by the module-roundtrip command.
Report module_roundtrip_report(const ConcreteModule& m, const DeformedAlgebra& d);

}  // namespace qdeform
