#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdeform/algebra.hpp"
#include "qdeform/deformation.hpp"
#include "qdeform/hochschild.hpp"
#include "qdeform/linalg.hpp"
#include "qdeform/report.hpp"
#include "qdeform/structure.hpp"

namespace qdeform {

/// A bimodule over (L, R) given by action matrices: left[i] is the action of
/// the i-th basis element of L, and m·r = right[j] m for the j-th basis
/// element r of R.
struct Bimodule {
  std::size_t dim = 0;
  std::vector<Matrix> left;
  std::vector<Matrix> right;

  Vec act_left(const Vec& a, const Vec& m) const;
  Vec act_right(const Vec& m, const Vec& r) const;
  Matrix left_matrix(const Vec& a) const;
  Matrix right_matrix(const Vec& r) const;
};

std::optional<std::string> bimodule_failure(const Bimodule& m, const FinDimAlgebra& left, const FinDimAlgebra& right);
Bimodule regular_bimodule(const FinDimAlgebra& a);

/// Bilinear map X x Y -> target, tabulated on basis pairs (x * dim_y + y).
struct Pairing {
  std::size_t dim_x = 0;
  std::size_t dim_y = 0;
  std::size_t target_dim = 0;
  std::vector<Vec> table;

  Vec operator()(const Vec& x, const Vec& y) const;
  const Vec& at(std::size_t x, std::size_t y) const { return table[x * dim_y + y]; }
};

/// P an A-B bimodule, Q a B-A bimodule, <,>_A: P x Q -> A, <,>_B: Q x P -> B,
/// 1_A = sum <p'_j, q'_j>_A over gens_A = (p'_j, q'_j) and
/// 1_B = sum <q_k, p_k>_B over gens_B = (q_k, p_k).
struct MoritaContext {
  FinDimAlgebra A;
  FinDimAlgebra B;
  Bimodule P;
  Bimodule Q;
  Pairing pair_A;
  Pairing pair_B;
  std::vector<std::pair<Vec, Vec>> gens_A;
  std::vector<std::pair<Vec, Vec>> gens_B;
};

/// All context axioms: algebras, bimodules, pairings as balanced bimodule maps
/// inducing P ⊗_B Q ≅ A and Q ⊗_A P ≅ B, the two associativity conditions,
/// the unit decompositions and the generator identities for P and Q.
Report verify_context(const MoritaContext& ctx);
/// Throws InvalidContext naming the first failed check.
void require_valid(const MoritaContext& ctx);

/// The same context read from the B side: (B, A, Q, P) with gens exchanged.
MoritaContext swapped(const MoritaContext& ctx);

MoritaContext identity_context(const FinDimAlgebra& a);
/// B = M_n(A) with basis E_kl ⊗ γ, P = rows, Q = columns.
MoritaContext matrix_context(const FinDimAlgebra& a, std::size_t n);
/// B = eAe for e the sum of the listed vertices, P = Ae, Q = eA. Throws
/// NotFullIdempotent when AeA != A.
MoritaContext idempotent_context(const AlgebraBasis& basis, const std::vector<std::string>& vertices);

/// Adds n - 1 copies v_k of every vertex v with arrows c_v_k: v -> v_k,
/// d_v_k: v_k -> v and relations c_v_k*d_v_k = e(v), d_v_k*c_v_k = e(v_k).
/// The resulting algebra is M_n(A), and the original vertices form a full
/// idempotent.
Presentation amplify_presentation(const Presentation& pres, std::size_t n);

/// phi^n(f)(b_1..b_n) = sum <q_i0, f(<p_i0, b_1 q_i1>_A, .., <p_i(n-1), b_n q_in>_A) p_in>_B,
/// for f of degree n in {1, 2, 3} on A.
FullCochain transfer_phi(const MoritaContext& ctx, const FullCochain& f, int n);
/// The mirror map from cochains on B to cochains on A built from gens_A.
FullCochain transfer_psi(const MoritaContext& ctx, const FullCochain& g, int n);
/// h^{n+1}: cochains of degree n + 1 on A to degree n, n in {1, 2}.
FullCochain homotopy_h(const MoritaContext& ctx, const FullCochain& f, int n);
/// The single summand h_r^{n+1}, 1 <= r <= n + 1.
FullCochain homotopy_term(const MoritaContext& ctx, const FullCochain& f, int n, int r);

/// A_f as a structure-constant algebra: basis (γ, 0) followed by (0, γ).
FinDimAlgebra deformed_structure(const FinDimAlgebra& a, const FullCochain& f);

/// Bimodule uple (M0, M1, T, f_M, g_M) over L_f and R_g. f[i] is
/// f_M(l_i ⊗ -): M0 -> M1 and g[j] is g_M(- ⊗ r_j): M0 -> M1.
struct DeformedBimodule {
  Bimodule M0;
  Bimodule M1;
  Matrix T;
  std::vector<Matrix> f;
  std::vector<Matrix> g;
};

/// Checks the bimodule structures, T, and the three twisting equations:
/// the left uple condition against fL, the right one against gR, and the
/// compatibility of f_M with g_M.
Report deformed_bimodule_report(const DeformedBimodule& m, const FinDimAlgebra& L, const FullCochain& fL,
                                const FinDimAlgebra& R, const FullCochain& gR);
/// The underlying bimodule over (L_f, R_g) on M0 ⊕ M1.
Bimodule realize(const DeformedBimodule& m, const FinDimAlgebra& L, const FinDimAlgebra& R);

/// P̂ = (P, P, Id, f_P, g_P) over (A_f, B_g) with g = phi^2(f). Throws
/// CharTwoUnsupported in characteristic 2.
DeformedBimodule build_hat_P(const MoritaContext& ctx, const FullCochain& f);
/// Q̂ = (Q, Q, Id, g_Q, f_Q) over (B_g, A_f).
DeformedBimodule build_hat_Q(const MoritaContext& ctx, const FullCochain& f);

/// X ⊗_M Y as the quotient of X ⊗_k Y by xm ⊗ y - x ⊗ my. `projection` maps
/// X ⊗_k Y coordinates (x * dim Y + y) to coordinates of `module`, whose
/// basis is the image of the pure tensors listed in `representatives`.
struct TensorProduct {
  Bimodule module;
  Matrix projection;
  std::vector<std::size_t> representatives;
};
TensorProduct tensor_over(const Bimodule& X, const Bimodule& Y);

/// Builds P̂ and Q̂, checks them, and checks that P̂ ⊗_{B_g} Q̂ ≅ A_f and
/// Q̂ ⊗_{A_f} P̂ ≅ B_g through the explicit morphism w = (w0, w1, w2) and its
/// inverse. Throws CharTwoUnsupported in characteristic 2.
Report verify_morita_deformed(const MoritaContext& ctx, const FullCochain& f);

}  // namespace qdeform
