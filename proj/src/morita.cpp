#include "qdeform/morita.hpp"

#include <fmt/format.h>

#include <array>
#include <functional>
#include <stdexcept>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

Vec apply_sum(const std::vector<Matrix>& actions, const Vec& coeffs, const Vec& m) {
  Vec out(actions.empty() ? m.size() : actions.front().rows());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (!coeffs[i].is_zero()) axpy(out, coeffs[i], actions[i].apply(m));
  return out;
}

Matrix matrix_sum(const std::vector<Matrix>& actions, const Vec& coeffs, std::size_t rows, std::size_t cols) {
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (!coeffs[i].is_zero()) out = out + coeffs[i] * actions[i];
  return out;
}

Vec dense(const SparseVec& v, std::size_t dim) {
  Vec out(dim);
  for (const auto& [k, c] : v) out[k] += c;
  return out;
}

Scalar half(FieldSpec field) {
  if (field.characteristic == 2)
    throw Error(ErrorKind::CharTwoUnsupported, "the deformed bimodules need 1/2, which does not exist in F2");
  return Scalar::from_rational(mpq_class(1, 2)).in_field(field);
}

void check_cochain(const FullCochain& f, int degree, std::size_t dim, std::string_view what) {
  if (f.degree() != degree || f.dim() != dim)
    throw Error(ErrorKind::InvalidCochain,
                fmt::format("{} expects a {}-cochain on an algebra of dimension {}", what, degree, dim));
}

// Adds coeff * f(args) into out, args given sparsely.
void accumulate(const FullCochain& f, const std::vector<const SparseVec*>& args, const Scalar& coeff, Vec& out) {
  const std::size_t dim = f.dim();
  auto rec = [&](auto&& self, std::size_t pos, std::size_t flat, const Scalar& c) -> void {
    if (pos == args.size()) {
      axpy(out, c, f.at(flat));
      return;
    }
    for (const auto& [k, x] : *args[pos]) self(self, pos + 1, flat * dim + k, c * x);
  };
  rec(rec, 0, 0, coeff);
}

Vec eval(const FullCochain& f, const std::vector<Vec>& args) { return f.evaluate(args); }

Pairing make_pairing(std::size_t dx, std::size_t dy, std::size_t target, const std::function<Vec(std::size_t, std::size_t)>& value) {
  Pairing p{dx, dy, target, {}};
  p.table.reserve(dx * dy);
  for (std::size_t x = 0; x < dx; ++x)
    for (std::size_t y = 0; y < dy; ++y) p.table.push_back(value(x, y));
  return p;
}

// Checks stated for the A side of a context; the B side is the same list on swapped(ctx).
void half_checks(const MoritaContext& c, const std::array<std::string, 4>& n, Report& report) {
  const auto& [A, B, P, Q] = n;
  const std::size_t dA = c.A.dim();
  const std::size_t dP = c.P.dim;
  const std::size_t dQ = c.Q.dim;

  auto algebra_bad = c.A.find_axiom_failure();
  report.add(A + ".algebra", !algebra_bad, algebra_bad.value_or(fmt::format("dimension {}", dA)));
  auto bimod_bad = bimodule_failure(c.P, c.A, c.B);
  report.add(P + ".bimodule", !bimod_bad, bimod_bad.value_or(fmt::format("{}-{} bimodule of dimension {}", A, B, dP)));
  if (algebra_bad || bimod_bad) return;

  std::string balanced;
  for (std::size_t x = 0; x < dP && balanced.empty(); ++x)
    for (std::size_t y = 0; y < dQ && balanced.empty(); ++y) {
      const Vec ex = unit_vec(dP, x);
      const Vec ey = unit_vec(dQ, y);
      for (std::size_t a = 0; a < dA && balanced.empty(); ++a) {
        const Vec ea = c.A.basis_vec(a);
        if (c.pair_A(c.P.act_left(ea, ex), ey) != c.A.multiply(ea, c.pair_A(ex, ey)))
          balanced = fmt::format("<a p, q> != a <p, q> at a = {}", c.A.label(a));
        else if (c.pair_A(ex, c.Q.act_right(ey, ea)) != c.A.multiply(c.pair_A(ex, ey), ea))
          balanced = fmt::format("<p, q a> != <p, q> a at a = {}", c.A.label(a));
      }
      for (std::size_t b = 0; b < c.B.dim() && balanced.empty(); ++b) {
        const Vec eb = c.B.basis_vec(b);
        if (c.pair_A(c.P.act_right(ex, eb), ey) != c.pair_A(ex, c.Q.act_left(eb, ey)))
          balanced = fmt::format("<p b, q> != <p, b q> at b = {}", c.B.label(b));
      }
    }
  report.add("pairing_" + A + ".balanced", balanced.empty(), balanced.empty() ? "bimodule map, balanced over " + B : balanced);

  const TensorProduct t = tensor_over(c.P, c.Q);
  Matrix induced(dA, t.module.dim);
  for (std::size_t z = 0; z < t.module.dim; ++z)
    induced.set_column(z, c.pair_A.at(t.representatives[z] / dQ, t.representatives[z] % dQ));
  const bool iso = t.module.dim == dA && rank(induced) == dA;
  report.add("pairing_" + A + ".iso", iso,
             fmt::format("dim {} ⊗_{} {} = {}, rank of the induced map = {}, dim {} = {}", P, B, Q, t.module.dim,
                         rank(induced), A, dA));

  std::string assoc;
  for (std::size_t x = 0; x < dP && assoc.empty(); ++x)
    for (std::size_t y = 0; y < dQ && assoc.empty(); ++y)
      for (std::size_t x2 = 0; x2 < dP && assoc.empty(); ++x2) {
        const Vec ex = unit_vec(dP, x), ey = unit_vec(dQ, y), ex2 = unit_vec(dP, x2);
        if (c.P.act_left(c.pair_A(ex, ey), ex2) != c.P.act_right(ex, c.pair_B(ey, ex2)))
          assoc = fmt::format("<x, y>_{} x' != x <y, x'>_{} on basis ({}, {}, {})", A, B, x, y, x2);
      }
  report.add("assoc_" + P, assoc.empty(), assoc.empty() ? "checked on all basis triples" : assoc);

  Vec one(dA);
  for (const auto& [p, q] : c.gens_A) one = add(one, c.pair_A(p, q));
  report.add("unit_" + A, one == c.A.unit(), fmt::format("1_{} = sum of {} pairings", A, c.gens_A.size()));

  std::string gens;
  for (std::size_t x = 0; x < dP && gens.empty(); ++x) {
    const Vec ex = unit_vec(dP, x);
    Vec right_form(dP);
    for (const auto& [p, q] : c.gens_A) right_form = add(right_form, c.P.act_right(p, c.pair_B(q, ex)));
    Vec left_form(dP);
    for (const auto& [q, p] : c.gens_B) left_form = add(left_form, c.P.act_left(c.pair_A(ex, q), p));
    if (right_form != ex || left_form != ex) gens = fmt::format("basis element {} of {} is not recovered", x, P);
  }
  report.add("generators_" + P, gens.empty(), gens.empty() ? "every basis element is recovered from both generator families" : gens);
}

// A bimodule uple over L_f with a common T for both sides.
struct BiUple {
  std::size_t dim0 = 0;
  std::size_t dim1 = 0;
  Matrix T;
  std::vector<Matrix> l0, l1, r0, r1, f, g;
};

std::optional<std::string> morphism_failure(const Matrix& u0, const Matrix& u1, const Matrix& u2, const BiUple& from,
                                            const BiUple& to) {
  if (to.T * u0 != u2 * from.T) return std::string("square does not commute");
  for (std::size_t i = 0; i < from.l0.size(); ++i) {
    if (u0 * from.l0[i] != to.l0[i] * u0 || u0 * from.r0[i] != to.r0[i] * u0)
      return fmt::format("w0 is not linear at basis element {}", i);
    if (u2 * from.l1[i] != to.l1[i] * u2 || u2 * from.r1[i] != to.r1[i] * u2)
      return fmt::format("w2 is not linear at basis element {}", i);
    if (u1 * from.l0[i] != to.l1[i] * u1 - u2 * from.f[i] + to.f[i] * u0)
      return fmt::format("left twisting condition fails at basis element {}", i);
    if (u1 * from.r0[i] != to.r1[i] * u1 - u2 * from.g[i] + to.g[i] * u0)
      return fmt::format("right twisting condition fails at basis element {}", i);
  }
  return std::nullopt;
}

// Matrix W with W * inputs[k] = outputs[k] for all k, if the inputs span
// their space and the data is consistent.
std::optional<Matrix> fit_linear(std::size_t in_dim, std::size_t out_dim, const std::vector<Vec>& inputs,
                                 const std::vector<Vec>& outputs) {
  Echelon e(in_dim);
  std::vector<Vec> basis_in, basis_out;
  for (std::size_t k = 0; k < inputs.size(); ++k)
    if (e.insert(inputs[k])) {
      basis_in.push_back(inputs[k]);
      basis_out.push_back(outputs[k]);
    }
  if (basis_in.size() != in_dim) return std::nullopt;
  const auto inv = inverse(Matrix::from_columns(in_dim, basis_in));
  if (!inv) return std::nullopt;
  const Matrix W = Matrix::from_columns(out_dim, basis_out) * *inv;
  for (std::size_t k = 0; k < inputs.size(); ++k)
    if (W.apply(inputs[k]) != outputs[k]) return std::nullopt;
  return W;
}

Matrix blocks(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  Matrix m(a.rows() + c.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) m(a.rows() + i, j) = c(i, j);
    for (std::size_t j = 0; j < d.cols(); ++j) m(a.rows() + i, c.cols() + j) = d(i, j);
  }
  return m;
}

Vec kron(const Vec& x, const Vec& y) {
  Vec out(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!y[j].is_zero()) out[i * y.size() + j] = x[i] * y[j];
  }
  return out;
}

// P̂ ⊗_{R_g} Q̂ ≅ L_f for the context c, where X is the L-R uple and Y the R-L one.
void tensor_checks(const MoritaContext& c, const DeformedBimodule& X, const DeformedBimodule& Y, const FullCochain& fL,
                   const std::string& prefix, Report& report) {
  const FinDimAlgebra& L = c.A;
  const FinDimAlgebra& R = c.B;
  const std::size_t nL = L.dim();
  const FinDimAlgebra Lf = deformed_structure(L, fL);
  const Bimodule Xr = realize(X, L, R);
  const Bimodule Yr = realize(Y, R, L);
  const TensorProduct tp = tensor_over(Xr, Yr);
  const Bimodule& Z = tp.module;
  const std::size_t dX = X.M0.dim;
  const std::size_t dY = Y.M0.dim;

  report.add(prefix + ".dimension", Z.dim == 2 * nL, fmt::format("dim = {}, dim of the deformed algebra = {}", Z.dim, 2 * nL));
  if (Z.dim != 2 * nL) return;

  auto hat = [](const Vec& m0, const Vec& m1) { return concat(m0, m1); };
  auto proj = [&](const Vec& xh, const Vec& yh) { return tp.projection.apply(kron(xh, yh)); };
  auto twist = [](const std::vector<Matrix>& t, const Vec& coeffs, const Vec& m) { return apply_sum(t, coeffs, m); };
  const Vec tunit = concat(Vec(nL), L.unit());
  const Matrix T = Z.left_matrix(tunit);
  report.add(prefix + ".central", T == Z.right_matrix(tunit), "(0,1) acts equally on both sides");

  // Z0 is spanned by s(x, y), Z1 = Ker T by (x, 0) ⊗ (0, y).
  auto z0_lift = [&](const Vec& x) {
    Vec corr(dX);
    for (const auto& [xp, yp] : c.gens_A) corr = add(corr, twist(X.g, c.pair_B(yp, x), xp));
    return corr;
  };
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<Vec> s_vecs, t_vecs;
  for (std::size_t x = 0; x < dX; ++x)
    for (std::size_t y = 0; y < dY; ++y) {
      const Vec ex = unit_vec(dX, x), ey = unit_vec(dY, y);
      pairs.emplace_back(x, y);
      s_vecs.push_back(proj(hat(ex, z0_lift(ex)), hat(ey, Vec(dY))));
      t_vecs.push_back(proj(hat(ex, Vec(dX)), hat(Vec(dY), ey)));
    }
  const std::vector<Vec> kernel = nullspace(T);
  bool kernel_ok = true;
  Echelon e1(Z.dim);
  for (const auto& t : t_vecs) {
    kernel_ok = kernel_ok && qdeform::is_zero(T.apply(t));
    e1.insert(t);
  }
  kernel_ok = kernel_ok && e1.rank() == kernel.size();
  report.add(prefix + ".kernel", kernel_ok, "Ker T is spanned by (x,0) ⊗ (0,y)");

  // The elements s(x, y) are not balanced over R, so Z0 is spanned by s(x_j, y_j)
  // for representatives chosen greedily modulo Z1.
  Echelon e0(Z.dim);
  for (const auto& k : kernel) e0.insert(k);
  std::vector<Vec> z0_basis;
  for (const auto& s : s_vecs)
    if (e0.insert(s)) z0_basis.push_back(s);
  const bool complement = z0_basis.size() + kernel.size() == Z.dim;
  report.add(prefix + ".complement", complement,
             fmt::format("dim Z0 = {}, dim Z1 = {}", z0_basis.size(), kernel.size()));
  if (!complement || !kernel_ok) return;
  const std::size_t d0 = z0_basis.size();
  const std::size_t d1 = kernel.size();
  std::vector<Vec> cols = z0_basis;
  cols.insert(cols.end(), kernel.begin(), kernel.end());
  const Matrix S = Matrix::from_columns(Z.dim, cols);
  const Matrix Si = *inverse(S);

  BiUple zu;
  zu.dim0 = d0;
  zu.dim1 = d1;
  zu.T = (Si * T * S).block(d0, 0, d1, d0);
  bool closed = true;
  for (std::size_t i = 0; i < nL; ++i) {
    const Matrix lm = Si * Z.left[i] * S;
    const Matrix rm = Si * Z.right[i] * S;
    closed = closed && lm.block(0, d0, d0, d1).is_zero() && rm.block(0, d0, d0, d1).is_zero();
    zu.l0.push_back(lm.block(0, 0, d0, d0));
    zu.f.push_back(lm.block(d0, 0, d1, d0));
    zu.l1.push_back(lm.block(d0, d0, d1, d1));
    zu.r0.push_back(rm.block(0, 0, d0, d0));
    zu.g.push_back(rm.block(d0, 0, d1, d0));
    zu.r1.push_back(rm.block(d0, d0, d1, d1));
  }
  report.add(prefix + ".submodule", closed, "Z1 is a sub-bimodule");

  BiUple target;
  target.dim0 = target.dim1 = nL;
  target.T = Matrix::identity(nL);
  for (std::size_t i = 0; i < nL; ++i) {
    target.l0.push_back(L.left_matrix(L.basis_vec(i)));
    target.r0.push_back(L.right_matrix(L.basis_vec(i)));
    Matrix fl(nL, nL), fr(nL, nL);
    for (std::size_t m = 0; m < nL; ++m) {
      fl.set_column(m, fL.at(Tuple{i, m}));
      fr.set_column(m, fL.at(Tuple{m, i}));
    }
    target.f.push_back(fl);
    target.g.push_back(fr);
  }
  target.l1 = target.l0;
  target.r1 = target.r0;

  // F(w) on the spanning sets: s(x, y) -> (w0, w1) and (x,0) ⊗ (0,y) -> (0, w2).
  std::vector<Vec> inputs, outputs;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [x, y] = pairs[k];
    const Vec ex = unit_vec(dX, x), ey = unit_vec(dY, y);
    const Vec xy = c.pair_A(ex, ey);
    Vec w1 = c.pair_A(z0_lift(ex), ey);
    for (const auto& [yk, xk] : c.gens_B) {
      const Vec l = c.pair_A(ex, yk);
      w1 = sub(w1, c.pair_A(twist(X.f, l, xk), ey));
      w1 = add(w1, eval(fL, {l, c.pair_A(xk, ey)}));
    }
    inputs.push_back(s_vecs[k]);
    outputs.push_back(concat(xy, w1));
    inputs.push_back(t_vecs[k]);
    outputs.push_back(concat(Vec(nL), xy));
  }
  const auto Phi = fit_linear(Z.dim, 2 * nL, inputs, outputs);
  report.add(prefix + ".w_well_defined", Phi.has_value(), "w0, w1, w2 are well defined on the quotient");
  if (!Phi) return;
  const Matrix PhiS = *Phi * S;
  const std::optional<Matrix> W0 = PhiS.block(0, 0, nL, d0);
  const std::optional<Matrix> W1 = PhiS.block(nL, 0, nL, d0);
  const std::optional<Matrix> W2 = PhiS.block(nL, d0, nL, d1);

  const auto bad = morphism_failure(*W0, *W1, *W2, zu, target);
  report.add(prefix + ".w_morphism", !bad, bad.value_or("square commutes, w0 and w2 bilinear, twisting conditions hold"));

  const auto W0i = inverse(*W0);
  const auto W2i = inverse(*W2);
  bool inverse_ok = W0i && W2i;
  std::string inv_detail = "(w0^-1, -w2^-1 w1 w0^-1, w2^-1) is a two-sided inverse";
  if (inverse_ok) {
    const Matrix v0 = *W0i, v2 = *W2i;
    const Matrix v1 = Scalar(-1) * (v2 * *W1 * v0);
    if (auto vb = morphism_failure(v0, v1, v2, target, zu)) {
      inverse_ok = false;
      inv_detail = "inverse is not a morphism: " + *vb;
    } else {
      const bool vw = v0 * *W0 == Matrix::identity(d0) && (v2 * *W1 + v1 * *W0).is_zero() &&
                      v2 * *W2 == Matrix::identity(d1);
      const bool wv = *W0 * v0 == Matrix::identity(nL) && (*W2 * v1 + *W1 * v0).is_zero() &&
                      *W2 * v2 == Matrix::identity(nL);
      inverse_ok = vw && wv;
      if (!inverse_ok) inv_detail = "compositions are not the identity triples";
    }
  } else {
    inv_detail = "w0 or w2 is not invertible";
  }
  report.add(prefix + ".w_inverse", inverse_ok, inv_detail);

  // F(w) intertwines the actions of the deformed algebra on Z and on itself.
  const Matrix Fw = blocks(*W0, Matrix(d0, d1), *W1, *W2) * Si;
  bool iso = inverse(Fw).has_value();
  for (std::size_t i = 0; iso && i < 2 * nL; ++i) {
    const Vec e = Lf.basis_vec(i);
    iso = Fw * Z.left[i] == Lf.left_matrix(e) * Fw && Fw * Z.right[i] == Lf.right_matrix(e) * Fw;
  }
  report.add(prefix + ".bimodule_iso", iso, "F(w) is a bimodule isomorphism onto the deformed algebra");
}

}  // namespace

// ---------------------------------------------------------------------------

Vec Bimodule::act_left(const Vec& a, const Vec& m) const { return apply_sum(left, a, m); }
Vec Bimodule::act_right(const Vec& m, const Vec& r) const { return apply_sum(right, r, m); }
Matrix Bimodule::left_matrix(const Vec& a) const { return matrix_sum(left, a, dim, dim); }
Matrix Bimodule::right_matrix(const Vec& r) const { return matrix_sum(right, r, dim, dim); }

std::optional<std::string> bimodule_failure(const Bimodule& m, const FinDimAlgebra& left, const FinDimAlgebra& right) {
  if (m.left.size() != left.dim() || m.right.size() != right.dim()) return std::string("wrong number of action matrices");
  for (const auto& a : m.left)
    if (a.rows() != m.dim || a.cols() != m.dim) return std::string("left action matrix of the wrong shape");
  for (const auto& a : m.right)
    if (a.rows() != m.dim || a.cols() != m.dim) return std::string("right action matrix of the wrong shape");
  const Matrix id = Matrix::identity(m.dim);
  if (m.left_matrix(left.unit()) != id) return std::string("left unit does not act as identity");
  if (m.right_matrix(right.unit()) != id) return std::string("right unit does not act as identity");
  for (std::size_t i = 0; i < left.dim(); ++i)
    for (std::size_t j = 0; j < left.dim(); ++j)
      if (m.left[i] * m.left[j] != m.left_matrix(dense(left.product(i, j), left.dim())))
        return fmt::format("left action not associative at ({}, {})", left.label(i), left.label(j));
  for (std::size_t i = 0; i < right.dim(); ++i)
    for (std::size_t j = 0; j < right.dim(); ++j)
      if (m.right[j] * m.right[i] != m.right_matrix(dense(right.product(i, j), right.dim())))
        return fmt::format("right action not associative at ({}, {})", right.label(i), right.label(j));
  for (std::size_t i = 0; i < left.dim(); ++i)
    for (std::size_t j = 0; j < right.dim(); ++j)
      if (m.left[i] * m.right[j] != m.right[j] * m.left[i])
        return fmt::format("actions of {} and {} do not commute", left.label(i), right.label(j));
  return std::nullopt;
}

Bimodule regular_bimodule(const FinDimAlgebra& a) {
  Bimodule m;
  m.dim = a.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    m.left.push_back(a.left_matrix(a.basis_vec(i)));
    m.right.push_back(a.right_matrix(a.basis_vec(i)));
  }
  return m;
}

Vec Pairing::operator()(const Vec& x, const Vec& y) const {
  Vec out(target_dim);
  for (std::size_t i = 0; i < dim_x; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim_y; ++j)
      if (!y[j].is_zero()) axpy(out, x[i] * y[j], at(i, j));
  }
  return out;
}

Report verify_context(const MoritaContext& ctx) {
  Report report;
  half_checks(ctx, {"A", "B", "P", "Q"}, report);
  half_checks(swapped(ctx), {"B", "A", "Q", "P"}, report);
  return report;
}

void require_valid(const MoritaContext& ctx) {
  const Report r = verify_context(ctx);
  for (const auto& c : r.checks())
    if (!c.pass) throw Error(ErrorKind::InvalidContext, fmt::format("Morita context check {} failed: {}", c.name, c.detail));
}

MoritaContext swapped(const MoritaContext& ctx) {
  return MoritaContext{ctx.B, ctx.A, ctx.Q, ctx.P, ctx.pair_B, ctx.pair_A, ctx.gens_B, ctx.gens_A};
}

MoritaContext identity_context(const FinDimAlgebra& a) {
  MoritaContext c;
  c.A = c.B = a;
  c.P = c.Q = regular_bimodule(a);
  c.pair_A = make_pairing(a.dim(), a.dim(), a.dim(), [&](std::size_t x, std::size_t y) { return dense(a.product(x, y), a.dim()); });
  c.pair_B = c.pair_A;
  c.gens_A = {{a.unit(), a.unit()}};
  c.gens_B = {{a.unit(), a.unit()}};
  return c;
}

MoritaContext matrix_context(const FinDimAlgebra& a, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidContext, "matrix size must be at least 1");
  const std::size_t d = a.dim();
  const std::size_t dB = n * n * d;
  auto bidx = [&](std::size_t k, std::size_t l, std::size_t g) { return (k * n + l) * d + g; };
  auto vidx = [&](std::size_t k, std::size_t g) { return k * d + g; };

  std::vector<std::string> labels;
  std::vector<SparseVec> table(dB * dB);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t g = 0; g < d; ++g) labels.push_back(fmt::format("E{}{}({})", k + 1, l + 1, a.label(g)));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t g = 0; g < d; ++g)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t h = 0; h < d; ++h) {
            SparseVec prod;
            for (const auto& [x, c] : a.product(g, h)) prod.emplace_back(bidx(k, m, x), c);
            table[bidx(k, l, g) * dB + bidx(l, m, h)] = std::move(prod);
          }
  Vec unit(dB);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t g = 0; g < d; ++g) unit[bidx(k, k, g)] = a.unit()[g];

  MoritaContext c;
  c.A = a;
  c.B = FinDimAlgebra(labels, table, unit, a.field());

  // P = rows (1 x n), Q = columns (n x 1), both with basis e_k ⊗ γ.
  const std::size_t dv = n * d;
  c.P.dim = c.Q.dim = dv;
  for (std::size_t x = 0; x < d; ++x) {
    Matrix pl(dv, dv), qr(dv, dv);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t g = 0; g < d; ++g) {
        for (const auto& [y, s] : a.product(x, g)) pl(vidx(k, y), vidx(k, g)) += s;
        for (const auto& [y, s] : a.product(g, x)) qr(vidx(k, y), vidx(k, g)) += s;
      }
    c.P.left.push_back(pl);
    c.Q.right.push_back(qr);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t h = 0; h < d; ++h) {
        // (e_k ⊗ g)(E_kl ⊗ h) = e_l ⊗ g h and (E_kl ⊗ h)(e_l ⊗ g) = e_k ⊗ h g.
        Matrix pr(dv, dv), ql(dv, dv);
        for (std::size_t g = 0; g < d; ++g) {
          for (const auto& [y, s] : a.product(g, h)) pr(vidx(l, y), vidx(k, g)) += s;
          for (const auto& [y, s] : a.product(h, g)) ql(vidx(k, y), vidx(l, g)) += s;
        }
        c.P.right.push_back(pr);
        c.Q.left.push_back(ql);
      }
  c.pair_A = make_pairing(dv, dv, d, [&](std::size_t x, std::size_t y) {
    return x / d == y / d ? dense(a.product(x % d, y % d), d) : Vec(d);
  });
  c.pair_B = make_pairing(dv, dv, dB, [&](std::size_t y, std::size_t x) {
    Vec out(dB);
    for (const auto& [g, s] : a.product(y % d, x % d)) out[bidx(y / d, x / d, g)] += s;
    return out;
  });
  auto vec_unit = [&](std::size_t k) {
    Vec v(dv);
    for (std::size_t g = 0; g < d; ++g) v[vidx(k, g)] = a.unit()[g];
    return v;
  };
  c.gens_A = {{vec_unit(0), vec_unit(0)}};
  for (std::size_t k = 0; k < n; ++k) c.gens_B.emplace_back(vec_unit(k), vec_unit(k));
  require_valid(c);
  return c;
}

MoritaContext idempotent_context(const AlgebraBasis& basis, const std::vector<std::string>& vertices) {
  const Quiver& q = basis.quiver();
  std::vector<bool> chosen(q.vertex_count(), false);
  for (const auto& v : vertices) {
    const auto idx = q.vertex_index(v);
    if (!idx) throw Error(ErrorKind::InvalidContext, fmt::format("unknown vertex '{}'", v));
    chosen[static_cast<std::size_t>(*idx)] = true;
  }
  const FinDimAlgebra A = FinDimAlgebra::from_basis(basis);
  const std::size_t dA = A.dim();
  std::vector<std::size_t> idxB, idxP, idxQ;
  std::vector<std::ptrdiff_t> posB(dA, -1), posP(dA, -1), posQ(dA, -1);
  for (std::size_t i = 0; i < dA; ++i) {
    const Path& p = basis.path(i);
    const bool s = chosen[static_cast<std::size_t>(p.source)];
    const bool t = chosen[static_cast<std::size_t>(p.target)];
    if (s && t) { posB[i] = static_cast<std::ptrdiff_t>(idxB.size()); idxB.push_back(i); }
    if (t) { posP[i] = static_cast<std::ptrdiff_t>(idxP.size()); idxP.push_back(i); }
    if (s) { posQ[i] = static_cast<std::ptrdiff_t>(idxQ.size()); idxQ.push_back(i); }
  }
  auto restrict = [](const SparseVec& v, const std::vector<std::ptrdiff_t>& pos, std::size_t dim) {
    Vec out(dim);
    for (const auto& [k, c] : v) {
      if (pos[k] < 0) throw std::logic_error("product left the corner");
      out[static_cast<std::size_t>(pos[k])] += c;
    }
    return out;
  };

  // AeA = A iff 1_A lies in the span of the products Ae x eA.
  Echelon span(dA, true);
  std::vector<std::pair<std::size_t, std::size_t>> products;
  for (std::size_t u : idxP)
    for (std::size_t v : idxQ) {
      span.insert(dense(A.product(u, v), dA));
      products.emplace_back(u, v);
    }
  if (span.rank() < dA)
    throw Error(ErrorKind::NotFullIdempotent,
                fmt::format("AeA has dimension {} but A has dimension {}", span.rank(), dA));
  const Vec coeffs = *span.express(A.unit());

  MoritaContext c;
  c.A = A;
  const std::size_t dB = idxB.size(), dP = idxP.size(), dQ = idxQ.size();
  std::vector<std::string> labels;
  std::vector<SparseVec> table;
  Vec unit(dB);
  for (std::size_t i : idxB) labels.push_back(A.label(i));
  for (std::size_t i : idxB)
    for (std::size_t j : idxB) table.push_back(to_sparse(restrict(A.product(i, j), posB, dB)));
  for (std::size_t i = 0; i < dB; ++i)
    if (basis.path(idxB[i]).is_trivial()) unit[i] = Scalar(1);
  c.B = FinDimAlgebra(labels, table, unit, A.field());

  c.P.dim = dP;
  c.Q.dim = dQ;
  for (std::size_t a = 0; a < dA; ++a) {
    Matrix pl(dP, dP), qr(dQ, dQ);
    for (std::size_t x = 0; x < dP; ++x) pl.set_column(x, restrict(A.product(a, idxP[x]), posP, dP));
    for (std::size_t y = 0; y < dQ; ++y) qr.set_column(y, restrict(A.product(idxQ[y], a), posQ, dQ));
    c.P.left.push_back(pl);
    c.Q.right.push_back(qr);
  }
  for (std::size_t b : idxB) {
    Matrix pr(dP, dP), ql(dQ, dQ);
    for (std::size_t x = 0; x < dP; ++x) pr.set_column(x, restrict(A.product(idxP[x], b), posP, dP));
    for (std::size_t y = 0; y < dQ; ++y) ql.set_column(y, restrict(A.product(b, idxQ[y]), posQ, dQ));
    c.P.right.push_back(pr);
    c.Q.left.push_back(ql);
  }
  c.pair_A = make_pairing(dP, dQ, dA, [&](std::size_t x, std::size_t y) { return dense(A.product(idxP[x], idxQ[y]), dA); });
  c.pair_B = make_pairing(dQ, dP, dB, [&](std::size_t y, std::size_t x) { return restrict(A.product(idxQ[y], idxP[x]), posB, dB); });

  Vec eP(dP), eQ(dQ);
  for (std::size_t x = 0; x < dP; ++x)
    if (basis.path(idxP[x]).is_trivial()) eP[x] = Scalar(1);
  for (std::size_t y = 0; y < dQ; ++y)
    if (basis.path(idxQ[y]).is_trivial()) eQ[y] = Scalar(1);
  c.gens_B = {{eQ, eP}};
  // Group the solution by its Ae factor: p'_u = u, q'_u = sum_v c_uv v.
  for (std::size_t x = 0; x < dP; ++x) {
    Vec qv(dQ);
    for (std::size_t k = 0; k < products.size(); ++k)
      if (products[k].first == idxP[x] && !coeffs[k].is_zero())
        qv[static_cast<std::size_t>(posQ[products[k].second])] += coeffs[k];
    if (!qdeform::is_zero(qv)) c.gens_A.emplace_back(unit_vec(dP, x), qv);
  }
  require_valid(c);
  return c;
}

Presentation amplify_presentation(const Presentation& pres, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidContext, "amplification factor must be at least 1");
  Presentation out = pres;
  const std::size_t original = pres.quiver.vertex_count();
  for (std::size_t v = 0; v < original; ++v) {
    const std::string name = pres.quiver.vertex_name(static_cast<int>(v));
    for (std::size_t k = 2; k <= n; ++k) {
      const int copy = out.quiver.add_vertex(fmt::format("{}_{}", name, k));
      const int cv = out.quiver.add_arrow(fmt::format("c_{}_{}", name, k), static_cast<int>(v), copy);
      const int dv = out.quiver.add_arrow(fmt::format("d_{}_{}", name, k), copy, static_cast<int>(v));
      const Path cd{static_cast<int>(v), static_cast<int>(v), {cv, dv}};
      const Path dc{copy, copy, {dv, cv}};
      out.relations.push_back(FreeElement::of_path(cd) - FreeElement::of_path(Path::trivial(static_cast<int>(v))));
      out.relations.push_back(FreeElement::of_path(dc) - FreeElement::of_path(Path::trivial(copy)));
      out.kinds.push_back(RelationKind::Input);
      out.kinds.push_back(RelationKind::Input);
    }
  }
  return out;
}

FullCochain transfer_phi(const MoritaContext& ctx, const FullCochain& f, int n) {
  if (n < 1 || n > 3) throw Error(ErrorKind::UnsupportedDegree, fmt::format("transfer maps are implemented for degrees 1 to 3, not {}", n));
  check_cochain(f, n, ctx.A.dim(), "the transfer map");
  const std::size_t dA = ctx.A.dim();
  const std::size_t dB = ctx.B.dim();
  const std::size_t m = ctx.gens_B.size();

  // X[(i * dB + b) * m + i'] = <p_i, b q_i'>_A and R[(i * dA + a) * m + i'] = <q_i, a p_i'>_B.
  std::vector<SparseVec> X(m * dB * m);
  std::vector<Vec> R(m * dA * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t b = 0; b < dB; ++b)
        X[(i * dB + b) * m + j] = to_sparse(ctx.pair_A(ctx.gens_B[i].second, ctx.Q.act_left(ctx.B.basis_vec(b), ctx.gens_B[j].first)));
      for (std::size_t a = 0; a < dA; ++a)
        R[(i * dA + a) * m + j] = ctx.pair_B(ctx.gens_B[i].first, ctx.P.act_left(ctx.A.basis_vec(a), ctx.gens_B[j].second));
    }

  FullCochain out(n, dB, ctx.B.field());
  std::vector<const SparseVec*> args(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < out.tuple_count(); ++flat) {
    const Tuple bs = out.unflatten(flat);
    Vec result(dB);
    for (std::size_t i0 = 0; i0 < m; ++i0) {
      auto rec = [&](auto&& self, std::size_t k, std::size_t prev) -> void {
        if (k == bs.size()) {
          Vec value(dA);
          accumulate(f, args, Scalar(1), value);
          for (std::size_t a = 0; a < dA; ++a)
            if (!value[a].is_zero()) axpy(result, value[a], R[(i0 * dA + a) * m + prev]);
          return;
        }
        for (std::size_t i = 0; i < m; ++i) {
          const SparseVec& x = X[(prev * dB + bs[k]) * m + i];
          if (x.empty()) continue;
          args[k] = &x;
          self(self, k + 1, i);
        }
      };
      rec(rec, 0, i0);
    }
    out.at(flat) = std::move(result);
  }
  return out;
}

FullCochain transfer_psi(const MoritaContext& ctx, const FullCochain& g, int n) {
  return transfer_phi(swapped(ctx), g, n);
}

FullCochain homotopy_term(const MoritaContext& ctx, const FullCochain& f, int n, int r) {
  if (n < 1 || n > 2) throw Error(ErrorKind::UnsupportedDegree, fmt::format("the homotopy is implemented for n = 1, 2, not {}", n));
  if (r < 1 || r > n + 1) throw Error(ErrorKind::UnsupportedDegree, fmt::format("no summand h_{} in degree {}", r, n + 1));
  const FinDimAlgebra& A = ctx.A;
  const std::size_t dA = A.dim();
  check_cochain(f, n + 1, dA, "the homotopy");
  const std::size_t mp = ctx.gens_A.size();
  const std::size_t m = ctx.gens_B.size();
  // u(j, i) = <p'_j, q_i>_A, v(i, j) = <p_i, q'_j>_A.
  std::vector<Vec> u(mp * m), v(m * mp);
  for (std::size_t j = 0; j < mp; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      u[j * m + i] = ctx.pair_A(ctx.gens_A[j].first, ctx.gens_B[i].first);
      v[i * mp + j] = ctx.pair_A(ctx.gens_B[i].second, ctx.gens_A[j].second);
    }

  const std::size_t R = static_cast<std::size_t>(r);
  const std::size_t N = static_cast<std::size_t>(n);
  FullCochain out(n, dA, A.field());
  std::vector<std::pair<std::size_t, std::size_t>> idx(R);  // (j_k, i_k)
  for (std::size_t flat = 0; flat < out.tuple_count(); ++flat) {
    const Tuple t = out.unflatten(flat);
    std::vector<Vec> a;
    for (std::size_t k : t) a.push_back(A.basis_vec(k));
    Vec result(dA);
    auto U = [&](std::size_t k) -> const Vec& { return u[idx[k].first * m + idx[k].second]; };
    auto V = [&](std::size_t k) -> const Vec& { return v[idx[k].second * mp + idx[k].first]; };
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k < R) {
        for (std::size_t j = 0; j < mp; ++j)
          for (std::size_t i = 0; i < m; ++i) {
            idx[k] = {j, i};
            self(self, k + 1);
          }
        return;
      }
      // a_k is a[k - 1].
      std::vector<Vec> args;
      if (R == 1) {
        args.push_back(U(0));
        args.push_back(A.multiply(V(0), a[0]));
        for (std::size_t k2 = 2; k2 <= N; ++k2) args.push_back(a[k2 - 1]);
        result = add(result, eval(f, args));
        return;
      }
      for (std::size_t k2 = 1; k2 + 2 <= R; ++k2) args.push_back(A.multiply(A.multiply(V(k2 - 1), a[k2 - 1]), U(k2)));
      args.push_back(A.multiply(V(R - 2), a[R - 2]));
      args.push_back(U(R - 1));
      if (R <= N) {
        args.push_back(A.multiply(V(R - 1), a[R - 1]));
        for (std::size_t k2 = R + 1; k2 <= N; ++k2) args.push_back(a[k2 - 1]);
        result = add(result, A.multiply(U(0), eval(f, args)));
      } else {
        result = add(result, A.multiply(A.multiply(U(0), eval(f, args)), V(N)));
      }
    };
    rec(rec, 0);
    out.at(flat) = std::move(result);
  }
  return out;
}

FullCochain homotopy_h(const MoritaContext& ctx, const FullCochain& f, int n) {
  if (n < 1 || n > 2) throw Error(ErrorKind::UnsupportedDegree, fmt::format("the homotopy is implemented for n = 1, 2, not {}", n));
  FullCochain out(n, ctx.A.dim(), ctx.A.field());
  for (int r = 1; r <= n + 1; ++r) {
    const FullCochain term = homotopy_term(ctx, f, n, r);
    if (r % 2 == 0) out += term;
    else out -= term;
  }
  return out;
}

FinDimAlgebra deformed_structure(const FinDimAlgebra& a, const FullCochain& f) {
  check_cochain(f, 2, a.dim(), "the deformed algebra");
  const std::size_t n = a.dim();
  std::vector<std::string> labels = a.labels();
  for (std::size_t i = 0; i < n; ++i) labels.push_back("t*" + a.label(i));
  std::vector<SparseVec> table(4 * n * n);
  auto shifted = [&](const SparseVec& v) {
    SparseVec out;
    for (const auto& [k, c] : v) out.emplace_back(k + n, c);
    return out;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SparseVec prod = a.product(i, j);
      for (const auto& [k, c] : to_sparse(f.at(Tuple{i, j}))) prod.emplace_back(k + n, c);
      table[i * 2 * n + j] = prod;
      table[i * 2 * n + n + j] = shifted(a.product(i, j));
      table[(n + i) * 2 * n + j] = shifted(a.product(i, j));
    }
  return FinDimAlgebra(labels, table, concat(a.unit(), Vec(n)), a.field());
}

Report deformed_bimodule_report(const DeformedBimodule& m, const FinDimAlgebra& L, const FullCochain& fL,
                                const FinDimAlgebra& R, const FullCochain& gR) {
  Report report;
  const auto b0 = bimodule_failure(m.M0, L, R);
  const auto b1 = bimodule_failure(m.M1, L, R);
  report.add("bimodules", !b0 && !b1, b0 ? "M0: " + *b0 : b1 ? "M1: " + *b1 : "M0 and M1 are bimodules");
  if (b0 || b1) return report;
  const std::size_t d0 = m.M0.dim, d1 = m.M1.dim;
  bool shapes = m.T.rows() == d1 && m.T.cols() == d0 && m.f.size() == L.dim() && m.g.size() == R.dim();
  for (const auto& x : m.f) shapes = shapes && x.rows() == d1 && x.cols() == d0;
  for (const auto& x : m.g) shapes = shapes && x.rows() == d1 && x.cols() == d0;
  if (!shapes) {
    report.add("shapes", false, "T, f_M or g_M has the wrong shape");
    return report;
  }
  bool linear = rank(m.T) == d0;
  for (std::size_t i = 0; i < L.dim(); ++i) linear = linear && m.T * m.M0.left[i] == m.M1.left[i] * m.T;
  for (std::size_t j = 0; j < R.dim(); ++j) linear = linear && m.T * m.M0.right[j] == m.M1.right[j] * m.T;
  report.add("T", linear, "T is an injective bimodule map");

  auto fmat = [&](const Vec& a) { return matrix_sum(m.f, a, d1, d0); };
  auto gmat = [&](const Vec& b) { return matrix_sum(m.g, b, d1, d0); };
  std::string e1, e2, e3;
  for (std::size_t i = 0; i < L.dim() && e1.empty(); ++i)
    for (std::size_t j = 0; j < L.dim() && e1.empty(); ++j) {
      const Matrix lhs = m.M1.left[i] * m.f[j] - fmat(dense(L.product(i, j), L.dim())) + m.f[i] * m.M0.left[j] -
                         m.M1.left_matrix(fL.at(Tuple{i, j})) * m.T;
      if (!lhs.is_zero()) e1 = fmt::format("fails at ({}, {})", L.label(i), L.label(j));
    }
  for (std::size_t i = 0; i < R.dim() && e2.empty(); ++i)
    for (std::size_t j = 0; j < R.dim() && e2.empty(); ++j) {
      const Matrix lhs = m.M1.right_matrix(gR.at(Tuple{i, j})) * m.T - m.g[j] * m.M0.right[i] +
                         gmat(dense(R.product(i, j), R.dim())) - m.M1.right[j] * m.g[i];
      if (!lhs.is_zero()) e2 = fmt::format("fails at ({}, {})", R.label(i), R.label(j));
    }
  for (std::size_t i = 0; i < L.dim() && e3.empty(); ++i)
    for (std::size_t j = 0; j < R.dim() && e3.empty(); ++j) {
      const Matrix lhs = m.M1.left[i] * m.g[j] - m.g[j] * m.M0.left[i] + m.f[i] * m.M0.right[j] - m.M1.right[j] * m.f[i];
      if (!lhs.is_zero()) e3 = fmt::format("fails at ({}, {})", L.label(i), R.label(j));
    }
  report.add("bimod1", e1.empty(), e1.empty() ? "left twisting equation holds on all basis triples" : e1);
  report.add("bimod2", e2.empty(), e2.empty() ? "right twisting equation holds on all basis triples" : e2);
  report.add("bimod3", e3.empty(), e3.empty() ? "compatibility holds on all basis triples" : e3);
  return report;
}

Bimodule realize(const DeformedBimodule& m, const FinDimAlgebra& L, const FinDimAlgebra& R) {
  const std::size_t d0 = m.M0.dim, d1 = m.M1.dim;
  Bimodule out;
  out.dim = d0 + d1;
  const Matrix z00(d0, d0), z01(d0, d1), z11(d1, d1);
  for (std::size_t i = 0; i < L.dim(); ++i) out.left.push_back(blocks(m.M0.left[i], z01, m.f[i], m.M1.left[i]));
  for (std::size_t i = 0; i < L.dim(); ++i) out.left.push_back(blocks(z00, z01, m.M1.left[i] * m.T, z11));
  for (std::size_t j = 0; j < R.dim(); ++j) out.right.push_back(blocks(m.M0.right[j], z01, m.g[j], m.M1.right[j]));
  for (std::size_t j = 0; j < R.dim(); ++j) out.right.push_back(blocks(z00, z01, m.M1.right[j] * m.T, z11));
  return out;
}

DeformedBimodule build_hat_P(const MoritaContext& ctx, const FullCochain& f) {
  const Scalar h = half(ctx.A.field());
  check_cochain(f, 2, ctx.A.dim(), "P̂");
  const FullCochain g = transfer_phi(ctx, f, 2);
  const FullCochain h2 = homotopy_h(ctx, f, 1);
  const std::size_t dP = ctx.P.dim;
  DeformedBimodule out{ctx.P, ctx.P, Matrix::identity(dP), {}, {}};
  for (std::size_t a = 0; a < ctx.A.dim(); ++a) {
    const Vec ea = ctx.A.basis_vec(a);
    Matrix fp(dP, dP);
    for (std::size_t x = 0; x < dP; ++x) {
      const Vec ex = unit_vec(dP, x);
      Vec sum(dP);
      for (const auto& [qi, pi] : ctx.gens_B) sum = add(sum, ctx.P.act_left(eval(f, {ea, ctx.pair_A(ex, qi)}), pi));
      for (const auto& [p0, q0] : ctx.gens_A)
        for (const auto& [p1, q1] : ctx.gens_A)
          sum = add(sum, ctx.P.act_right(p0, eval(g, {ctx.pair_B(q0, ctx.P.act_left(ea, p1)), ctx.pair_B(q1, ex)})));
      sum = add(sum, ctx.P.act_left(h2.at(Tuple{a}), ex));
      fp.set_column(x, scale(h, sum));
    }
    out.f.push_back(fp);
  }
  for (std::size_t b = 0; b < ctx.B.dim(); ++b) {
    const Vec eb = ctx.B.basis_vec(b);
    Matrix gp(dP, dP);
    for (std::size_t x = 0; x < dP; ++x) {
      const Vec ex = unit_vec(dP, x);
      Vec sum(dP);
      for (const auto& [q0, p0] : ctx.gens_B)
        for (const auto& [q1, p1] : ctx.gens_B)
          sum = add(sum, ctx.P.act_left(eval(f, {ctx.pair_A(ex, q0), ctx.pair_A(ctx.P.act_right(p0, eb), q1)}), p1));
      for (const auto& [pi, qi] : ctx.gens_A) sum = add(sum, ctx.P.act_right(pi, eval(g, {ctx.pair_B(qi, ex), eb})));
      gp.set_column(x, scale(h, sum));
    }
    out.g.push_back(gp);
  }
  return out;
}

DeformedBimodule build_hat_Q(const MoritaContext& ctx, const FullCochain& f) {
  const Scalar h = half(ctx.A.field());
  check_cochain(f, 2, ctx.A.dim(), "Q̂");
  const FullCochain g = transfer_phi(ctx, f, 2);
  const FullCochain h2 = homotopy_h(ctx, f, 1);
  const std::size_t dQ = ctx.Q.dim;
  DeformedBimodule out{ctx.Q, ctx.Q, Matrix::identity(dQ), {}, {}};
  // Left twist g_Q over B.
  for (std::size_t b = 0; b < ctx.B.dim(); ++b) {
    const Vec eb = ctx.B.basis_vec(b);
    Matrix gq(dQ, dQ);
    for (std::size_t y = 0; y < dQ; ++y) {
      const Vec ey = unit_vec(dQ, y);
      Vec sum(dQ);
      for (const auto& [q0, p0] : ctx.gens_B)
        for (const auto& [q1, p1] : ctx.gens_B)
          sum = add(sum, ctx.Q.act_right(q0, eval(f, {ctx.pair_A(p0, ctx.Q.act_left(eb, q1)), ctx.pair_A(p1, ey)})));
      for (const auto& [pi, qi] : ctx.gens_A) sum = add(sum, ctx.Q.act_left(eval(g, {eb, ctx.pair_B(ey, pi)}), qi));
      gq.set_column(y, scale(h, sum));
    }
    out.f.push_back(gq);
  }
  // Right twist f_Q over A.
  for (std::size_t a = 0; a < ctx.A.dim(); ++a) {
    const Vec ea = ctx.A.basis_vec(a);
    Matrix fq(dQ, dQ);
    for (std::size_t y = 0; y < dQ; ++y) {
      const Vec ey = unit_vec(dQ, y);
      Vec sum(dQ);
      for (const auto& [qi, pi] : ctx.gens_B) sum = add(sum, ctx.Q.act_right(qi, eval(f, {ctx.pair_A(pi, ey), ea})));
      for (const auto& [p0, q0] : ctx.gens_A)
        for (const auto& [p1, q1] : ctx.gens_A)
          sum = add(sum, ctx.Q.act_left(eval(g, {ctx.pair_B(ey, p0), ctx.pair_B(q0, ctx.P.act_left(ea, p1))}), q1));
      sum = add(sum, ctx.Q.act_right(ey, h2.at(Tuple{a})));
      fq.set_column(y, scale(h, sum));
    }
    out.g.push_back(fq);
  }
  return out;
}

TensorProduct tensor_over(const Bimodule& X, const Bimodule& Y) {
  if (X.right.size() != Y.left.size())
    throw Error(ErrorKind::ShapeMismatch, "the middle algebras of the two bimodules differ");
  const std::size_t dX = X.dim, dY = Y.dim, N = dX * dY;
  Echelon rel(N);
  std::vector<Vec> independent;
  for (std::size_t b = 0; b < X.right.size() && rel.rank() < N; ++b)
    for (std::size_t x = 0; x < dX; ++x)
      for (std::size_t y = 0; y < dY; ++y) {
        Vec v(N);
        for (std::size_t x2 = 0; x2 < dX; ++x2)
          if (!X.right[b](x2, x).is_zero()) v[x2 * dY + y] += X.right[b](x2, x);
        for (std::size_t y2 = 0; y2 < dY; ++y2)
          if (!Y.left[b](y2, y).is_zero()) v[x * dY + y2] -= Y.left[b](y2, y);
        if (rel.insert(v)) independent.push_back(std::move(v));
      }
  std::vector<std::size_t> comp;
  for (std::size_t k = 0; k < N; ++k)
    if (rel.insert(unit_vec(N, k))) comp.push_back(k);

  // Coordinates along the complement of the relation span.
  std::vector<Vec> cols = independent;
  for (std::size_t k : comp) cols.push_back(unit_vec(N, k));
  const Matrix inv = *inverse(Matrix::from_columns(N, cols));
  TensorProduct out;
  out.representatives = comp;
  out.projection = inv.block(independent.size(), 0, comp.size(), N);
  Bimodule& Z = out.module;
  Z.dim = comp.size();
  for (const auto& l : X.left) {
    Matrix m(Z.dim, Z.dim);
    for (std::size_t z = 0; z < Z.dim; ++z) {
      const std::size_t x = comp[z] / dY, y = comp[z] % dY;
      m.set_column(z, out.projection.apply(kron(l.column(x), unit_vec(dY, y))));
    }
    Z.left.push_back(m);
  }
  for (const auto& r : Y.right) {
    Matrix m(Z.dim, Z.dim);
    for (std::size_t z = 0; z < Z.dim; ++z) {
      const std::size_t x = comp[z] / dY, y = comp[z] % dY;
      m.set_column(z, out.projection.apply(kron(unit_vec(dX, x), r.column(y))));
    }
    Z.right.push_back(m);
  }
  return out;
}

Report verify_morita_deformed(const MoritaContext& ctx, const FullCochain& f) {
  half(ctx.A.field());
  check_cochain(f, 2, ctx.A.dim(), "verify-morita");
  if (!full_differential(f, ctx.A).is_zero()) throw Error(ErrorKind::NotACocycle, "f is not a 2-cocycle");
  Report report;
  const Report context = verify_context(ctx);
  report.add("context", context.passed(), fmt::format("{} context checks, {} failed", context.checks().size(), context.failures()));
  if (!context.passed()) {
    report.merge("context", context);
    return report;
  }
  const FullCochain g = transfer_phi(ctx, f, 2);
  report.add("g.cocycle", full_differential(g, ctx.B).is_zero(), "g = phi^2(f) is a 2-cocycle");
  const DeformedBimodule P = build_hat_P(ctx, f);
  const DeformedBimodule Q = build_hat_Q(ctx, f);
  report.merge("hatP", deformed_bimodule_report(P, ctx.A, f, ctx.B, g));
  report.merge("hatQ", deformed_bimodule_report(Q, ctx.B, g, ctx.A, f));
  if (!report.passed()) return report;
  tensor_checks(ctx, P, Q, f, "PQ", report);
  tensor_checks(swapped(ctx), Q, P, g, "QP", report);
  return report;
}

}  // namespace qdeform
