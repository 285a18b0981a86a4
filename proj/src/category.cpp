#include "qdeform/category.hpp"

#include <fmt/format.h>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

Matrix zero_matrix(std::size_t r, std::size_t c) { return Matrix(r, c); }

bool has_shape(const Matrix& m, std::size_t r, std::size_t c) { return m.rows() == r && m.cols() == c; }

// [[a, b], [c, d]]
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

std::optional<std::string> a_module_failure(const std::vector<Matrix>& actions, std::size_t dim,
                                            const AlgebraBasis& basis, std::string_view name) {
  if (actions.size() != basis.dim()) return fmt::format("{} has {} action matrices, expected {}", name, actions.size(), basis.dim());
  for (const auto& m : actions)
    if (!has_shape(m, dim, dim)) return fmt::format("{} has an action matrix of the wrong shape", name);
  if (act(actions, basis.unit(), dim) != Matrix::identity(dim)) return fmt::format("unit does not act as identity on {}", name);
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (std::size_t j = 0; j < basis.dim(); ++j) {
      const Vec ij = basis.multiply(basis.basis_vec(i), basis.basis_vec(j));
      if (actions[i] * actions[j] != act(actions, ij, dim))
        return fmt::format("{} fails (ab)m = a(bm) for a = {}, b = {}", name, basis.label(i), basis.label(j));
    }
  return std::nullopt;
}

}  // namespace

Matrix act(const std::vector<Matrix>& actions, const Vec& a, std::size_t dim) {
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) m = m + a[i] * actions[i];
  return m;
}

std::optional<std::string> module_failure(const ConcreteModule& m, const DeformedAlgebra& d) {
  const std::size_t n = d.dim();
  if (m.action.size() != n) return fmt::format("module has {} action matrices, expected {}", m.action.size(), n);
  for (const auto& a : m.action)
    if (!has_shape(a, m.dim, m.dim)) return std::string("action matrix of the wrong shape");
  if (act(m.action, d.pack(d.one()), m.dim) != Matrix::identity(m.dim)) return std::string("unit does not act as identity");
  const FinDimAlgebra s = d.structure();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vec prod(n);
      for (const auto& [k, c] : s.product(i, j)) prod[k] = c;
      if (m.action[i] * m.action[j] != act(m.action, prod, m.dim))
        return fmt::format("(xy)m != x(ym) for x = {}, y = {}", s.label(i), s.label(j));
    }
  return std::nullopt;
}

std::optional<std::string> uple_failure(const UpleModule& u, const DeformedAlgebra& d) {
  const AlgebraBasis& basis = d.basis();
  if (auto e = a_module_failure(u.act0, u.dim0, basis, "M0")) return e;
  if (auto e = a_module_failure(u.act1, u.dim1, basis, "M1")) return e;
  if (!has_shape(u.T, u.dim1, u.dim0)) return std::string("T has the wrong shape");
  if (rank(u.T) != u.dim0) return std::string("T is not injective");
  if (u.fM.size() != basis.dim()) return std::string("f_M has the wrong number of matrices");
  for (const auto& m : u.fM)
    if (!has_shape(m, u.dim1, u.dim0)) return std::string("f_M matrix of the wrong shape");
  for (std::size_t i = 0; i < basis.dim(); ++i)
    if (u.T * u.act0[i] != u.act1[i] * u.T) return fmt::format("T is not A-linear at {}", basis.label(i));
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (std::size_t j = 0; j < basis.dim(); ++j) {
      const Vec ij = basis.multiply(basis.basis_vec(i), basis.basis_vec(j));
      const Vec fij = d.full_cocycle().at(Tuple{i, j});
      Matrix f_ab(u.dim1, u.dim0);
      for (std::size_t k = 0; k < ij.size(); ++k)
        if (!ij[k].is_zero()) f_ab = f_ab + ij[k] * u.fM[k];
      const Matrix total = u.act1[i] * u.fM[j] - f_ab + u.fM[i] * u.act0[j] - act(u.act1, fij, u.dim1) * u.T;
      if (!total.is_zero())
        return fmt::format("f_M violates the compatibility condition at a = {}, b = {}", basis.label(i), basis.label(j));
    }
  return std::nullopt;
}

std::optional<std::string> triple_failure(const MorphismTriple& t, const UpleModule& from, const UpleModule& to,
                                          const DeformedAlgebra& d) {
  const AlgebraBasis& basis = d.basis();
  if (!has_shape(t.u0, to.dim0, from.dim0) || !has_shape(t.u1, to.dim1, from.dim0) ||
      !has_shape(t.u2, to.dim1, from.dim1))
    return std::string("triple has the wrong shape");
  if (to.T * t.u0 != t.u2 * from.T) return std::string("square T_N u0 = u2 T_M does not commute");
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (t.u0 * from.act0[i] != to.act0[i] * t.u0) return fmt::format("u0 is not A-linear at {}", basis.label(i));
    if (t.u2 * from.act1[i] != to.act1[i] * t.u2) return fmt::format("u2 is not A-linear at {}", basis.label(i));
    const Matrix rhs = to.act1[i] * t.u1 - t.u2 * from.fM[i] + to.fM[i] * t.u0;
    if (t.u1 * from.act0[i] != rhs) return fmt::format("u1 condition fails at {}", basis.label(i));
  }
  return std::nullopt;
}

ConcreteModule functor_F(const UpleModule& u, const DeformedAlgebra& d) {
  if (auto e = uple_failure(u, d)) throw Error(ErrorKind::InvalidModule, *e);
  const std::size_t n = d.basis().dim();
  ConcreteModule m;
  m.dim = u.dim0 + u.dim1;
  for (std::size_t i = 0; i < n; ++i)
    m.action.push_back(blocks(u.act0[i], zero_matrix(u.dim0, u.dim1), u.fM[i], u.act1[i]));
  for (std::size_t i = 0; i < n; ++i)
    m.action.push_back(blocks(zero_matrix(u.dim0, u.dim0), zero_matrix(u.dim0, u.dim1), u.act1[i] * u.T,
                              zero_matrix(u.dim1, u.dim1)));
  if (auto e = module_failure(m, d)) throw Error(ErrorKind::InvalidModule, "F(u) is not a module: " + *e);
  return m;
}

Matrix functor_F(const MorphismTriple& t) {
  return blocks(t.u0, zero_matrix(t.u0.rows(), t.u2.cols()), t.u1, t.u2);
}

UpleModule uple_from_module(const ConcreteModule& m, const DeformedAlgebra& d, Matrix* change_of_basis) {
  if (auto e = module_failure(m, d)) throw Error(ErrorKind::InvalidModule, *e);
  const AlgebraBasis& basis = d.basis();
  const std::size_t n = basis.dim();
  const Matrix T = act(m.action, concat(Vec(n), basis.unit()), m.dim);

  const std::vector<Vec> kernel = nullspace(T);
  Echelon span(m.dim);
  for (const auto& k : kernel) span.insert(k);
  std::vector<Vec> complement;
  for (std::size_t j = 0; j < m.dim && span.rank() < m.dim; ++j)
    if (span.insert(unit_vec(m.dim, j))) complement.push_back(unit_vec(m.dim, j));

  UpleModule u;
  u.dim0 = complement.size();
  u.dim1 = kernel.size();

  // T' inverts T on M0; coordinates in M1 come from the kernel basis.
  Echelon image(m.dim, true);
  for (const auto& c : complement) image.insert(T.apply(c));
  Echelon in_kernel(m.dim, true);
  for (const auto& k : kernel) in_kernel.insert(k);
  auto kernel_coords = [&](const Vec& v) {
    auto x = in_kernel.express(v);
    if (!x) throw std::logic_error("vector expected in Ker T");
    x->resize(u.dim1);
    return *x;
  };

  u.T = Matrix(u.dim1, u.dim0);
  for (std::size_t j = 0; j < u.dim0; ++j) u.T.set_column(j, kernel_coords(T.apply(complement[j])));
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix& a = m.action[i];
    Matrix star(u.dim0, u.dim0);
    Matrix f(u.dim1, u.dim0);
    for (std::size_t j = 0; j < u.dim0; ++j) {
      auto x = image.express(a.apply(T.apply(complement[j])));
      if (!x) throw std::logic_error("a T m left the image of T");
      x->resize(u.dim0);
      star.set_column(j, *x);
      Vec am = a.apply(complement[j]);
      for (std::size_t k = 0; k < u.dim0; ++k) axpy(am, -(*x)[k], complement[k]);
      f.set_column(j, kernel_coords(am));
    }
    Matrix a1(u.dim1, u.dim1);
    for (std::size_t j = 0; j < u.dim1; ++j) a1.set_column(j, kernel_coords(a.apply(kernel[j])));
    u.act0.push_back(std::move(star));
    u.fM.push_back(std::move(f));
    u.act1.push_back(std::move(a1));
  }
  if (change_of_basis != nullptr) {
    std::vector<Vec> cols = complement;
    cols.insert(cols.end(), kernel.begin(), kernel.end());
    *change_of_basis = Matrix::from_columns(m.dim, cols);
  }
  return u;
}

MorphismTriple compose_triples(const MorphismTriple& v, const MorphismTriple& u) {
  if (v.u0.cols() != u.u0.rows() || v.u2.cols() != u.u2.rows() || v.u1.cols() != u.u0.rows())
    throw Error(ErrorKind::ShapeMismatch, "triples are not composable");
  return MorphismTriple{v.u0 * u.u0, v.u2 * u.u1 + v.u1 * u.u0, v.u2 * u.u2};
}

MorphismTriple identity_triple(const UpleModule& u) {
  return MorphismTriple{Matrix::identity(u.dim0), Matrix(u.dim1, u.dim0), Matrix::identity(u.dim1)};
}

UpleModule regular_uple(const DeformedAlgebra& d) {
  const AlgebraBasis& basis = d.basis();
  const std::size_t n = basis.dim();
  UpleModule u;
  u.dim0 = u.dim1 = n;
  u.T = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix left(n, n);
    Matrix f(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      left.set_column(j, basis.multiply(basis.basis_vec(i), basis.basis_vec(j)));
      f.set_column(j, d.full_cocycle().at(Tuple{i, j}));
    }
    u.act0.push_back(left);
    u.act1.push_back(left);
    u.fM.push_back(f);
  }
  return u;
}

ConcreteModule regular_module(const DeformedAlgebra& d) {
  const FinDimAlgebra s = d.structure();
  ConcreteModule m;
  m.dim = s.dim();
  for (std::size_t i = 0; i < s.dim(); ++i) m.action.push_back(s.left_matrix(s.basis_vec(i)));
  return m;
}

std::optional<MorphismTriple> roundtrip_isomorphism(const UpleModule& u, const DeformedAlgebra& d,
                                                    UpleModule* reconstructed) {
  const ConcreteModule m = functor_F(u, d);
  Matrix S;
  const UpleModule v = uple_from_module(m, d, &S);
  if (reconstructed != nullptr) *reconstructed = v;
  if (v.dim0 != u.dim0 || v.dim1 != u.dim1) return std::nullopt;
  auto inv = inverse(S);
  if (!inv) return std::nullopt;
  // S^{-1}: F(u) -> F(v) is F of a triple iff its upper right block vanishes.
  const Matrix& Si = *inv;
  if (!Si.block(0, u.dim0, v.dim0, u.dim1).is_zero() || !S.block(0, v.dim0, u.dim0, v.dim1).is_zero())
    return std::nullopt;
  MorphismTriple forward{Si.block(0, 0, v.dim0, u.dim0), Si.block(v.dim0, 0, v.dim1, u.dim0),
                         Si.block(v.dim0, u.dim0, v.dim1, u.dim1)};
  MorphismTriple backward{S.block(0, 0, u.dim0, v.dim0), S.block(u.dim0, 0, u.dim1, v.dim0),
                          S.block(u.dim0, v.dim0, u.dim1, v.dim1)};
  if (triple_failure(forward, u, v, d) || triple_failure(backward, v, u, d)) return std::nullopt;
  const MorphismTriple id_u = identity_triple(u);
  const MorphismTriple id_v = identity_triple(v);
  const MorphismTriple bf = compose_triples(backward, forward);
  const MorphismTriple fb = compose_triples(forward, backward);
  if (bf.u0 != id_u.u0 || bf.u1 != id_u.u1 || bf.u2 != id_u.u2) return std::nullopt;
  if (fb.u0 != id_v.u0 || fb.u1 != id_v.u1 || fb.u2 != id_v.u2) return std::nullopt;
  return forward;
}

ConcreteModule module_from_generators(const std::vector<std::pair<std::string, Matrix>>& actions, std::size_t dim,
                                      const DeformedAlgebra& d) {
  const AlgebraBasis& basis = d.basis();
  const Quiver& q = basis.quiver();
  auto lookup = [&](const std::string& label) -> const Matrix& {
    for (const auto& [l, m] : actions)
      if (l == label) return m;
    throw Error(ErrorKind::InvalidModule, fmt::format("no action given for '{}'", label));
  };
  for (const auto& [label, m] : actions) {
    if (!has_shape(m, dim, dim)) throw Error(ErrorKind::InvalidModule, fmt::format("action of '{}' has the wrong shape", label));
    bool known = label == "t" || q.arrow_index(label).has_value();
    for (const auto& v : q.vertices()) known = known || label == "e(" + v + ")";
    if (!known) throw Error(ErrorKind::InvalidModule, fmt::format("unknown generator '{}'", label));
  }
  const Matrix& T = lookup("t");
  const std::size_t n = basis.dim();
  std::vector<Matrix> path_action;
  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = basis.path(i);
    if (p.is_trivial()) {
      path_action.push_back(lookup("e(" + q.vertex_name(p.source) + ")"));
      continue;
    }
    Matrix m = lookup(q.arrow(p.arrows.front()).id);
    for (std::size_t k = 1; k < p.length(); ++k) m = m * lookup(q.arrow(p.arrows[k]).id);
    path_action.push_back(std::move(m));
  }
  ConcreteModule out;
  out.dim = dim;
  out.action.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec correction = hat_f(FreeElement::of_path(basis.path(i)), basis, d.cocycle());
    out.action[i] = path_action[i] - T * act(path_action, correction, dim);
    out.action[n + i] = T * path_action[i];
  }
  if (auto e = module_failure(out, d)) throw Error(ErrorKind::InvalidModule, *e);
  return out;
}

Report module_roundtrip_report(const ConcreteModule& m, const DeformedAlgebra& d) {
  Report report;
  const auto bad = module_failure(m, d);
  report.add("module", !bad, bad ? *bad : fmt::format("A_f-module of dimension {}", m.dim));
  if (bad) return report;

  Matrix S;
  const UpleModule u = uple_from_module(m, d, &S);
  const auto bad_uple = uple_failure(u, d);
  report.add("uple", !bad_uple, bad_uple ? *bad_uple : fmt::format("dim M0 = {}, dim M1 = {}", u.dim0, u.dim1));
  if (bad_uple) return report;

  const ConcreteModule back = functor_F(u, d);
  const auto Si = inverse(S);
  bool same = Si.has_value();
  for (std::size_t i = 0; same && i < m.action.size(); ++i) same = (*Si) * m.action[i] * S == back.action[i];
  report.add("functor", same, "F(M0, M1, T, f_M) agrees with M in the adapted basis");

  const std::size_t n = d.basis().dim();
  const Matrix T = act(m.action, concat(Vec(n), d.basis().unit()), m.dim);
  bool central = true;
  for (std::size_t i = 0; i < n; ++i) central = central && T * m.action[i] == m.action[i] * T;
  report.add("central", central, "(0,1) commutes with every (a,0)");

  const auto iso = roundtrip_isomorphism(u, d);
  report.add("roundtrip", iso.has_value(), "uple of F(uple) is isomorphic to the uple");
  return report;
}

}  // namespace qdeform
