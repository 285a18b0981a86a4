#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdeform/algebra.hpp"
#include "qdeform/category.hpp"
#include "qdeform/hochschild.hpp"
#include "qdeform/io.hpp"
#include "qdeform/structure.hpp"

namespace qdeform::testing {

inline const std::vector<std::string> kExamples = {"dual_numbers", "example2", "example3", "example4"};

inline std::string data_path(const std::string& name) { return std::string(QDEFORM_DATA_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(QDEFORM_GOLDEN_DIR) + "/" + name; }

struct Example {
  AlgebraFile file;
  AlgebraBasis basis;
  Cochain f;
};

inline Example load_example(const std::string& name, std::optional<FieldSpec> field = std::nullopt) {
  AlgebraFile file = load_algebra(data_path(name + ".alg"), field);
  AlgebraBasis basis = compute_basis(file.presentation.quiver, file.presentation.relations, file.presentation.field);
  Cochain f = cocycle_from_file(file, basis);
  return Example{std::move(file), std::move(basis), std::move(f)};
}

inline Scalar random_scalar(std::mt19937& gen, FieldSpec field, int bound = 3) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  return Scalar::from_integer(dist(gen), field);
}

inline Vec random_vec(std::mt19937& gen, std::size_t n, FieldSpec field, int bound = 3) {
  Vec v(n);
  for (auto& x : v) x = random_scalar(gen, field, bound);
  return v;
}

inline Matrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols, FieldSpec field, int bound = 3) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(gen, field, bound);
  return m;
}

inline Matrix random_invertible(std::mt19937& gen, std::size_t n, FieldSpec field) {
  for (;;) {
    Matrix m = random_matrix(gen, n, n, field);
    if (rank(m) == n) return m;
  }
}

/// Random reduced cochain of degree n in {1, 2}.
inline Cochain random_cochain(std::mt19937& gen, const AlgebraBasis& basis, int n) {
  Cochain c(n, basis.dim());
  for (const Tuple& t : composable_tuples(basis, n)) {
    Vec v(basis.dim());
    for (std::size_t k : value_support(basis, t)) v[k] = random_scalar(gen, basis.field());
    c.set(t, v);
  }
  return c;
}

inline FullCochain random_full(std::mt19937& gen, int degree, std::size_t dim, FieldSpec field) {
  FullCochain c(degree, dim, field);
  for (std::size_t i = 0; i < c.tuple_count(); ++i) c.at(i) = random_vec(gen, dim, field);
  return c;
}

/// A random element of kQ: combinations of random paths of length <= max_len.
inline FreeElement random_element(std::mt19937& gen, const Quiver& q, FieldSpec field, std::size_t max_len = 4,
                                  int terms = 3) {
  std::uniform_int_distribution<int> vertex(0, static_cast<int>(q.vertex_count()) - 1);
  std::uniform_int_distribution<std::size_t> length(0, max_len);
  FreeElement out;
  for (int k = 0; k < terms; ++k) {
    Path p = Path::trivial(vertex(gen));
    const std::size_t len = length(gen);
    for (std::size_t s = 0; s < len; ++s) {
      std::vector<int> out_arrows;
      for (std::size_t a = 0; a < q.arrow_count(); ++a)
        if (q.arrow(static_cast<int>(a)).source == p.target) out_arrows.push_back(static_cast<int>(a));
      if (out_arrows.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, out_arrows.size() - 1);
      const int a = out_arrows[pick(gen)];
      p.arrows.push_back(a);
      p.target = q.arrow(a).target;
    }
    out.add_term(p, random_scalar(gen, field));
  }
  return out;
}

/// Hochschild differential of an unreduced cochain of degree 1 or 2,
/// written out directly from the bar formula.
inline std::vector<Vec> bar_differential(const std::vector<Vec>& values, int degree, const FinDimAlgebra& a) {
  const std::size_t n = a.dim();
  auto e = [&](std::size_t i) { return a.basis_vec(i); };
  auto value = [&](const Vec& x, const Vec& y) {
    // bilinear extension of a degree-2 table
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!x[i].is_zero() && !y[j].is_zero()) axpy(out, x[i] * y[j], values[i * n + j]);
    return out;
  };
  auto value1 = [&](const Vec& x) {
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!x[i].is_zero()) axpy(out, x[i], values[i]);
    return out;
  };
  std::vector<Vec> out;
  if (degree == 1) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Vec v = a.multiply(e(i), values[j]);
        v = sub(v, value1(a.multiply(e(i), e(j))));
        v = add(v, a.multiply(values[i], e(j)));
        out.push_back(v);
      }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Vec v = a.multiply(e(i), values[j * n + k]);
          v = sub(v, value(a.multiply(e(i), e(j)), e(k)));
          v = add(v, value(e(i), a.multiply(e(j), e(k))));
          v = sub(v, a.multiply(values[i * n + j], e(k)));
          out.push_back(v);
        }
  }
  return out;
}

/// Matrix of the bar differential C^degree -> C^{degree + 1}.
inline Matrix bar_matrix(const FinDimAlgebra& a, int degree) {
  const std::size_t n = a.dim();
  const std::size_t tuples = degree == 1 ? n : n * n;
  const std::size_t in = tuples * n;
  const std::size_t out = tuples * n * n;
  Matrix m(out, in);
  for (std::size_t col = 0; col < in; ++col) {
    std::vector<Vec> values(tuples, Vec(n));
    values[col / n][col % n] = Scalar::from_integer(1, a.field());
    const auto image = bar_differential(values, degree, a);
    for (std::size_t t = 0; t < image.size(); ++t)
      for (std::size_t k = 0; k < n; ++k) m(t * n + k, col) = image[t][k];
  }
  return m;
}

/// Left A-module matrices of an indecomposable summand: the simple S_v
/// (projective = false) or the projective A e_v.
inline std::vector<Matrix> summand(const AlgebraBasis& basis, int v, bool projective) {
  const std::size_t n = basis.dim();
  std::vector<Matrix> out;
  if (!projective) {
    for (std::size_t i = 0; i < n; ++i) {
      Matrix m(1, 1);
      if (i == basis.vertex_idempotent(v)) m(0, 0) = Scalar::from_integer(1, basis.field());
      out.push_back(m);
    }
    return out;
  }
  std::vector<std::size_t> cols;
  for (std::size_t p = 0; p < n; ++p)
    if (basis.path(p).target == v) cols.push_back(p);
  for (std::size_t i = 0; i < n; ++i) {
    Matrix m(cols.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Vec prod = basis.multiply(basis.basis_vec(i), basis.basis_vec(cols[c]));
      for (std::size_t r = 0; r < cols.size(); ++r) m(r, c) = prod[cols[r]];
    }
    out.push_back(m);
  }
  return out;
}

inline std::vector<Matrix> direct_sum(const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
  if (x.empty()) return y;
  if (y.empty()) return x;
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Matrix m(x[i].rows() + y[i].rows(), x[i].cols() + y[i].cols());
    for (std::size_t r = 0; r < x[i].rows(); ++r)
      for (std::size_t c = 0; c < x[i].cols(); ++c) m(r, c) = x[i](r, c);
    for (std::size_t r = 0; r < y[i].rows(); ++r)
      for (std::size_t c = 0; c < y[i].cols(); ++c) m(x[i].rows() + r, x[i].cols() + c) = y[i](r, c);
    out.push_back(m);
  }
  return out;
}

/// A random uple with dim M0 <= dim M1 <= max_dim: M1 = M0 ⊕ M' built from
/// simples and projectives, T the inclusion, both sides twisted by random
/// changes of basis, and f_M a random solution of the twisting equations.
/// nullopt when the drawn shape admits no f_M.
inline std::optional<UpleModule> random_uple(std::mt19937& gen, const DeformedAlgebra& d, std::size_t max_dim) {
  const AlgebraBasis& basis = d.basis();
  const FieldSpec field = basis.field();
  const std::size_t n = basis.dim();
  std::uniform_int_distribution<int> vertex(0, static_cast<int>(basis.quiver().vertex_count()) - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  auto draw = [&](std::size_t budget, std::size_t at_least) {
    std::vector<Matrix> m;
    std::size_t dim = 0;
    for (int tries = 0; tries < 6; ++tries) {
      const auto s = summand(basis, vertex(gen), coin(gen) == 1);
      if (dim + s.front().rows() > budget) continue;
      m = direct_sum(m, s);
      dim += s.front().rows();
      if (dim >= at_least && coin(gen)) break;
    }
    return m;
  };
  const auto m0 = draw(max_dim, 1);
  if (m0.empty()) return std::nullopt;
  const std::size_t d0 = m0.front().rows();
  const auto extra = draw(max_dim - d0, 0);
  const auto m1 = direct_sum(m0, extra);
  const std::size_t d1 = m1.front().rows();

  const Matrix g = random_invertible(gen, d1, field);
  const Matrix h = random_invertible(gen, d0, field);
  const Matrix g_inv = *inverse(g);
  const Matrix h_inv = *inverse(h);
  UpleModule u;
  u.dim0 = d0;
  u.dim1 = d1;
  for (std::size_t i = 0; i < n; ++i) {
    u.act0.push_back(h * m0[i] * h_inv);
    u.act1.push_back(g * m1[i] * g_inv);
  }
  Matrix inclusion(d1, d0);
  for (std::size_t r = 0; r < d0; ++r) inclusion(r, r) = Scalar::from_integer(1, field);
  u.T = g * inclusion * h_inv;

  // a1[i] fM[j] - sum_k c^k_ij fM[k] + fM[i] a0[j] = act(a1, f(i, j)) T
  const FullCochain f = extend_to_full(d.cocycle(), basis);
  const std::size_t block = d1 * d0;
  auto var = [&](std::size_t k, std::size_t r, std::size_t c) { return k * block + r * d0 + c; };
  Matrix system(n * n * block, n * block);
  Vec rhs(n * n * block);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix target = act(u.act1, f.at({i, j}), d1) * u.T;
      const Vec ij = basis.multiply(basis.basis_vec(i), basis.basis_vec(j));
      for (std::size_t r = 0; r < d1; ++r)
        for (std::size_t c = 0; c < d0; ++c) {
          const std::size_t row = (i * n + j) * block + r * d0 + c;
          rhs[row] = target(r, c);
          for (std::size_t s = 0; s < d1; ++s) system(row, var(j, s, c)) += u.act1[i](r, s);
          for (std::size_t k = 0; k < n; ++k) system(row, var(k, r, c)) -= ij[k];
          for (std::size_t s = 0; s < d0; ++s) system(row, var(i, r, s)) += u.act0[j](s, c);
        }
    }
  auto x = solve(system, rhs);
  if (!x) return std::nullopt;
  for (const Vec& k : nullspace(system)) axpy(*x, random_scalar(gen, field), k);
  for (std::size_t k = 0; k < n; ++k) {
    Matrix m(d1, d0);
    for (std::size_t r = 0; r < d1; ++r)
      for (std::size_t c = 0; c < d0; ++c) m(r, c) = (*x)[var(k, r, c)];
    u.fM.push_back(m);
  }
  return u;
}

}  // namespace qdeform::testing
