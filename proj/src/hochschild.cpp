#include "qdeform/hochschild.hpp"

#include <fmt/format.h>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

void check_degree(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw Error(ErrorKind::UnsupportedDegree, fmt::format("{} is not available in degree {}", what, n));
}

// Value of f on a tuple whose entries are sparse combinations of basis
// elements, expanded multilinearly.
Vec value_multilinear(const Cochain& f, const std::vector<SparseVec>& args) {
  Vec out(f.dim());
  Tuple idx(args.size());
  auto rec = [&](auto&& self, std::size_t pos, const Scalar& coeff) -> void {
    if (pos == args.size()) {
      auto it = f.values().find(idx);
      if (it != f.values().end()) axpy(out, coeff, it->second);
      return;
    }
    for (const auto& [k, c] : args[pos]) {
      idx[pos] = k;
      self(self, pos + 1, coeff * c);
    }
  };
  rec(rec, 0, Scalar(1));
  return out;
}

SparseVec single(std::size_t i) { return SparseVec{{i, Scalar(1)}}; }

Vec sparse_left(const AlgebraBasis& basis, std::size_t i, const Vec& v) {
  return basis.multiply(basis.basis_vec(i), v);
}

Vec sparse_right(const AlgebraBasis& basis, const Vec& v, std::size_t i) {
  return basis.multiply(v, basis.basis_vec(i));
}

}  // namespace

Vec Cochain::value(const Tuple& args) const {
  auto it = values_.find(args);
  return it == values_.end() ? Vec(dim_) : it->second;
}

void Cochain::set(const Tuple& args, const Vec& v) {
  if (args.size() != static_cast<std::size_t>(degree_) || v.size() != dim_)
    throw Error(ErrorKind::InvalidCochain, "cochain entry has the wrong shape");
  if (qdeform::is_zero(v)) {
    values_.erase(args);
  } else {
    values_[args] = v;
  }
}

void Cochain::add(const Tuple& args, const Vec& v) { set(args, qdeform::add(value(args), v)); }

Cochain& Cochain::operator+=(const Cochain& other) {
  for (const auto& [t, v] : other.values_) add(t, v);
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& other) {
  for (const auto& [t, v] : other.values_) add(t, scale(Scalar(-1), v));
  return *this;
}

Cochain operator*(const Scalar& s, const Cochain& a) {
  Cochain r(a.degree_, a.dim_);
  for (const auto& [t, v] : a.values_) r.set(t, scale(s, v));
  return r;
}

bool operator==(const Cochain& a, const Cochain& b) {
  return a.degree_ == b.degree_ && a.dim_ == b.dim_ && a.values_ == b.values_;
}

std::vector<Tuple> composable_tuples(const AlgebraBasis& basis, int n) {
  std::vector<std::size_t> nontrivial;
  for (std::size_t i = 0; i < basis.dim(); ++i)
    if (!basis.path(i).is_trivial()) nontrivial.push_back(i);
  std::vector<Tuple> out;
  Tuple cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == static_cast<std::size_t>(n)) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i : nontrivial) {
      if (!cur.empty() && basis.path(cur.back()).target != basis.path(i).source) continue;
      cur.push_back(i);
      self(self);
      cur.pop_back();
    }
  };
  if (n >= 1) rec(rec);
  return out;
}

std::vector<std::size_t> value_support(const AlgebraBasis& basis, const Tuple& args) {
  const int s = basis.path(args.front()).source;
  const int t = basis.path(args.back()).target;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis.dim(); ++i)
    if (basis.path(i).source == s && basis.path(i).target == t) out.push_back(i);
  return out;
}

void validate_cochain(const Cochain& f, const AlgebraBasis& basis) {
  if (f.dim() != basis.dim()) throw Error(ErrorKind::InvalidCochain, "cochain dimension mismatch");
  for (const auto& [args, v] : f.values()) {
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (args[k] >= basis.dim()) throw Error(ErrorKind::InvalidCochain, "cochain argument out of range");
      if (basis.path(args[k]).is_trivial())
        throw Error(ErrorKind::InvalidCochain,
                    fmt::format("cochain has a value on the trivial path {}", basis.label(args[k])));
      if (k > 0 && basis.path(args[k - 1]).target != basis.path(args[k]).source)
        throw Error(ErrorKind::InvalidCochain,
                    fmt::format("cochain has a value on the non-composable pair {}, {}",
                                basis.label(args[k - 1]), basis.label(args[k])));
    }
    const int s = basis.path(args.front()).source;
    const int t = basis.path(args.back()).target;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      if (basis.path(i).source != s || basis.path(i).target != t) {
        std::string where;
        for (std::size_t k = 0; k < args.size(); ++k) where += (k ? ", " : "") + basis.label(args[k]);
        throw Error(ErrorKind::InvalidCochain,
                    fmt::format("value on ({}) contains {}, outside e({}) A e({})", where, basis.label(i),
                                basis.quiver().vertex_name(s), basis.quiver().vertex_name(t)));
      }
    }
  }
}

Vec evaluate(const Cochain& f, const std::vector<Vec>& args, const AlgebraBasis& basis) {
  (void)basis;
  std::vector<SparseVec> sparse;
  sparse.reserve(args.size());
  for (const auto& a : args) sparse.push_back(to_sparse(a));
  return value_multilinear(f, sparse);
}

Cochain differential(const Cochain& f, const AlgebraBasis& basis) {
  check_degree(f.degree(), 1, 2, "the reduced differential");
  const int n = f.degree();
  Cochain df(n + 1, basis.dim());
  for (const Tuple& r : composable_tuples(basis, n + 1)) {
    Vec out(basis.dim());
    {
      std::vector<SparseVec> args;
      for (int k = 1; k <= n; ++k) args.push_back(single(r[static_cast<std::size_t>(k)]));
      out = sparse_left(basis, r[0], value_multilinear(f, args));
    }
    for (int j = 1; j <= n; ++j) {
      std::vector<SparseVec> args;
      for (int k = 0; k <= n; ++k) {
        if (k == j - 1) {
          args.push_back(basis.product(r[static_cast<std::size_t>(k)], r[static_cast<std::size_t>(k + 1)]));
          ++k;
        } else {
          args.push_back(single(r[static_cast<std::size_t>(k)]));
        }
      }
      axpy(out, Scalar(j % 2 == 0 ? 1 : -1), value_multilinear(f, args));
    }
    {
      std::vector<SparseVec> args;
      for (int k = 0; k < n; ++k) args.push_back(single(r[static_cast<std::size_t>(k)]));
      axpy(out, Scalar((n + 1) % 2 == 0 ? 1 : -1),
           sparse_right(basis, value_multilinear(f, args), r[static_cast<std::size_t>(n)]));
    }
    df.set(r, out);
  }
  return df;
}

bool is_cocycle(const Cochain& f, const AlgebraBasis& basis) {
  check_degree(f.degree(), 2, 2, "the cocycle test");
  return differential(f, basis).is_zero();
}

ReducedComplex::ReducedComplex(const AlgebraBasis& basis) : basis_(&basis) {
  for (int n = 1; n <= 3; ++n) {
    Degree d;
    d.tuples = composable_tuples(basis, n);
    for (std::size_t t = 0; t < d.tuples.size(); ++t) {
      d.position.emplace(d.tuples[t], t);
      d.offset.push_back(d.size);
      d.support.push_back(value_support(basis, d.tuples[t]));
      d.size += d.support.back().size();
    }
    degrees_.push_back(std::move(d));
  }
}

const ReducedComplex::Degree& ReducedComplex::degree(int n) const {
  check_degree(n, 1, 3, "the reduced complex");
  return degrees_[static_cast<std::size_t>(n - 1)];
}

std::size_t ReducedComplex::dimension(int n) const { return degree(n).size; }

Vec ReducedComplex::coordinates(const Cochain& f) const {
  const Degree& d = degree(f.degree());
  Vec x(d.size);
  for (const auto& [args, v] : f.values()) {
    auto it = d.position.find(args);
    if (it == d.position.end()) throw Error(ErrorKind::InvalidCochain, "cochain tuple outside the complex");
    const auto& sup = d.support[it->second];
    for (std::size_t k = 0; k < sup.size(); ++k) x[d.offset[it->second] + k] = v[sup[k]];
  }
  return x;
}

Cochain ReducedComplex::from_coordinates(int n, const Vec& x) const {
  const Degree& d = degree(n);
  Cochain f(n, basis_->dim());
  for (std::size_t t = 0; t < d.tuples.size(); ++t) {
    Vec v(basis_->dim());
    const auto& sup = d.support[t];
    for (std::size_t k = 0; k < sup.size(); ++k) v[sup[k]] = x[d.offset[t] + k];
    f.set(d.tuples[t], v);
  }
  return f;
}

Matrix ReducedComplex::differential_matrix(int n) const {
  check_degree(n, 1, 2, "the reduced differential");
  const std::size_t cols = dimension(n);
  const std::size_t rows = dimension(n + 1);
  Matrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const Cochain df = differential(from_coordinates(n, unit_vec(cols, c)), *basis_);
    m.set_column(c, coordinates(df));
  }
  return m;
}

std::optional<Cochain> cobound_solve(const Cochain& f, const AlgebraBasis& basis) {
  if (!is_cocycle(f, basis)) throw Error(ErrorKind::NotACocycle, "cobound_solve needs a 2-cocycle");
  ReducedComplex complex(basis);
  auto x = solve(complex.differential_matrix(1), complex.coordinates(f));
  if (!x) return std::nullopt;
  return complex.from_coordinates(1, *x);
}

HHDimensions hh2_dimensions(const AlgebraBasis& basis) {
  ReducedComplex complex(basis);
  HHDimensions d;
  d.coboundaries = rank(complex.differential_matrix(1));
  d.cocycles = complex.dimension(2) - rank(complex.differential_matrix(2));
  d.cohomology = d.cocycles - d.coboundaries;
  return d;
}

std::size_t hh_dimension(const AlgebraBasis& basis, int n) {
  check_degree(n, 2, 2, "HH dimension");
  return hh2_dimensions(basis).cohomology;
}

FullCochain::FullCochain(int degree, std::size_t dim, FieldSpec field) : degree_(degree), dim_(dim) {
  std::size_t count = 1;
  for (int k = 0; k < degree; ++k) count *= dim;
  const Scalar zero = Scalar::from_integer(0, field);
  table_.assign(count, Vec(dim, zero));
}

std::size_t FullCochain::flatten(const Tuple& args) const {
  std::size_t flat = 0;
  for (std::size_t a : args) flat = flat * dim_ + a;
  return flat;
}

Tuple FullCochain::unflatten(std::size_t flat) const {
  Tuple t(static_cast<std::size_t>(degree_));
  for (int k = degree_ - 1; k >= 0; --k) {
    t[static_cast<std::size_t>(k)] = flat % dim_;
    flat /= dim_;
  }
  return t;
}

Vec FullCochain::evaluate(const std::vector<Vec>& args) const {
  Vec out(dim_);
  std::vector<SparseVec> sparse;
  for (const auto& a : args) sparse.push_back(to_sparse(a));
  auto rec = [&](auto&& self, std::size_t pos, std::size_t flat, const Scalar& coeff) -> void {
    if (pos == sparse.size()) {
      axpy(out, coeff, table_[flat]);
      return;
    }
    for (const auto& [k, c] : sparse[pos]) self(self, pos + 1, flat * dim_ + k, coeff * c);
  };
  rec(rec, 0, 0, Scalar(1));
  return out;
}

bool FullCochain::is_zero() const {
  for (const auto& v : table_)
    if (!qdeform::is_zero(v)) return false;
  return true;
}

FullCochain& FullCochain::operator+=(const FullCochain& other) {
  for (std::size_t i = 0; i < table_.size(); ++i) axpy(table_[i], Scalar(1), other.table_[i]);
  return *this;
}

FullCochain& FullCochain::operator-=(const FullCochain& other) {
  for (std::size_t i = 0; i < table_.size(); ++i) axpy(table_[i], Scalar(-1), other.table_[i]);
  return *this;
}

FullCochain operator*(const Scalar& s, const FullCochain& a) {
  FullCochain r = a;
  for (auto& v : r.table_)
    for (auto& x : v) x *= s;
  return r;
}

bool operator==(const FullCochain& a, const FullCochain& b) {
  return a.degree_ == b.degree_ && a.dim_ == b.dim_ && a.table_ == b.table_;
}

FullCochain extend_to_full(const Cochain& f, const AlgebraBasis& basis) {
  FullCochain full(f.degree(), basis.dim(), basis.field());
  for (const auto& [args, v] : f.values()) {
    bool trivial = false;
    for (std::size_t a : args) trivial = trivial || basis.path(a).is_trivial();
    if (!trivial) full.at(args) = v;
  }
  return full;
}

FullCochain full_differential(const FullCochain& f, const FinDimAlgebra& algebra) {
  check_degree(f.degree(), 0, 2, "the full differential");
  const int n = f.degree();
  const std::size_t N = algebra.dim();
  FullCochain df(n + 1, N, algebra.field());
  auto value = [&](const std::vector<SparseVec>& args) {
    Vec out(N);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t flat, const Scalar& coeff) -> void {
      if (pos == args.size()) {
        axpy(out, coeff, f.at(flat));
        return;
      }
      for (const auto& [k, c] : args[pos]) self(self, pos + 1, flat * N + k, coeff * c);
    };
    rec(rec, 0, 0, Scalar(1));
    return out;
  };
  for (std::size_t flat = 0; flat < df.tuple_count(); ++flat) {
    const Tuple r = df.unflatten(flat);
    std::vector<SparseVec> args;
    for (int k = 1; k <= n; ++k) args.push_back(single(r[static_cast<std::size_t>(k)]));
    Vec out = algebra.multiply(algebra.basis_vec(r[0]), value(args));
    for (int j = 1; j <= n; ++j) {
      args.clear();
      for (int k = 0; k <= n; ++k) {
        if (k == j - 1) {
          args.push_back(algebra.product(r[static_cast<std::size_t>(k)], r[static_cast<std::size_t>(k + 1)]));
          ++k;
        } else {
          args.push_back(single(r[static_cast<std::size_t>(k)]));
        }
      }
      axpy(out, Scalar(j % 2 == 0 ? 1 : -1), value(args));
    }
    args.clear();
    for (int k = 0; k < n; ++k) args.push_back(single(r[static_cast<std::size_t>(k)]));
    axpy(out, Scalar((n + 1) % 2 == 0 ? 1 : -1),
         algebra.multiply(value(args), algebra.basis_vec(r[static_cast<std::size_t>(n)])));
    df.at(flat) = std::move(out);
  }
  return df;
}

std::optional<FullCochain> full_cobound_solve(const FullCochain& f, const FinDimAlgebra& algebra) {
  check_degree(f.degree(), 2, 2, "full coboundary solving");
  const std::size_t N = algebra.dim();
  const std::size_t rows = N * N * N;
  auto flatten_value = [&](const FullCochain& c) {
    Vec x(rows);
    for (std::size_t t = 0; t < N * N; ++t)
      for (std::size_t k = 0; k < N; ++k) x[t * N + k] = c.at(t)[k];
    return x;
  };
  Echelon e(rows, true);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      FullCochain g(1, N, algebra.field());
      g.at(i)[k] = Scalar(1);
      e.insert(flatten_value(full_differential(g, algebra)));
    }
  auto x = e.express(flatten_value(f));
  if (!x) return std::nullopt;
  FullCochain g(1, N, algebra.field());
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) g.at(i)[k] = (*x)[i * N + k];
  return g;
}

}  // namespace qdeform
