#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "qdeform/algebra.hpp"
#include "qdeform/linalg.hpp"
#include "qdeform/structure.hpp"

namespace qdeform {

using Tuple = std::vector<std::size_t>;

/// Reduced Hochschild n-cochain of A = kQ/I relative to E = kQ_0: a value
/// for each composable tuple of nontrivial basis paths. Absent tuples are
/// zero; stored values are never zero.
class Cochain {
 public:
  Cochain() = default;
  Cochain(int degree, std::size_t dim) : degree_(degree), dim_(dim) {}

  int degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  const std::map<Tuple, Vec>& values() const { return values_; }
  bool is_zero() const { return values_.empty(); }

  Vec value(const Tuple& args) const;
  void set(const Tuple& args, const Vec& v);
  void add(const Tuple& args, const Vec& v);

  Cochain& operator+=(const Cochain& other);
  Cochain& operator-=(const Cochain& other);
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  friend Cochain operator*(const Scalar& s, const Cochain& a);
  friend bool operator==(const Cochain& a, const Cochain& b);

 private:
  int degree_ = 0;
  std::size_t dim_ = 0;
  std::map<Tuple, Vec> values_;
};

/// Throws InvalidCochain when a stored tuple contains a trivial path, is not
/// composable, or has a value outside e_{s(first)} A e_{t(last)}.
void validate_cochain(const Cochain& f, const AlgebraBasis& basis);

/// Composable tuples of nontrivial basis indices, lexicographic.
std::vector<Tuple> composable_tuples(const AlgebraBasis& basis, int n);
/// Basis indices allowed as values on `args`.
std::vector<std::size_t> value_support(const AlgebraBasis& basis, const Tuple& args);

/// Multilinear evaluation on arbitrary elements; zero on trivial paths and
/// on non-composable tuples.
Vec evaluate(const Cochain& f, const std::vector<Vec>& args, const AlgebraBasis& basis);

/// Coordinates of the reduced complex in degrees 1..3: one coordinate per
/// (composable tuple, allowed value path).
class ReducedComplex {
 public:
  explicit ReducedComplex(const AlgebraBasis& basis);

  std::size_t dimension(int n) const;
  Vec coordinates(const Cochain& f) const;
  Cochain from_coordinates(int n, const Vec& x) const;
  /// Matrix of the differential C^n -> C^{n+1}, n in {1, 2}.
  Matrix differential_matrix(int n) const;

 private:
  struct Degree {
    std::vector<Tuple> tuples;
    std::vector<std::vector<std::size_t>> support;
    std::vector<std::size_t> offset;
    std::map<Tuple, std::size_t> position;
    std::size_t size = 0;
  };
  const Degree& degree(int n) const;

  const AlgebraBasis* basis_;
  std::vector<Degree> degrees_;
};

/// d^{n+1} on a reduced n-cochain, n in {1, 2}.
Cochain differential(const Cochain& f, const AlgebraBasis& basis);
bool is_cocycle(const Cochain& f, const AlgebraBasis& basis);
/// Some 1-cochain g with d g = f, or nullopt when f is not a coboundary.
/// Throws NotACocycle when f is not closed.
std::optional<Cochain> cobound_solve(const Cochain& f, const AlgebraBasis& basis);

struct HHDimensions {
  std::size_t cocycles = 0;
  std::size_t coboundaries = 0;
  std::size_t cohomology = 0;
};
HHDimensions hh2_dimensions(const AlgebraBasis& basis);
/// dim HH^n(A); only n = 2 is supported.
std::size_t hh_dimension(const AlgebraBasis& basis, int n = 2);

/// Unreduced Hochschild n-cochain on a structure-constant algebra: a value
/// for every n-tuple of basis indices.
class FullCochain {
 public:
  FullCochain() = default;
  FullCochain(int degree, std::size_t dim, FieldSpec field = FieldSpec::rationals());

  int degree() const { return degree_; }
  std::size_t dim() const { return dim_; }
  std::size_t tuple_count() const { return table_.size(); }

  Vec& at(std::size_t flat) { return table_[flat]; }
  const Vec& at(std::size_t flat) const { return table_[flat]; }
  Vec& at(const Tuple& args) { return table_[flatten(args)]; }
  const Vec& at(const Tuple& args) const { return table_[flatten(args)]; }
  std::size_t flatten(const Tuple& args) const;
  Tuple unflatten(std::size_t flat) const;

  /// Multilinear evaluation on arbitrary elements.
  Vec evaluate(const std::vector<Vec>& args) const;
  bool is_zero() const;

  FullCochain& operator+=(const FullCochain& other);
  FullCochain& operator-=(const FullCochain& other);
  friend FullCochain operator+(FullCochain a, const FullCochain& b) { return a += b; }
  friend FullCochain operator-(FullCochain a, const FullCochain& b) { return a -= b; }
  friend FullCochain operator*(const Scalar& s, const FullCochain& a);
  friend bool operator==(const FullCochain& a, const FullCochain& b);

 private:
  int degree_ = 0;
  std::size_t dim_ = 0;
  std::vector<Vec> table_;
};

FullCochain extend_to_full(const Cochain& f, const AlgebraBasis& basis);
/// d^{n+1} on the unreduced complex, n in {0, 1, 2}.
FullCochain full_differential(const FullCochain& f, const FinDimAlgebra& algebra);
/// Some unreduced 1-cochain g with d g = f (f of degree 2), if any.
std::optional<FullCochain> full_cobound_solve(const FullCochain& f, const FinDimAlgebra& algebra);

}  // namespace qdeform
