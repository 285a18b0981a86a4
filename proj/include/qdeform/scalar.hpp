#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qdeform {

/// The ground field: either the rationals (characteristic 0) or F_p.
struct FieldSpec {
  std::uint32_t characteristic = 0;

  static FieldSpec rationals() { return FieldSpec{0}; }
  /// Throws Error(InvalidAlgebra) unless p is prime.
  static FieldSpec prime(std::uint32_t p);

  bool is_rational() const { return characteristic == 0; }
  std::string name() const;

  friend bool operator==(FieldSpec, FieldSpec) = default;
};

/// An exact field element. Rationals are kept as reduced fractions with a
/// positive denominator, prime-field elements as residues in [0, p).
///
/// A rational operand meeting an F_p operand is mapped through the canonical
/// map Z_(p) -> F_p, so integer literals such as Scalar(1) act as constants of
/// every field. Mixing two different primes is a logic error.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : rational_(value) {}  // NOLINT(google-explicit-constructor)

  static Scalar from_rational(const mpq_class& q);
  static Scalar from_integer(long value, FieldSpec field);

  FieldSpec field() const { return FieldSpec{modulus_}; }
  bool is_zero() const;
  bool is_one() const;

  /// Maps this value into `field`; throws DivisionByZero when the denominator
  /// vanishes mod p.
  Scalar in_field(FieldSpec field) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  Scalar pow(std::uint64_t exponent) const;

  /// Rational value; only meaningful in characteristic 0.
  const mpq_class& rational() const { return rational_; }
  /// Residue; only meaningful in a prime field.
  std::uint64_t residue() const { return residue_; }

  /// Canonical text: "3", "-1/2", residues as "0".."p-1".
  std::string to_string() const;

 private:
  static void unify(Scalar& a, Scalar& b);

  std::uint32_t modulus_ = 0;
  std::uint64_t residue_ = 0;
  mpq_class rational_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& x);

/// Parses `[-]digits` or `[-]digits/digits` into `field`.
Scalar parse_scalar(std::string_view token, FieldSpec field);

/// Multiplicative inverse; throws DivisionByZero on zero.
Scalar invert(const Scalar& x);

}  // namespace qdeform
