#include "qdeform/scalar.hpp"

#include <fmt/format.h>

#include <ostream>
#include <stdexcept>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = result * base % p;
    base = base * base % p;
    exp >>= 1U;
  }
  return result;
}

std::uint64_t reduce_mpz(const mpz_class& z, std::uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

}  // namespace

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InvalidQuiver: return "InvalidQuiver";
    case ErrorKind::InconsistentRelation: return "InconsistentRelation";
    case ErrorKind::NotFiniteDimensional: return "NotFiniteDimensional";
    case ErrorKind::InvalidCochain: return "InvalidCochain";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::ImageConditionFailed: return "ImageConditionFailed";
    case ErrorKind::EpsilonUnresolvable: return "EpsilonUnresolvable";
    case ErrorKind::NormalizationFailed: return "NormalizationFailed";
    case ErrorKind::SignResolutionFailed: return "SignResolutionFailed";
    case ErrorKind::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorKind::InvalidModule: return "InvalidModule";
    case ErrorKind::InvalidContext: return "InvalidContext";
    case ErrorKind::NotFullIdempotent: return "NotFullIdempotent";
    case ErrorKind::CharTwoUnsupported: return "CharTwoUnsupported";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
  }
  return "Error";
}

FieldSpec FieldSpec::prime(std::uint32_t p) {
  if (!is_prime(p))
    throw Error(ErrorKind::InvalidAlgebra, fmt::format("{} is not a prime", p));
  return FieldSpec{p};
}

std::string FieldSpec::name() const {
  return is_rational() ? std::string("Q") : fmt::format("F{}", characteristic);
}

Scalar Scalar::from_rational(const mpq_class& q) {
  Scalar s;
  s.rational_ = q;
  s.rational_.canonicalize();
  return s;
}

Scalar Scalar::from_integer(long value, FieldSpec field) {
  return Scalar(value).in_field(field);
}

bool Scalar::is_zero() const {
  return modulus_ == 0 ? sgn(rational_) == 0 : residue_ == 0;
}

bool Scalar::is_one() const {
  return modulus_ == 0 ? rational_ == 1 : residue_ == 1;
}

Scalar Scalar::in_field(FieldSpec field) const {
  if (field.characteristic == modulus_) return *this;
  if (modulus_ != 0)
    throw std::logic_error("cannot move a prime-field element to another field");
  const std::uint32_t p = field.characteristic;
  const std::uint64_t den = reduce_mpz(rational_.get_den(), p);
  if (den == 0)
    throw Error(ErrorKind::DivisionByZero,
                fmt::format("denominator of {} vanishes in F{}", to_string(), p));
  Scalar s;
  s.modulus_ = p;
  s.rational_ = 0;
  s.residue_ = reduce_mpz(rational_.get_num(), p) * mod_pow(den, p - 2, p) % p;
  return s;
}

void Scalar::unify(Scalar& a, Scalar& b) {
  if (a.modulus_ == b.modulus_) return;
  if (a.modulus_ == 0) {
    a = a.in_field(b.field());
  } else if (b.modulus_ == 0) {
    b = b.in_field(a.field());
  } else {
    throw Error(ErrorKind::FieldMismatch,
                fmt::format("F{} and F{} elements mixed", a.modulus_, b.modulus_));
  }
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (modulus_ == 0) {
    s.rational_ = -rational_;
  } else if (residue_ != 0) {
    s.residue_ = modulus_ - residue_;
  }
  return s;
}

Scalar& Scalar::operator+=(const Scalar& other) {
  if (modulus_ == other.modulus_) {
    if (modulus_ == 0) {
      rational_ += other.rational_;
    } else {
      residue_ = (residue_ + other.residue_) % modulus_;
    }
    return *this;
  }
  Scalar rhs = other;
  unify(*this, rhs);
  if (modulus_ == 0) {
    rational_ += rhs.rational_;
  } else {
    residue_ = (residue_ + rhs.residue_) % modulus_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) { return *this += -other; }

Scalar& Scalar::operator*=(const Scalar& other) {
  if (modulus_ == other.modulus_) {
    if (modulus_ == 0) {
      rational_ *= other.rational_;
    } else {
      residue_ = residue_ * other.residue_ % modulus_;
    }
    return *this;
  }
  Scalar rhs = other;
  unify(*this, rhs);
  if (modulus_ == 0) {
    rational_ *= rhs.rational_;
  } else {
    residue_ = residue_ * rhs.residue_ % modulus_;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) { return *this *= invert(other); }

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.modulus_ == b.modulus_) {
    return a.modulus_ == 0 ? a.rational_ == b.rational_ : a.residue_ == b.residue_;
  }
  Scalar x = a;
  Scalar y = b;
  Scalar::unify(x, y);
  return x == y;
}

Scalar Scalar::pow(std::uint64_t exponent) const {
  Scalar result = Scalar(1).in_field(field());
  Scalar base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    base *= base;
    exponent >>= 1U;
  }
  return result;
}

std::string Scalar::to_string() const {
  if (modulus_ != 0) return std::to_string(residue_);
  return rational_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.to_string(); }

Scalar invert(const Scalar& x) {
  if (x.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (x.field().is_rational()) {
    mpq_class inv = 1 / x.rational();
    return Scalar::from_rational(inv);
  }
  const std::uint32_t p = x.field().characteristic;
  Scalar s = Scalar::from_integer(static_cast<long>(mod_pow(x.residue(), p - 2, p)), x.field());
  return s;
}

Scalar parse_scalar(std::string_view token, FieldSpec field) {
  auto fail = [&](std::string_view why) {
    return Error(ErrorKind::ParseError, fmt::format("bad scalar '{}': {}", token, why));
  };
  std::string_view rest = token;
  bool negative = false;
  if (!rest.empty() && rest.front() == '-') {
    negative = true;
    rest.remove_prefix(1);
  }
  const auto slash = rest.find('/');
  std::string_view num = rest.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
  auto all_digits = [](std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
    throw fail("expected [-]digits or [-]digits/digits");
  mpz_class n{std::string(num)};
  mpz_class d = slash == std::string_view::npos ? mpz_class(1) : mpz_class(std::string(den));
  if (d == 0) throw Error(ErrorKind::DivisionByZero, fmt::format("zero denominator in '{}'", token));
  if (negative) n = -n;
  Scalar q = Scalar::from_rational(mpq_class(n, d));
  if (field.is_rational()) return q;
  if (reduce_mpz(d, field.characteristic) == 0)
    throw Error(ErrorKind::DivisionByZero,
                fmt::format("denominator of '{}' is divisible by {}", token, field.characteristic));
  return q.in_field(field);
}

}  // namespace qdeform
