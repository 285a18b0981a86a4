#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "qdeform/errors.hpp"
#include "qdeform/linalg.hpp"
#include "qdeform/scalar.hpp"
#include "support.hpp"

namespace qdeform {
namespace {

using testing::random_invertible;
using testing::random_matrix;

TEST(Scalar, RationalArithmetic) {
  const FieldSpec q = FieldSpec::rationals();
  const Scalar half = parse_scalar("1/2", q);
  const Scalar third = parse_scalar("-1/3", q);
  EXPECT_EQ((half + third).to_string(), "1/6");
  EXPECT_EQ((half * third).to_string(), "-1/6");
  EXPECT_EQ((half / third).to_string(), "-3/2");
  EXPECT_EQ(parse_scalar("4/8", q).to_string(), "1/2");
  EXPECT_EQ(parse_scalar("-0", q).to_string(), "0");
}

TEST(Scalar, PrimeFieldArithmetic) {
  const FieldSpec f7 = FieldSpec::prime(7);
  const Scalar three = Scalar::from_integer(3, f7);
  EXPECT_EQ(invert(three).to_string(), "5");
  EXPECT_EQ((three * invert(three)).to_string(), "1");
  EXPECT_EQ(Scalar::from_integer(-1, f7).to_string(), "6");
  EXPECT_EQ(parse_scalar("1/2", f7).to_string(), "4");
  EXPECT_EQ(three.pow(6).to_string(), "1");
}

TEST(Scalar, Errors) {
  const FieldSpec f7 = FieldSpec::prime(7);
  EXPECT_THROW(invert(Scalar(0)), Error);
  EXPECT_THROW(parse_scalar("1/7", f7), Error);
  EXPECT_THROW(parse_scalar("1/0", FieldSpec::rationals()), Error);
  EXPECT_THROW(parse_scalar("x", FieldSpec::rationals()), Error);
  EXPECT_THROW(FieldSpec::prime(8), Error);
}

TEST(Scalar, IntegerLiteralsActInEveryField) {
  const FieldSpec f5 = FieldSpec::prime(5);
  EXPECT_EQ(Scalar::from_integer(4, f5) + Scalar(1), Scalar::from_integer(0, f5));
  EXPECT_TRUE((Scalar::from_integer(2, f5) * Scalar(3)).is_one());
}

// Fractions against a plain long-integer model.
TEST(ScalarProperty, RationalMatchesFractionModel) {
  std::mt19937 gen(11);
  std::uniform_int_distribution<long> num(-50, 50);
  std::uniform_int_distribution<long> den(1, 30);
  auto text = [](long n, long d) {
    const long g = std::gcd(n, d);
    n /= g;
    d /= g;
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
  };
  for (int trial = 0; trial < 300; ++trial) {
    const long a = num(gen), b = den(gen), c = num(gen), d = den(gen);
    const Scalar x = parse_scalar(std::to_string(a) + "/" + std::to_string(b), FieldSpec::rationals());
    const Scalar y = parse_scalar(std::to_string(c) + "/" + std::to_string(d), FieldSpec::rationals());
    EXPECT_EQ((x + y).to_string(), text(a * d + b * c, b * d));
    EXPECT_EQ((x - y).to_string(), text(a * d - b * c, b * d));
    EXPECT_EQ((x * y).to_string(), text(a * c, b * d));
  }
}

TEST(ScalarProperty, PrimeFieldMatchesModularModel) {
  std::mt19937 gen(12);
  for (std::uint32_t p : {2u, 3u, 7u, 101u}) {
    const FieldSpec f = FieldSpec::prime(p);
    std::uniform_int_distribution<long> dist(-500, 500);
    auto mod = [p](long v) { return std::to_string(((v % long(p)) + long(p)) % long(p)); };
    for (int trial = 0; trial < 200; ++trial) {
      const long a = dist(gen), b = dist(gen);
      const Scalar x = Scalar::from_integer(a, f), y = Scalar::from_integer(b, f);
      EXPECT_EQ((x + y).to_string(), mod(a + b));
      EXPECT_EQ((x * y).to_string(), mod(a * b));
      if (!y.is_zero()) EXPECT_EQ(((x / y) * y), x);
    }
  }
}

TEST(Linalg, RankOfKnownMatrices) {
  Matrix m(3, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 6;
  m(2, 0) = 1; m(2, 1) = 0; m(2, 2) = 1;
  EXPECT_EQ(rank(m), 2u);
  EXPECT_EQ(nullspace(m).size(), 1u);
  EXPECT_EQ(rank(Matrix::identity(4)), 4u);
  EXPECT_EQ(rank(Matrix(2, 5)), 0u);
}

TEST(Linalg, RankDependsOnCharacteristic) {
  Matrix m(2, 2);
  m(0, 0) = 1; m(0, 1) = 1;
  m(1, 0) = 1; m(1, 1) = 8;
  EXPECT_EQ(rank(m), 2u);
  Matrix f7(2, 2);
  const FieldSpec f = FieldSpec::prime(7);
  f7(0, 0) = Scalar::from_integer(1, f); f7(0, 1) = Scalar::from_integer(1, f);
  f7(1, 0) = Scalar::from_integer(1, f); f7(1, 1) = Scalar::from_integer(8, f);
  EXPECT_EQ(rank(f7), 1u);
}

TEST(LinalgProperty, LowRankProducts) {
  std::mt19937 gen(21);
  for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::uniform_int_distribution<std::size_t> dim(1, 6);
      const std::size_t rows = dim(gen), cols = dim(gen), r = dim(gen);
      const Matrix m = random_matrix(gen, rows, r, f) * random_matrix(gen, r, cols, f);
      const std::size_t k = rank(m);
      EXPECT_LE(k, std::min({rows, cols, r}));
      const auto kernel = nullspace(m);
      EXPECT_EQ(kernel.size() + k, cols);
      for (const Vec& v : kernel) EXPECT_TRUE(is_zero(m.apply(v)));
      EXPECT_EQ(rank(m.transpose()), k);
    }
  }
}

TEST(LinalgProperty, InverseAndSolve) {
  std::mt19937 gen(22);
  for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 1 + trial % 5;
      const Matrix m = random_invertible(gen, n, f);
      const auto inv = inverse(m);
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(m * *inv, Matrix::identity(n));
      EXPECT_EQ(*inv * m, Matrix::identity(n));
      const Vec x = testing::random_vec(gen, n, f);
      const auto y = solve(m, m.apply(x));
      ASSERT_TRUE(y.has_value());
      EXPECT_EQ(*y, x);
    }
  }
}

TEST(Linalg, SolveDetectsInconsistency) {
  Matrix m(2, 1);
  m(0, 0) = 1;
  m(1, 0) = 1;
  EXPECT_FALSE(solve(m, Vec{Scalar(1), Scalar(2)}).has_value());
  EXPECT_FALSE(inverse(m).has_value());
}

TEST(Linalg, EchelonExpress) {
  Echelon e(3, true);
  EXPECT_TRUE(e.insert(Vec{Scalar(1), Scalar(0), Scalar(1)}));
  EXPECT_TRUE(e.insert(Vec{Scalar(0), Scalar(1), Scalar(1)}));
  Vec relation;
  EXPECT_FALSE(e.insert(Vec{Scalar(2), Scalar(3), Scalar(5)}, &relation));
  const auto c = e.express(Vec{Scalar(1), Scalar(1), Scalar(2)});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ((*c)[0], Scalar(1));
  EXPECT_EQ((*c)[1], Scalar(1));
  EXPECT_FALSE(e.contains(Vec{Scalar(0), Scalar(0), Scalar(1)}));
}

}  // namespace
}  // namespace qdeform
