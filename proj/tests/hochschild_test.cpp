#include <gtest/gtest.h>

#include <random>

#include "qdeform/errors.hpp"
#include "qdeform/hochschild.hpp"
#include "support.hpp"

namespace qdeform {
namespace {

using testing::bar_matrix;
using testing::load_example;
using testing::random_cochain;
using testing::random_full;

// dim HH^2 from the unreduced bar complex, built independently in the test.
std::size_t bar_hh2(const FinDimAlgebra& a) {
  const Matrix d1 = bar_matrix(a, 1);
  const Matrix d2 = bar_matrix(a, 2);
  return (d2.cols() - rank(d2)) - rank(d1);
}

TEST(Hochschild, HH2OfExamples) {
  EXPECT_EQ(hh_dimension(load_example("example2").basis), 1u);
  EXPECT_EQ(hh_dimension(load_example("example3").basis), 1u);
  EXPECT_EQ(hh_dimension(load_example("dual_numbers").basis), 1u);
}

TEST(Hochschild, ReducedComplexAgreesWithBarComplex) {
  for (const auto& name : testing::kExamples) {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
      const auto ex = load_example(name, f);
      const HHDimensions h = hh2_dimensions(ex.basis);
      EXPECT_EQ(h.cohomology, h.cocycles - h.coboundaries);
      EXPECT_EQ(h.cohomology, bar_hh2(FinDimAlgebra::from_basis(ex.basis))) << name << " over " << f.name();
    }
  }
}

TEST(Hochschild, DualNumbersInCharacteristicTwo) {
  // over F2 the class of f(a, a) = a appears as well
  const auto ex = load_example("dual_numbers", FieldSpec::prime(2));
  EXPECT_EQ(hh_dimension(ex.basis), bar_hh2(FinDimAlgebra::from_basis(ex.basis)));
  EXPECT_EQ(hh_dimension(ex.basis), 2u);
}

TEST(Hochschild, ExampleCocyclesAreClosedAndNotExact) {
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    EXPECT_TRUE(is_cocycle(ex.f, ex.basis)) << name;
    EXPECT_FALSE(cobound_solve(ex.f, ex.basis).has_value()) << name;
  }
}

TEST(Hochschild, CoboundSolveFindsPrimitive) {
  std::mt19937 gen(51);
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const Cochain g = random_cochain(gen, ex.basis, 1);
    const Cochain dg = differential(g, ex.basis);
    const auto h = cobound_solve(dg, ex.basis);
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ(differential(*h, ex.basis), dg);
  }
}

TEST(Hochschild, NotACocycleIsReported) {
  std::mt19937 gen(55);
  const auto ex = load_example("example4");
  Cochain bad = random_cochain(gen, ex.basis, 2);
  while (is_cocycle(bad, ex.basis)) bad = random_cochain(gen, ex.basis, 2);
  try {
    cobound_solve(bad, ex.basis);
    FAIL() << "expected NotACocycle";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACocycle);
  }
}

TEST(Hochschild, ValidateRejectsBadTuples) {
  const auto ex = load_example("example2");
  Cochain c(2, ex.basis.dim());
  const std::size_t e1 = ex.basis.vertex_idempotent(0);
  c.set({e1, e1}, ex.basis.basis_vec(e1));
  EXPECT_THROW(validate_cochain(c, ex.basis), Error);
}

TEST(HochschildProperty, DifferentialSquaresToZero) {
  std::mt19937 gen(52);
  for (const auto& name : testing::kExamples) {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
      const auto ex = load_example(name, f);
      const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
      for (int trial = 0; trial < 10; ++trial) {
        const Cochain g = random_cochain(gen, ex.basis, 1);
        EXPECT_TRUE(differential(differential(g, ex.basis), ex.basis).is_zero());
        const FullCochain x0 = random_full(gen, 0, a.dim(), f);
        EXPECT_TRUE(full_differential(full_differential(x0, a), a).is_zero());
        const FullCochain x1 = random_full(gen, 1, a.dim(), f);
        EXPECT_TRUE(full_differential(full_differential(x1, a), a).is_zero());
      }
    }
  }
}

TEST(HochschildProperty, FullDifferentialMatchesBarFormula) {
  std::mt19937 gen(53);
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
    for (int degree : {1, 2}) {
      const FullCochain x = random_full(gen, degree, a.dim(), a.field());
      std::vector<Vec> values;
      for (std::size_t i = 0; i < x.tuple_count(); ++i) values.push_back(x.at(i));
      const auto expected = testing::bar_differential(values, degree, a);
      const FullCochain dx = full_differential(x, a);
      ASSERT_EQ(dx.tuple_count(), expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(dx.at(i), expected[i]);
    }
  }
}

TEST(HochschildProperty, ExtensionCommutesWithDifferential) {
  std::mt19937 gen(54);
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
    for (int trial = 0; trial < 5; ++trial) {
      const Cochain g = random_cochain(gen, ex.basis, 1);
      EXPECT_EQ(extend_to_full(differential(g, ex.basis), ex.basis), full_differential(extend_to_full(g, ex.basis), a));
    }
  }
}

}  // namespace
}  // namespace qdeform
