#include <gtest/gtest.h>

#include <random>

#include "qdeform/deformation.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/io.hpp"
#include "qdeform/morita.hpp"
#include "support.hpp"

namespace qdeform {
namespace {

using testing::golden_path;
using testing::load_example;
using testing::random_cochain;

// Brute-force associativity of A_f on all basis triples.
bool associative(const DeformedAlgebra& d) {
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (std::size_t j = 0; j < d.dim(); ++j)
      for (std::size_t k = 0; k < d.dim(); ++k) {
        const auto x = d.element(i), y = d.element(j), z = d.element(k);
        if (!(d.multiply(d.multiply(x, y), z) == d.multiply(x, d.multiply(y, z)))) return false;
      }
  return true;
}

// f̂ of a single path, term by term.
Vec hat_of_path(const Path& p, const AlgebraBasis& basis, const Cochain& f) {
  const Quiver& q = basis.quiver();
  Vec out(basis.dim());
  for (std::size_t i = 1; i < p.length(); ++i) {
    const Vec left = basis.normal_form(p.subpath(q, 0, i));
    const Vec arrow = basis.normal_form(p.subpath(q, i, 1));
    const Vec right = basis.normal_form(p.subpath(q, i + 1, p.length() - i - 1));
    out = add(out, basis.multiply(evaluate(f, {left, arrow}, basis), right));
  }
  return out;
}

struct Expected {
  const char* name;
  std::size_t dim;
  std::size_t loops;
};

const Expected kExpected[] = {{"dual_numbers", 4, 0}, {"example2", 10, 1}, {"example3", 12, 3}, {"example4", 8, 1}};

TEST(Deformation, DimensionsAndLoops) {
  for (const auto& e : kExpected) {
    const auto ex = load_example(e.name);
    const DeformedPresentation dp = build_presentation(ex.basis, ex.f);
    const Presentation& p = dp.presentation;
    std::size_t loops = 0;
    for (const auto& a : p.quiver.arrows()) loops += a.tag == kDeformationTag;
    EXPECT_EQ(loops, e.loops) << e.name;
    const auto b = compute_basis(p.quiver, p.relations, p.field);
    EXPECT_EQ(b.dim(), e.dim) << e.name;
    EXPECT_EQ(DeformedAlgebra(ex.basis, ex.f).dim(), e.dim);
  }
}

TEST(Deformation, MatchesPublishedPresentations) {
  for (const auto& e : kExpected) {
    const auto ex = load_example(e.name);
    const Presentation ours = build_presentation(ex.basis, ex.f).presentation;
    const AlgebraFile golden = load_algebra(golden_path(std::string(e.name) + "_deformed.alg"));
    EXPECT_EQ(ours.quiver, golden.presentation.quiver) << e.name;
    const auto a = compute_basis(ours.quiver, ours.relations, ours.field);
    const auto b = compute_basis(golden.presentation.quiver, golden.presentation.relations, golden.presentation.field);
    EXPECT_TRUE(same_ideal(a, b)) << e.name;
  }
}

TEST(Deformation, DotOutput) {
  for (const char* name : {"example2", "example3"}) {
    const auto ex = load_example(name);
    const Presentation p = build_presentation(ex.basis, ex.f).presentation;
    EXPECT_EQ(emit_dot(p), read_file(golden_path(std::string(name) + "_deformed.dot"))) << name;
  }
}

TEST(Deformation, PresentationTheorem) {
  for (const auto& name : testing::kExamples) {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
      const auto ex = load_example(name, f);
      const Report r = verify_presentation(ex.basis, ex.f, build_presentation(ex.basis, ex.f));
      EXPECT_TRUE(r.passed()) << name;
      const Cochain zero(2, ex.basis.dim());
      EXPECT_TRUE(verify_presentation(ex.basis, zero, build_presentation(ex.basis, zero)).passed()) << name;
    }
  }
}

TEST(Deformation, ZeroCocycleGivesTrivialExtension) {
  // A_0 = A[t]/(t^2): every vertex gets a loop
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const Presentation p = build_presentation(ex.basis, Cochain(2, ex.basis.dim())).presentation;
    EXPECT_EQ(p.quiver.arrow_count(), ex.basis.quiver().arrow_count() + ex.basis.quiver().vertex_count());
  }
}

TEST(Deformation, PathProductsEqualHatF) {
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const DeformedAlgebra d(ex.basis, ex.f);
    EXPECT_FALSE(path_product_failure(d).has_value()) << name;
    const Quiver& q = ex.basis.quiver();
    for (std::size_t i = 0; i < ex.basis.dim(); ++i) {
      const Path& p = ex.basis.path(i);
      if (p.is_trivial()) continue;
      EXPECT_EQ(hat_f(FreeElement::of_path(p), ex.basis, ex.f), hat_of_path(p, ex.basis, ex.f));
      DeformedElement prod = d.one();
      for (int a : p.arrows) prod = d.multiply(prod, DeformedElement{ex.basis.normal_form(Path::of_arrow(q, a)), Vec(ex.basis.dim())});
      EXPECT_EQ(prod.b, hat_of_path(p, ex.basis, ex.f)) << name << " " << ex.basis.label(i);
    }
  }
}

TEST(Deformation, HatFOnRelationsIsEpsilonData) {
  // the relation a*a of the dual numbers maps to f(a, a) = e(1)
  const auto ex = load_example("dual_numbers");
  const Vec v = hat_f(ex.basis.relations().front(), ex.basis, ex.f);
  EXPECT_EQ(v, ex.basis.basis_vec(ex.basis.vertex_idempotent(0)));
}

TEST(Deformation, AssociativityIffCocycle) {
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const DeformedAlgebra d(ex.basis, ex.f);
    EXPECT_TRUE(associative(d));
    EXPECT_FALSE(d.associativity_failure().has_value());

    std::size_t detected = 0;
    for (const Tuple& t : composable_tuples(ex.basis, 2))
      for (std::size_t k : value_support(ex.basis, t)) {
        Cochain g = ex.f;
        g.add(t, ex.basis.basis_vec(k));
        const DeformedAlgebra dg(ex.basis, g);
        const bool closed = is_cocycle(g, ex.basis);
        EXPECT_EQ(!dg.associativity_failure().has_value(), closed);
        EXPECT_EQ(associative(dg), closed);
        detected += !closed;
      }
    // every reduced 2-cochain of the dual numbers and of example3 is closed
    if (name == "example2" || name == "example4") EXPECT_GT(detected, 0u) << name;
  }
}

// Associativity of a structure-constant algebra, triple by triple.
bool associative(const FinDimAlgebra& a) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const Vec x = a.basis_vec(i), y = a.basis_vec(j), z = a.basis_vec(k);
        if (a.multiply(a.multiply(x, y), z) != a.multiply(x, a.multiply(y, z))) return false;
      }
  return true;
}

TEST(Deformation, PerturbedFullTableIsDetected) {
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
    const FullCochain f = extend_to_full(ex.f, ex.basis);
    EXPECT_TRUE(associative(deformed_structure(a, f)));
    std::size_t detected = 0;
    for (std::size_t t = 0; t < f.tuple_count(); t += 3)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        FullCochain g = f;
        g.at(t)[k] += Scalar(1);
        const bool closed = full_differential(g, a).is_zero();
        EXPECT_EQ(associative(deformed_structure(a, g)), closed);
        detected += !closed;
      }
    EXPECT_GT(detected, 0u) << name;
  }
}

TEST(Deformation, ImageConditionOfExamples) {
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    EXPECT_TRUE(check_image_condition(ex.basis, ex.f).holds) << name;
  }
}

TEST(Deformation, NormalizeKeepsTheClass) {
  std::mt19937 gen(61);
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    for (int trial = 0; trial < 3; ++trial) {
      const Cochain f2 = ex.f + differential(random_cochain(gen, ex.basis, 1), ex.basis);
      const Cochain n = normalize_cocycle(ex.basis, f2);
      EXPECT_TRUE(check_image_condition(ex.basis, n).holds) << name;
      EXPECT_TRUE(cobound_solve(n - f2, ex.basis).has_value()) << name;
      EXPECT_TRUE(verify_presentation(ex.basis, n, build_presentation(ex.basis, n)).passed()) << name;
    }
  }
}

TEST(Deformation, RejectsNonCocycle) {
  std::mt19937 gen(63);
  const auto ex = load_example("example4");
  Cochain g = random_cochain(gen, ex.basis, 2);
  while (is_cocycle(g, ex.basis)) g = random_cochain(gen, ex.basis, 2);
  try {
    build_presentation(ex.basis, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotACocycle);
  }
}

TEST(Deformation, InterreduceKeepsTheIdeal) {
  for (const auto& name : testing::kExamples) {
    const auto ex = load_example(name);
    const Presentation p = build_presentation(ex.basis, ex.f).presentation;
    const Presentation r = interreduce(p);
    EXPECT_EQ(r.quiver, p.quiver);
    EXPECT_TRUE(same_ideal(compute_basis(p.quiver, p.relations, p.field), compute_basis(r.quiver, r.relations, r.field)));
  }
}

// φ multiplicative and bijective, checked on every pair of basis elements.
void expect_equivalence(const Equivalence& e, const DeformedAlgebra& from, const DeformedAlgebra& to) {
  ASSERT_EQ(rank(e.map), from.dim());
  EXPECT_EQ(e.map.apply(from.pack(from.one())), to.pack(to.one()));
  for (std::size_t i = 0; i < from.dim(); ++i)
    for (std::size_t j = 0; j < from.dim(); ++j) {
      const Vec xy = from.pack(from.multiply(from.element(i), from.element(j)));
      const auto phx = to.unpack(e.map.apply(from.pack(from.element(i))));
      const auto phy = to.unpack(e.map.apply(from.pack(from.element(j))));
      EXPECT_EQ(e.map.apply(xy), to.pack(to.multiply(phx, phy)));
    }
}

TEST(DeformationProperty, CohomologousCocyclesGiveEquivalences) {
  std::mt19937 gen(62);
  for (const auto& name : testing::kExamples) {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
      const auto ex = load_example(name, f);
      for (int trial = 0; trial < 5; ++trial) {
        const Cochain f2 = ex.f + differential(random_cochain(gen, ex.basis, 1), ex.basis);
        const auto e = deformation_equivalence(ex.f, f2, ex.basis);
        ASSERT_TRUE(e.has_value()) << name;
        const DeformedAlgebra from(ex.basis, ex.f), to(ex.basis, f2);
        EXPECT_TRUE(verify_equivalence(*e, from, to));
        expect_equivalence(*e, from, to);
      }
    }
  }
}

TEST(Deformation, NonCohomologousCocyclesHaveNoEquivalence) {
  for (const auto& name : {"dual_numbers", "example2", "example3"}) {
    const auto ex = load_example(name);
    EXPECT_FALSE(deformation_equivalence(ex.f, Cochain(2, ex.basis.dim()), ex.basis).has_value()) << name;
  }
}

}  // namespace
}  // namespace qdeform
