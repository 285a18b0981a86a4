// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "qdeform/category.hpp"
#include "qdeform/cli.hpp"
#include "qdeform/deformation.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/morita.hpp"
#include "support.hpp"

namespace qdeform {
namespace {

using testing::golden_path;
using testing::kExamples;
using testing::load_example;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome examples_golden() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::pair<const char*, std::size_t> expected[] = {
      {"dual_numbers", 4}, {"example2", 10}, {"example3", 12}, {"example4", 8}};
  for (const auto& [name, dim] : expected) {
    std::ostringstream out, err;
    const int code = cli::run({"deform", testing::data_path(std::string(name) + ".alg")}, out, err);
    o.require(code == 0, fmt::format("deform {} exited with {}", name, code));
    if (code != 0) continue;
    const Presentation ours = parse_algebra(out.str()).presentation;
    const Presentation golden = load_algebra(golden_path(std::string(name) + "_deformed.alg")).presentation;
    o.require(ours.quiver == golden.quiver, fmt::format("{}: quiver differs", name));
    const auto a = compute_basis(ours.quiver, ours.relations, ours.field);
    const auto b = compute_basis(golden.quiver, golden.relations, golden.field);
    o.require(same_ideal(a, b), fmt::format("{}: ideal differs", name));
    o.require(a.dim() == dim, fmt::format("{}: dim {} != {}", name, a.dim(), dim));
  }
  const double s = seconds_since(t0);
  o.require(s < 5.0, fmt::format("took {:.2f} s", s));
  if (o.pass) o.detail = fmt::format("dims 4, 10, 12, 8; quivers and ideals match ({:.2f} s)", s);
  return o;
}

Outcome hh_dimensions() {
  Outcome o;
  for (const char* name : {"example2", "example3"}) {
    const auto ex = load_example(name);
    const std::size_t h = hh_dimension(ex.basis);
    const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
    const Matrix d1 = testing::bar_matrix(a, 1), d2 = testing::bar_matrix(a, 2);
    const std::size_t oracle = d2.cols() - rank(d2) - rank(d1);
    o.require(h == 1, fmt::format("{}: dim HH^2 = {}", name, h));
    o.require(oracle == 1, fmt::format("{}: bar complex gives {}", name, oracle));
  }
  if (o.pass) o.detail = "example2 -> 1, example3 -> 1 (reduced and bar complexes agree)";
  return o;
}

// Associativity of A_g read off the triple products directly.
bool associative(const FinDimAlgebra& a) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        const Vec x = a.basis_vec(i), y = a.basis_vec(j), z = a.basis_vec(k);
        if (a.multiply(a.multiply(x, y), z) != a.multiply(x, a.multiply(y, z))) return false;
      }
  return true;
}

Outcome associativity() {
  Outcome o;
  std::size_t perturbed = 0, detected = 0;
  for (const auto& name : kExamples) {
    const auto ex = load_example(name);
    const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
    o.require(!DeformedAlgebra(ex.basis, ex.f).associativity_failure(), name + ": A_f not associative");
    const FullCochain f = extend_to_full(ex.f, ex.basis);
    o.require(associative(deformed_structure(a, f)), name + ": A_f fails a triple");
    std::size_t found = 0;
    for (std::size_t t = 0; t < f.tuple_count(); ++t)
      for (std::size_t k = 0; k < a.dim(); ++k) {
        FullCochain g = f;
        g.at(t)[k] += Scalar(1);
        std::vector<Vec> values;
        for (std::size_t i = 0; i < g.tuple_count(); ++i) values.push_back(g.at(i));
        bool closed = true;
        for (const Vec& v : testing::bar_differential(values, 2, a)) closed = closed && is_zero(v);
        const bool assoc = associative(deformed_structure(a, g));
        o.require(assoc == closed, fmt::format("{}: perturbation {} / {} misjudged", name, t, k));
        ++perturbed;
        found += !assoc;
      }
    o.require(found > 0, name + ": no perturbation detected");
    detected += found;
  }
  if (o.pass)
    o.detail = fmt::format("A_f associative for all examples; {} of {} single +1 perturbations break associativity, "
                           "exactly the non-cocycles",
                           detected, perturbed);
  return o;
}

// f̂ of a path, split by split.
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

Outcome path_products() {
  Outcome o;
  std::size_t paths = 0;
  for (const auto& name : kExamples) {
    const auto ex = load_example(name);
    const DeformedAlgebra d(ex.basis, ex.f);
    const Quiver& q = ex.basis.quiver();
    for (std::size_t i = 0; i < ex.basis.dim(); ++i) {
      const Path& p = ex.basis.path(i);
      if (p.is_trivial()) continue;
      DeformedElement prod = d.one();
      for (int a : p.arrows) prod = d.multiply(prod, DeformedElement{ex.basis.normal_form(Path::of_arrow(q, a)), Vec(ex.basis.dim())});
      o.require(prod.a == ex.basis.basis_vec(i) && prod.b == hat_of_path(p, ex.basis, ex.f),
                fmt::format("{}: {}", name, ex.basis.label(i)));
      ++paths;
    }
    o.require(!path_product_failure(d), name + ": library check failed");
  }
  if (o.pass) o.detail = fmt::format("{} nontrivial basis paths checked", paths);
  return o;
}

Outcome presentation_theorem() {
  Outcome o;
  for (const auto& name : kExamples) {
    const auto ex = load_example(name);
    const Cochain zero(2, ex.basis.dim());
    for (const Cochain* f : {&ex.f, &zero}) {
      const Report r = verify_presentation(ex.basis, *f, build_presentation(ex.basis, *f));
      for (const auto& c : r.checks())
        o.require(c.pass, fmt::format("{}{}: {} {}", name, f == &zero ? " (f = 0)" : "", c.name, c.detail));
      for (const char* check : {"dimension", "kernel", "independence"}) {
        bool seen = false;
        for (const auto& c : r.checks()) seen = seen || c.name == check;
        o.require(seen, fmt::format("{}: no {} check", name, check));
      }
    }
  }
  if (o.pass) o.detail = "dimension, kernel and independence on 4 examples and f = 0";
  return o;
}

Outcome transfer() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937 gen(2024);
  const FieldSpec f7 = FieldSpec::prime(7);
  for (const auto& name : kExamples) {
    const auto ex = load_example(name, f7);
    const MoritaContext c = identity_context(FinDimAlgebra::from_basis(ex.basis));
    for (int k = 0; k < 20; ++k) {
      const FullCochain x = testing::random_full(gen, 2, c.A.dim(), f7);
      o.require(transfer_phi(c, x, 2) == x && transfer_psi(c, x, 2) == x, name + ": identity transfer moved a cochain");
    }
  }
  for (FieldSpec f : {f7, FieldSpec::rationals()}) {
    const auto ex = load_example("dual_numbers", f);
    for (std::size_t n : {2u, 3u}) {
      const MoritaContext c = matrix_context(FinDimAlgebra::from_basis(ex.basis), n);
      for (int k = 0; k < 20; ++k) {
        const FullCochain x = testing::random_full(gen, 2, c.A.dim(), f);
        const FullCochain y = testing::random_full(gen, 2, c.B.dim(), f);
        const std::string where = fmt::format("M_{} over {}", n, f.name());
        o.require(full_differential(transfer_phi(c, x, 2), c.B) == transfer_phi(c, full_differential(x, c.A), 3),
                  where + ": d phi != phi d");
        o.require(full_differential(transfer_psi(c, y, 2), c.A) == transfer_psi(c, full_differential(y, c.B), 3),
                  where + ": d psi != psi d");
        const FullCochain lhs = homotopy_h(c, full_differential(x, c.A), 2) + full_differential(homotopy_h(c, x, 1), c.A);
        o.require(lhs == x - transfer_psi(c, transfer_phi(c, x, 2), 2), where + ": homotopy identity fails");
      }
    }
  }
  const double s = seconds_since(t0);
  o.require(s < 30.0, fmt::format("took {:.2f} s", s));
  if (o.pass) o.detail = fmt::format("identity and matrix contexts, 20 cochains each ({:.2f} s)", s);
  return o;
}

Outcome morita() {
  Outcome o;
  const auto t0 = Clock::now();
  for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
    for (const auto& name : kExamples) {
      const auto ex = load_example(name, f);
      const Report r = verify_morita_deformed(identity_context(FinDimAlgebra::from_basis(ex.basis)),
                                              extend_to_full(ex.f, ex.basis));
      o.require(r.passed(), fmt::format("{} over {}: {} failed checks", name, f.name(), r.failures()));
    }
    const auto ex = load_example("dual_numbers", f);
    const Report r = verify_morita_deformed(matrix_context(FinDimAlgebra::from_basis(ex.basis), 2),
                                            extend_to_full(ex.f, ex.basis));
    o.require(r.passed(), fmt::format("M_2 of dual numbers over {}: {} failed checks", f.name(), r.failures()));
  }
  const double s = seconds_since(t0);
  o.require(s < 30.0, fmt::format("took {:.2f} s", s));
  if (o.pass) o.detail = fmt::format("identity contexts and M_2, over Q and F7 ({:.2f} s)", s);
  return o;
}

Outcome modules() {
  Outcome o;
  for (const auto& name : kExamples) {
    const auto ex = load_example(name);
    const DeformedAlgebra d(ex.basis, ex.f);
    const ConcreteModule m = functor_F(regular_uple(d), d);
    const ConcreteModule r = regular_module(d);
    o.require(m.dim == r.dim && m.action == r.action, name + ": F(A, A, Id, f) differs from A_f");
  }
  std::mt19937 gen(4242);
  std::size_t done = 0;
  for (int attempt = 0; attempt < 2000 && done < 10; ++attempt) {
    const auto& name = kExamples[static_cast<std::size_t>(attempt) % kExamples.size()];
    const auto ex = load_example(name);
    const DeformedAlgebra d(ex.basis, ex.f);
    const auto u = testing::random_uple(gen, d, 4);
    if (!u) continue;
    ++done;
    UpleModule back;
    const auto iso = roundtrip_isomorphism(*u, d, &back);
    o.require(iso.has_value(), name + ": no round-trip isomorphism");
    if (!iso) continue;
    const auto i0 = inverse(iso->u0);
    const auto i2 = inverse(iso->u2);
    o.require(i0 && i2, name + ": round-trip triple not invertible");
    if (!i0 || !i2) continue;
    const MorphismTriple inv{*i0, Scalar(-1) * (*i2 * iso->u1 * *i0), *i2};
    o.require(!triple_failure(*iso, *u, back, d) && !triple_failure(inv, back, *u, d),
              name + ": round-trip triple is not a morphism");
  }
  o.require(done == 10, fmt::format("only {} random uples drawn", done));
  if (o.pass) o.detail = "regular uple of every example; 10 random uples with dims <= 4";
  return o;
}

Outcome properties() {
  Outcome o;
  std::mt19937 gen(9);
  for (const auto& name : kExamples) {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
      const auto ex = load_example(name, f);
      const FinDimAlgebra a = FinDimAlgebra::from_basis(ex.basis);
      for (int k = 0; k < 10; ++k) {
        const Cochain g = testing::random_cochain(gen, ex.basis, 1);
        o.require(differential(differential(g, ex.basis), ex.basis).is_zero(), name + ": d d != 0 (reduced)");
        const FullCochain x = testing::random_full(gen, 1, a.dim(), f);
        o.require(full_differential(full_differential(x, a), a).is_zero(), name + ": d d != 0 (bar)");

        const FreeElement u = testing::random_element(gen, ex.basis.quiver(), f);
        const FreeElement v = testing::random_element(gen, ex.basis.quiver(), f);
        const Vec nu = ex.basis.normal_form(u);
        o.require(ex.basis.normal_form(ex.basis.lift(nu)) == nu, name + ": normal form not idempotent");
        o.require(ex.basis.normal_form(u * v) == ex.basis.multiply(nu, ex.basis.normal_form(v)),
                  name + ": normal form not multiplicative");
      }
      for (int k = 0; k < 3; ++k) {
        const Cochain f2 = ex.f + differential(testing::random_cochain(gen, ex.basis, 1), ex.basis);
        const auto e = deformation_equivalence(ex.f, f2, ex.basis);
        o.require(e.has_value(), name + ": no equivalence for f + d g");
        if (!e) continue;
        const DeformedAlgebra from(ex.basis, ex.f), to(ex.basis, f2);
        bool ok = rank(e->map) == from.dim();
        for (std::size_t i = 0; i < from.dim() && ok; ++i)
          for (std::size_t j = 0; j < from.dim() && ok; ++j) {
            const Vec xy = from.pack(from.multiply(from.element(i), from.element(j)));
            const auto px = to.unpack(e->map.apply(from.pack(from.element(i))));
            const auto py = to.unpack(e->map.apply(from.pack(from.element(j))));
            ok = e->map.apply(xy) == to.pack(to.multiply(px, py));
          }
        o.require(ok, name + ": equivalence not multiplicative");
      }
    }
    const auto ex = load_example(name);
    const Presentation deformed = build_presentation(ex.basis, ex.f).presentation;
    for (const Presentation* p : {&ex.file.presentation, &deformed})
      o.require(parse_algebra(emit_algebra(*p)).presentation == *p, name + ": parse(emit(p)) != p");
  }
  if (o.pass) o.detail = "d d = 0, normal forms, parse/emit, equivalences for f + d g";
  return o;
}

}  // namespace
}  // namespace qdeform

int main() {
  using namespace qdeform;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"example reproduction", examples_golden},
      {"HH^2 dimensions", hh_dimensions},
      {"associativity iff cocycle", associativity},
      {"path products", path_products},
      {"presentation theorem", presentation_theorem},
      {"transfer maps", transfer},
      {"deformed Morita equivalence", morita},
      {"module category equivalence", modules},
      {"property suites", properties},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const Error& e) {
      o = Outcome{false, fmt::format("{}: {}", e.kind_name(), e.what())};
    }
    failures += !o.pass;
    std::cout << fmt::format("criterion {} {} - {}: {}", index, o.pass ? "PASS" : "FAIL", name, o.detail) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
