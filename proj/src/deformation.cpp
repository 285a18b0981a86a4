#include "qdeform/deformation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <tuple>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

using TensorKey = std::tuple<std::size_t, int, std::size_t>;
using Tensor = std::map<TensorKey, Scalar>;

void tensor_add(Tensor& t, const TensorKey& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t.try_emplace(k, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) t.erase(it);
}

// 1 ⊗ γ ⊗ 1 ↦ Σ L ⊗ α ⊗ R over the ways γ = L α R.
Tensor lift_path(const AlgebraBasis& basis, std::size_t gamma) {
  Tensor t;
  const Path& p = basis.path(gamma);
  const Quiver& q = basis.quiver();
  for (std::size_t k = 0; k < p.length(); ++k) {
    auto left = basis.index_of(p.subpath(q, 0, k));
    auto right = basis.index_of(p.subpath(q, k + 1, p.length() - k - 1));
    if (!left || !right) throw std::logic_error("subpath of a standard monomial is not standard");
    tensor_add(t, {*left, p.arrows[k], *right}, Scalar(1));
  }
  return t;
}

Tensor lift_element(const AlgebraBasis& basis, const Vec& v) {
  Tensor t;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero() || basis.path(i).is_trivial()) continue;
    for (const auto& [k, c] : lift_path(basis, i)) tensor_add(t, k, v[i] * c);
  }
  return t;
}

Tensor left_multiply(const AlgebraBasis& basis, std::size_t r, const Tensor& t) {
  Tensor out;
  for (const auto& [key, c] : t) {
    const auto& [l, a, rr] = key;
    for (const auto& [l2, d] : basis.product(r, l)) tensor_add(out, {l2, a, rr}, c * d);
  }
  return out;
}

Tensor right_multiply(const AlgebraBasis& basis, const Tensor& t, std::size_t r) {
  Tensor out;
  for (const auto& [key, c] : t) {
    const auto& [l, a, rr] = key;
    for (const auto& [r2, d] : basis.product(rr, r)) tensor_add(out, {l, a, r2}, c * d);
  }
  return out;
}

Vec image_vector(const DeformedElement& x) { return concat(x.a, x.b); }

}  // namespace

DeformedAlgebra::DeformedAlgebra(AlgebraBasis basis, Cochain f) : basis_(std::move(basis)), f_(std::move(f)) {
  if (f_.degree() != 2) throw Error(ErrorKind::InvalidCochain, "a deformation needs a 2-cochain");
  validate_cochain(f_, basis_);
  full_ = extend_to_full(f_, basis_);
}

DeformedElement DeformedAlgebra::multiply(const DeformedElement& x, const DeformedElement& y) const {
  DeformedElement r;
  r.a = basis_.multiply(x.a, y.a);
  r.b = add(basis_.multiply(x.a, y.b), basis_.multiply(x.b, y.a));
  axpy(r.b, Scalar(1), full_.evaluate({x.a, y.a}));
  return r;
}

DeformedElement DeformedAlgebra::element(std::size_t index) const {
  const std::size_t n = basis_.dim();
  if (index < n) return DeformedElement{basis_.basis_vec(index), Vec(n)};
  return DeformedElement{Vec(n), basis_.basis_vec(index - n)};
}

DeformedElement DeformedAlgebra::one() const { return DeformedElement{basis_.unit(), Vec(basis_.dim())}; }

DeformedElement DeformedAlgebra::unpack(const Vec& v) const {
  const auto n = static_cast<std::ptrdiff_t>(basis_.dim());
  return DeformedElement{Vec(v.begin(), v.begin() + n), Vec(v.begin() + n, v.end())};
}

FinDimAlgebra DeformedAlgebra::structure() const {
  const std::size_t n = dim();
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < basis_.dim(); ++i) labels.push_back(basis_.label(i));
  for (std::size_t i = 0; i < basis_.dim(); ++i) labels.push_back("t*" + basis_.label(i));
  std::vector<SparseVec> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = to_sparse(pack(multiply(element(i), element(j))));
  return FinDimAlgebra(std::move(labels), std::move(table), pack(one()), basis_.field());
}

std::optional<std::string> DeformedAlgebra::associativity_failure() const {
  return structure().find_axiom_failure();
}

DeformedElement deformed_multiply(const DeformedElement& x, const DeformedElement& y, const DeformedAlgebra& d) {
  return d.multiply(x, y);
}

Vec hat_f(const FreeElement& w, const AlgebraBasis& basis, const Cochain& f) {
  const Quiver& q = basis.quiver();
  Vec out(basis.dim());
  for (const auto& [p, c] : w.terms()) {
    const std::size_t s = p.length();
    if (s < 2) continue;
    std::vector<Vec> arrows;
    for (int a : p.arrows) arrows.push_back(basis.normal_form(Path::of_arrow(q, a)));
    // suffix[i] = class of α_i ⋯ α_s (0-based), suffix[s] = e_{t(p)}
    std::vector<Vec> suffix(s + 1);
    suffix[s] = basis.basis_vec(basis.vertex_idempotent(p.target));
    for (std::size_t i = s; i-- > 0;) suffix[i] = basis.multiply(arrows[i], suffix[i + 1]);
    Vec prefix = arrows[0];
    for (std::size_t i = 1; i < s; ++i) {
      // prefix = class of α_0 ⋯ α_{i-1}
      const Vec value = evaluate(f, {prefix, arrows[i]}, basis);
      axpy(out, c, basis.multiply(value, suffix[i + 1]));
      prefix = basis.multiply(prefix, arrows[i]);
    }
  }
  return out;
}

std::optional<std::string> path_product_failure(const DeformedAlgebra& d) {
  const AlgebraBasis& basis = d.basis();
  const Quiver& q = basis.quiver();
  const std::size_t n = basis.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Path& p = basis.path(i);
    if (p.is_trivial()) continue;
    DeformedElement prod{basis.normal_form(Path::of_arrow(q, p.arrows[0])), Vec(n)};
    for (std::size_t k = 1; k < p.length(); ++k)
      prod = d.multiply(prod, DeformedElement{basis.normal_form(Path::of_arrow(q, p.arrows[k])), Vec(n)});
    const DeformedElement expected{basis.basis_vec(i), hat_f(FreeElement::of_path(p), basis, d.cocycle())};
    if (!(prod == expected)) return "product of the arrows of " + basis.label(i) + " differs from (w, f^(w))";
  }
  return std::nullopt;
}

std::vector<IdealMultiple> ideal_multiples(const AlgebraBasis& basis) {
  std::vector<IdealMultiple> out;
  const auto& gens = basis.relations();
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].is_zero()) continue;
    const Path& lead = gens[g].leading().first;
    for (std::size_t u = 0; u < basis.dim(); ++u) {
      const Path& up = basis.path(u);
      if (up.target != lead.source) continue;
      for (std::size_t v = 0; v < basis.dim(); ++v) {
        const Path& vp = basis.path(v);
        if (vp.source != lead.target) continue;
        if (up.length() + lead.length() + vp.length() > basis.max_degree()) continue;
        FreeElement x = FreeElement::of_path(up) * gens[g] * FreeElement::of_path(vp);
        out.push_back(IdealMultiple{u, g, v, std::move(x)});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const IdealMultiple& a, const IdealMultiple& b) {
    return basis.path(a.left).length() + basis.path(a.right).length() <
           basis.path(b.left).length() + basis.path(b.right).length();
  });
  return out;
}

ImageCondition check_image_condition(const AlgebraBasis& basis, const Cochain& f) {
  ImageCondition result;
  const auto multiples = ideal_multiples(basis);
  Echelon hat(basis.dim(), true);
  for (const auto& m : multiples) hat.insert(hat_f(m.element, basis, f));
  result.hat_rank = hat.rank();
  Echelon image(basis.dim());
  result.holds = true;
  for (const auto& [args, v] : f.values()) {
    if (!image.insert(v)) continue;
    auto coeffs = hat.express(v);
    if (!coeffs) {
      result.holds = false;
      continue;
    }
    FreeElement x;
    for (std::size_t j = 0; j < coeffs->size(); ++j)
      if (!(*coeffs)[j].is_zero()) x += (*coeffs)[j] * multiples[j].element;
    result.witnesses.emplace_back(v, std::move(x));
  }
  result.image_rank = image.rank();
  return result;
}

Cochain normalize_cocycle(const AlgebraBasis& basis, const Cochain& f) {
  if (!is_cocycle(f, basis)) throw Error(ErrorKind::NotACocycle, "normalization needs a 2-cocycle");
  if (check_image_condition(basis, f).holds) return f;

  const Quiver& q = basis.quiver();
  std::map<std::pair<std::size_t, int>, Vec> rho_cache;
  auto hat_rho = [&](std::size_t left, int arrow) -> const Vec& {
    auto key = std::make_pair(left, arrow);
    auto it = rho_cache.find(key);
    if (it != rho_cache.end()) return it->second;
    const Path la = *concat(basis.path(left), Path::of_arrow(q, arrow));
    FreeElement rho = FreeElement::of_path(la) - basis.lift(basis.normal_form(la));
    return rho_cache.emplace(key, hat_f(rho, basis, f)).first->second;
  };

  Cochain g(2, basis.dim());
  for (const Tuple& r : composable_tuples(basis, 2)) {
    Tensor t = left_multiply(basis, r[0], lift_path(basis, r[1]));
    for (const auto& [k, c] : lift_element(basis, basis.multiply(basis.basis_vec(r[0]), basis.basis_vec(r[1]))))
      tensor_add(t, k, -c);
    for (const auto& [k, c] : right_multiply(basis, lift_path(basis, r[0]), r[1])) tensor_add(t, k, c);
    Vec value(basis.dim());
    for (const auto& [key, c] : t) {
      const auto& [left, arrow, right] = key;
      axpy(value, c, basis.multiply(hat_rho(left, arrow), basis.basis_vec(right)));
    }
    g.set(r, value);
  }

  std::string problem;
  try {
    validate_cochain(g, basis);
    if (!is_cocycle(g, basis)) {
      problem = "normalized cochain is not a cocycle";
    } else if (!cobound_solve(f - g, basis)) {
      problem = "normalized cocycle is not cohomologous to the input";
    } else if (!check_image_condition(basis, g).holds) {
      problem = "normalized cocycle still violates the image condition";
    }
  } catch (const Error& e) {
    problem = e.what();
  }
  if (!problem.empty()) throw Error(ErrorKind::NormalizationFailed, problem);
  return g;
}

std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Input: return "";
    case RelationKind::Square: return "square";
    case RelationKind::Commute: return "commute";
    case RelationKind::Lift: return "lift";
  }
  return "";
}

std::optional<RelationKind> relation_kind_from_name(std::string_view name) {
  if (name.empty()) return RelationKind::Input;
  if (name == "square") return RelationKind::Square;
  if (name == "commute") return RelationKind::Commute;
  if (name == "lift") return RelationKind::Lift;
  return std::nullopt;
}

DeformedPresentation build_presentation(const AlgebraBasis& basis, const Cochain& f) {
  if (!is_cocycle(f, basis)) throw Error(ErrorKind::NotACocycle, "f is not a 2-cocycle");
  if (!check_image_condition(basis, f).holds)
    throw Error(ErrorKind::ImageConditionFailed, "Im f is not contained in the image of the ideal under f-hat");

  const Quiver& q = basis.quiver();
  const FieldSpec field = basis.field();
  const Scalar one = Scalar::from_integer(1, field);
  DeformedPresentation out;
  out.presentation.field = field;
  out.generators = basis.relations();

  Echelon image(basis.dim());
  for (const auto& [args, v] : f.values()) image.insert(v);

  Quiver& qf = out.presentation.quiver;
  for (const auto& v : q.vertices()) qf.add_vertex(v);
  for (const auto& a : q.arrows()) qf.add_arrow(a.id, a.source, a.target, a.tag);

  std::vector<IdealMultiple> multiples;
  bool multiples_ready = false;

  for (std::size_t v = 0; v < q.vertex_count(); ++v) {
    const int vertex = static_cast<int>(v);
    EpsilonEntry entry;
    entry.vertex = vertex;
    const Vec ev = basis.basis_vec(basis.vertex_idempotent(vertex));
    if (!image.contains(ev)) {
      std::string name = "t" + q.vertex_name(vertex);
      while (qf.arrow_index(name)) name += '_';
      entry.is_arrow = true;
      entry.arrow = qf.add_arrow(name, vertex, vertex, std::string(kDeformationTag));
      entry.element = FreeElement::of_path(Path::of_arrow(qf, entry.arrow), one);
      out.epsilons.push_back(std::move(entry));
      continue;
    }

    auto at_vertex = [&](const FreeElement& x) {
      return !x.is_zero() && x.leading().first.source == vertex && x.leading().first.target == vertex;
    };
    // First over the generators alone.
    std::vector<FreeElement> candidates;
    for (const auto& r : basis.relations())
      if (at_vertex(r)) candidates.push_back(r);
    Echelon solver(basis.dim(), true);
    for (const auto& c : candidates) solver.insert(hat_f(c, basis, f));
    auto mu = solver.express(ev);
    bool extended = false;
    if (!mu) {
      if (!multiples_ready) {
        multiples = ideal_multiples(basis);
        multiples_ready = true;
      }
      candidates.clear();
      for (const auto& m : multiples)
        if (at_vertex(m.element)) candidates.push_back(m.element);
      Echelon wide(basis.dim(), true);
      for (const auto& c : candidates) wide.insert(hat_f(c, basis, f));
      mu = wide.express(ev);
      extended = true;
    }
    if (!mu)
      throw Error(ErrorKind::EpsilonUnresolvable,
                  fmt::format("e({}) lies in Im f but is not f-hat of an ideal element within degree {}",
                              q.vertex_name(vertex), basis.max_degree()));
    for (std::size_t j = 0; j < mu->size(); ++j) {
      if ((*mu)[j].is_zero()) continue;
      entry.combination.emplace_back(candidates[j], (*mu)[j]);
      entry.element += (*mu)[j] * candidates[j];
      if (extended && std::find(out.generators.begin(), out.generators.end(), candidates[j]) == out.generators.end()) {
        out.generators.push_back(candidates[j]);
        out.used_ideal_multiples = true;
      }
    }
    out.epsilons.push_back(std::move(entry));
  }

  Presentation& pres = out.presentation;
  auto emit = [&](FreeElement r, RelationKind kind) {
    if (r.is_zero()) return;
    pres.relations.push_back(std::move(r));
    pres.kinds.push_back(kind);
  };
  for (const auto& e : out.epsilons) emit(e.element * e.element, RelationKind::Square);
  for (std::size_t a = 0; a < q.arrow_count(); ++a) {
    const Arrow& arrow = q.arrow(static_cast<int>(a));
    const FreeElement hat = FreeElement::of_path(Path::of_arrow(qf, static_cast<int>(a)), one);
    emit(out.epsilons[static_cast<std::size_t>(arrow.source)].element * hat -
             hat * out.epsilons[static_cast<std::size_t>(arrow.target)].element,
         RelationKind::Commute);
  }
  for (const auto& rho : out.generators) {
    if (rho.is_zero()) continue;
    const int target = rho.leading().first.target;
    FreeElement w = basis.lift(hat_f(rho, basis, f));
    FreeElement rel;
    for (const auto& [p, c] : rho.terms()) rel.add_term(p, c.in_field(field));
    emit(rel - w * out.epsilons[static_cast<std::size_t>(target)].element, RelationKind::Lift);
  }
  return out;
}

DeformedElement project(const FreeElement& x, const Presentation& pres, const DeformedAlgebra& d) {
  const AlgebraBasis& basis = d.basis();
  const std::size_t n = basis.dim();
  DeformedElement total{Vec(n), Vec(n)};
  for (const auto& [p, c] : x.terms()) {
    DeformedElement acc{basis.basis_vec(basis.vertex_idempotent(p.source)), Vec(n)};
    for (int a : p.arrows) {
      const Arrow& arrow = pres.quiver.arrow(a);
      DeformedElement factor;
      if (arrow.tag == kDeformationTag) {
        factor = DeformedElement{Vec(n), basis.basis_vec(basis.vertex_idempotent(arrow.source))};
      } else {
        auto original = basis.quiver().arrow_index(arrow.id);
        if (!original) throw Error(ErrorKind::InvalidQuiver, fmt::format("arrow '{}' is not in Q", arrow.id));
        factor = DeformedElement{basis.normal_form(Path::of_arrow(basis.quiver(), *original)), Vec(n)};
      }
      acc = d.multiply(acc, factor);
    }
    axpy(total.a, c, acc.a);
    axpy(total.b, c, acc.b);
  }
  return total;
}

Report verify_presentation(const AlgebraBasis& basis, const Cochain& f, const DeformedPresentation& dp) {
  Report report;
  const Presentation& pres = dp.presentation;
  const DeformedAlgebra d(basis, f);
  const std::size_t target = 2 * basis.dim();

  try {
    const AlgebraBasis deformed = compute_basis(pres.quiver, pres.relations, pres.field, basis.max_degree());
    report.add("dimension", deformed.dim() == target,
               fmt::format("dim kQ_f/I_f = {}, 2 dim A = {}", deformed.dim(), target));
  } catch (const Error& e) {
    report.add("dimension", false, fmt::format("{}: {}", e.kind_name(), e.what()));
  }

  std::size_t bad = 0;
  std::string first_bad;
  for (const auto& r : pres.relations) {
    const DeformedElement img = project(r, pres, d);
    if (!is_zero(img.a) || !is_zero(img.b)) {
      if (bad++ == 0) first_bad = element_to_string(pres.quiver, r);
    }
  }
  report.add("kernel", bad == 0,
             bad == 0 ? fmt::format("all {} relations vanish in A_f", pres.relations.size())
                      : fmt::format("{} relations survive, first: {}", bad, first_bad));

  bool eps_ok = true;
  for (const auto& e : dp.epsilons) {
    const DeformedElement img = project(e.element, pres, d);
    const DeformedElement want{Vec(basis.dim()), basis.basis_vec(basis.vertex_idempotent(e.vertex))};
    eps_ok = eps_ok && img == want;
  }
  report.add("epsilon", eps_ok, "each epsilon maps to (0, e_i)");

  Echelon span(target);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const FreeElement gamma = FreeElement::of_path(basis.path(i));
    span.insert(image_vector(project(gamma, pres, d)));
    const FreeElement eps = dp.epsilons[static_cast<std::size_t>(basis.path(i).target)].element;
    span.insert(image_vector(project(gamma * eps, pres, d)));
  }
  report.add("independence", span.rank() == target,
             fmt::format("rank of the images = {}, expected {}", span.rank(), target));
  return report;
}

Presentation interreduce(const Presentation& pres, std::size_t max_degree) {
  const AlgebraBasis b = compute_basis(pres.quiver, pres.relations, pres.field, max_degree);
  Presentation out;
  out.quiver = pres.quiver;
  out.field = pres.field;
  for (const auto& rule : b.rules()) {
    out.relations.push_back(FreeElement::of_path(rule.lead, Scalar::from_integer(1, pres.field)) - rule.tail);
    out.kinds.push_back(RelationKind::Input);
  }
  return out;
}

bool verify_equivalence(const Equivalence& e, const DeformedAlgebra& from, const DeformedAlgebra& to) {
  const std::size_t n = from.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vec lhs = e.map.apply(from.pack(from.multiply(from.element(i), from.element(j))));
      const DeformedElement x = to.unpack(e.map.apply(from.pack(from.element(i))));
      const DeformedElement y = to.unpack(e.map.apply(from.pack(from.element(j))));
      if (lhs != to.pack(to.multiply(x, y))) return false;
    }
  return true;
}

std::optional<Equivalence> deformation_equivalence(const Cochain& f, const Cochain& f2, const AlgebraBasis& basis) {
  auto g = cobound_solve(f - f2, basis);
  if (!g) return std::nullopt;
  const DeformedAlgebra from(basis, f);
  const DeformedAlgebra to(basis, f2);
  const std::size_t n = basis.dim();
  const FullCochain full_g = extend_to_full(*g, basis);
  for (int sign : {1, -1}) {
    Equivalence e{*g, sign, Matrix::identity(2 * n)};
    for (std::size_t i = 0; i < n; ++i) {
      const Vec& gi = full_g.at(i);
      for (std::size_t k = 0; k < n; ++k) e.map(n + k, i) = Scalar(sign) * gi[k];
    }
    if (verify_equivalence(e, from, to)) return e;
  }
  throw Error(ErrorKind::SignResolutionFailed, "neither sign makes the candidate map multiplicative");
}

}  // namespace qdeform
