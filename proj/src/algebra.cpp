#include "qdeform/algebra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

struct WorkRule {
  std::size_t id;
  Path lead;
  FreeElement tail;
};

// Position of `needle` inside `hay` as a contiguous block of arrows.
std::optional<std::size_t> find_subword(const std::vector<int>& hay, const std::vector<int>& needle) {
  if (needle.size() > hay.size()) return std::nullopt;
  auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end());
  if (it == hay.end()) return std::nullopt;
  return static_cast<std::size_t>(it - hay.begin());
}

bool is_suffix(const std::vector<int>& word, const std::vector<int>& suffix) {
  return suffix.size() <= word.size() &&
         std::equal(suffix.begin(), suffix.end(), word.end() - static_cast<std::ptrdiff_t>(suffix.size()));
}

// u * x * v in kQ for paths u, v.
FreeElement sandwich(const Path& u, const FreeElement& x, const Path& v) {
  FreeElement r;
  for (const auto& [p, c] : x.terms()) {
    auto up = concat(u, p);
    if (!up) continue;
    auto upv = concat(*up, v);
    if (upv) r.add_term(*upv, c);
  }
  return r;
}

template <typename Rules>
FreeElement reduce_with(const Quiver& q, const FreeElement& x, const Rules& rules) {
  FreeElement result;
  FreeElement work = x;
  while (!work.is_zero()) {
    const Path p = work.leading().first;
    const Scalar c = work.leading().second;
    bool rewritten = false;
    for (const auto& rule : rules) {
      auto pos = find_subword(p.arrows, rule.lead.arrows);
      if (!pos) continue;
      const Path u = p.subpath(q, 0, *pos);
      const Path v = p.subpath(q, *pos + rule.lead.length(), p.length() - *pos - rule.lead.length());
      work.add_term(p, -c);
      work += c * sandwich(u, rule.tail, v);
      rewritten = true;
      break;
    }
    if (!rewritten) {
      result.add_term(p, c);
      work.add_term(p, -c);
    }
  }
  return result;
}

void check_endpoints(const Quiver& q, const FreeElement& r) {
  if (r.is_zero()) return;
  const Path& first = r.terms().begin()->first;
  for (const auto& [p, c] : r.terms()) {
    if (p.source != first.source || p.target != first.target)
      throw Error(ErrorKind::InconsistentRelation,
                  fmt::format("relation '{}' mixes paths with different endpoints",
                              element_to_string(q, r)));
  }
}

// Basis display order: by length, then arrow indices ascending, then vertex.
bool display_less(const Path& a, const Path& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  if (a.arrows != b.arrows) return a.arrows < b.arrows;
  return a.source < b.source;
}

}  // namespace

std::optional<std::size_t> AlgebraBasis::index_of(const Path& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FreeElement AlgebraBasis::reduce(const FreeElement& x) const { return reduce_with(quiver_, x, rules_); }

Vec AlgebraBasis::normal_form(const FreeElement& x) const {
  Vec v(dim());
  const FreeElement reduced = reduce(x);
  for (const auto& [p, c] : reduced.terms()) {
    auto i = index_of(p);
    if (!i) throw std::logic_error("normal form left a nonstandard monomial");
    v[*i] += c;
  }
  return v;
}

Vec AlgebraBasis::normal_form(const Path& p) const {
  if (auto i = index_of(p)) return basis_vec(*i);
  return normal_form(FreeElement::of_path(p));
}

FreeElement AlgebraBasis::lift(const Vec& v) const {
  FreeElement x;
  for (std::size_t i = 0; i < v.size(); ++i) x.add_term(paths_[i], v[i]);
  return x;
}

Vec AlgebraBasis::multiply(const Vec& a, const Vec& b) const {
  const std::size_t n = dim();
  Vec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      const SparseVec& pr = table_[i * n + j];
      if (pr.empty()) continue;
      const Scalar c = a[i] * b[j];
      for (const auto& [k, d] : pr) r[k] += c * d;
    }
  }
  return r;
}

Vec AlgebraBasis::unit() const {
  Vec u(dim());
  for (std::size_t i : trivial_) u[i] = Scalar::from_integer(1, field_);
  return u;
}

std::string AlgebraBasis::element_string(const Vec& v) const {
  return element_to_string(quiver_, lift(v));
}

void validate_input_presentation(const Quiver& quiver, const std::vector<FreeElement>& relations) {
  if (quiver.vertex_count() == 0) throw Error(ErrorKind::InvalidQuiver, "quiver has no vertices");
  for (const auto& r : relations) {
    check_endpoints(quiver, r);
    for (const auto& [p, c] : r.terms()) {
      if (p.length() < 2)
        throw Error(ErrorKind::InconsistentRelation,
                    fmt::format("relation '{}' has a term of length {} (input relations need length >= 2)",
                                element_to_string(quiver, r), p.length()));
    }
  }
}

AlgebraBasis compute_basis(const Quiver& quiver, const std::vector<FreeElement>& relations,
                           FieldSpec field, std::size_t max_degree) {
  if (quiver.vertex_count() == 0) throw Error(ErrorKind::InvalidQuiver, "quiver has no vertices");
  if (max_degree < 2) throw Error(ErrorKind::InvalidAlgebra, "max degree must be at least 2");

  std::size_t cap = 2 * max_degree;
  for (const auto& r : relations) {
    check_endpoints(quiver, r);
    if (!r.is_zero()) cap = std::max(cap, r.leading().first.length());
  }

  std::vector<WorkRule> rules;
  std::size_t next_id = 0;
  std::deque<FreeElement> pending;
  for (const auto& r : relations) {
    FreeElement x;
    for (const auto& [p, c] : r.terms()) x.add_term(p, c.in_field(field));
    pending.push_back(std::move(x));
  }
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> checked;

  auto add_pending = [&]() {
    while (!pending.empty()) {
      auto smallest = std::min_element(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && !b.is_zero();
        return DeglexLess{}(a.leading().first, b.leading().first);
      });
      FreeElement x = reduce_with(quiver, *smallest, rules);
      pending.erase(smallest);
      if (x.is_zero()) continue;
      const Path lead = x.leading().first;
      if (lead.is_trivial())
        throw Error(ErrorKind::InconsistentRelation,
                    fmt::format("relations force the trivial path {} into the ideal",
                                path_to_string(quiver, lead)));
      x = invert(x.leading().second) * x;
      FreeElement tail = FreeElement::of_path(lead) - x;
      for (auto it = rules.begin(); it != rules.end();) {
        if (find_subword(it->lead.arrows, lead.arrows)) {
          pending.push_back(FreeElement::of_path(it->lead) - it->tail);
          it = rules.erase(it);
        } else {
          ++it;
        }
      }
      rules.push_back(WorkRule{next_id++, lead, std::move(tail)});
    }
  };

  add_pending();
  for (;;) {
    for (std::size_t a = 0; a < rules.size(); ++a) {
      for (std::size_t b = 0; b < rules.size(); ++b) {
        const WorkRule& r1 = rules[a];
        const WorkRule& r2 = rules[b];
        const std::size_t l1 = r1.lead.length();
        const std::size_t l2 = r2.lead.length();
        for (std::size_t k = 1; k < std::min(l1, l2); ++k) {
          if (!checked.insert({r1.id, r2.id, k}).second) continue;
          if (l1 + l2 - k > cap) continue;
          if (!std::equal(r1.lead.arrows.end() - static_cast<std::ptrdiff_t>(k), r1.lead.arrows.end(),
                          r2.lead.arrows.begin()))
            continue;
          const Path u = r1.lead.subpath(quiver, 0, l1 - k);
          const Path v = r2.lead.subpath(quiver, k, l2 - k);
          FreeElement s = sandwich(u, r2.tail, Path::trivial(r2.lead.target)) -
                          sandwich(Path::trivial(r1.lead.source), r1.tail, v);
          s = reduce_with(quiver, s, rules);
          if (!s.is_zero()) pending.push_back(std::move(s));
        }
      }
    }
    if (pending.empty()) break;
    add_pending();
  }

  AlgebraBasis basis;
  basis.quiver_ = quiver;
  basis.field_ = field;
  basis.relations_ = relations;
  basis.max_degree_ = max_degree;
  for (auto& r : rules) basis.rules_.push_back(Rule{r.lead, r.tail});
  std::sort(basis.rules_.begin(), basis.rules_.end(),
            [](const Rule& a, const Rule& b) { return DeglexLess{}(a.lead, b.lead); });
  for (auto& r : basis.rules_) r.tail = reduce_with(quiver, r.tail, basis.rules_);

  std::vector<Path> frontier;
  for (std::size_t v = 0; v < quiver.vertex_count(); ++v) frontier.push_back(Path::trivial(static_cast<int>(v)));
  std::vector<Path> standard = frontier;
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const Path& p : frontier) {
      for (std::size_t a = 0; a < quiver.arrow_count(); ++a) {
        const Arrow& arrow = quiver.arrow(static_cast<int>(a));
        if (arrow.source != p.target) continue;
        Path q = *concat(p, Path::of_arrow(quiver, static_cast<int>(a)));
        bool reducible = false;
        for (const auto& r : basis.rules_)
          if (is_suffix(q.arrows, r.lead.arrows)) {
            reducible = true;
            break;
          }
        if (reducible) continue;
        if (q.length() >= max_degree)
          throw Error(ErrorKind::NotFiniteDimensional,
                      fmt::format("standard monomial {} reaches the degree bound {}",
                                  path_to_string(quiver, q), max_degree));
        next.push_back(q);
        standard.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  std::sort(standard.begin(), standard.end(), display_less);
  basis.paths_ = std::move(standard);
  for (std::size_t i = 0; i < basis.paths_.size(); ++i) basis.index_.emplace(basis.paths_[i], i);
  for (std::size_t v = 0; v < quiver.vertex_count(); ++v)
    basis.trivial_.push_back(*basis.index_of(Path::trivial(static_cast<int>(v))));

  const std::size_t n = basis.paths_.size();
  basis.table_.assign(n * n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto pq = concat(basis.paths_[i], basis.paths_[j]);
      if (!pq) continue;
      Vec v = basis.normal_form(FreeElement::of_path(*pq, Scalar::from_integer(1, field)));
      SparseVec& entry = basis.table_[i * n + j];
      for (std::size_t k = 0; k < n; ++k)
        if (!v[k].is_zero()) entry.emplace_back(k, v[k]);
    }
  return basis;
}

Vec normal_form(const FreeElement& x, const AlgebraBasis& basis) { return basis.normal_form(x); }

Vec multiply(const Vec& a, const Vec& b, const AlgebraBasis& basis) { return basis.multiply(a, b); }

std::vector<Path> decompose_unit(const AlgebraBasis& basis) {
  std::vector<Path> out;
  for (std::size_t i : basis.trivial_indices()) out.push_back(basis.path(i));
  return out;
}

bool same_ideal(const AlgebraBasis& a, const AlgebraBasis& b) {
  if (!(a.quiver().vertices() == b.quiver().vertices())) return false;
  if (a.quiver().arrow_count() != b.quiver().arrow_count()) return false;
  for (std::size_t i = 0; i < a.quiver().arrow_count(); ++i) {
    const Arrow& x = a.quiver().arrow(static_cast<int>(i));
    const Arrow& y = b.quiver().arrow(static_cast<int>(i));
    if (x.id != y.id || x.source != y.source || x.target != y.target) return false;
  }
  for (const auto& r : a.relations())
    if (!b.reduce(r).is_zero()) return false;
  for (const auto& r : b.relations())
    if (!a.reduce(r).is_zero()) return false;
  return true;
}

}  // namespace qdeform
