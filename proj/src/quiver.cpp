#include "qdeform/quiver.hpp"

#include <fmt/format.h>

#include "qdeform/errors.hpp"

namespace qdeform {

int Quiver::add_vertex(const std::string& name) {
  if (vertex_index(name))
    throw Error(ErrorKind::InvalidQuiver, fmt::format("duplicate vertex '{}'", name));
  vertices_.push_back(name);
  return static_cast<int>(vertices_.size()) - 1;
}

int Quiver::add_arrow(const std::string& id, int source, int target, const std::string& tag) {
  if (arrow_index(id))
    throw Error(ErrorKind::InvalidQuiver, fmt::format("duplicate arrow '{}'", id));
  const int n = static_cast<int>(vertices_.size());
  if (source < 0 || source >= n || target < 0 || target >= n)
    throw Error(ErrorKind::InvalidQuiver, fmt::format("arrow '{}' has an unknown endpoint", id));
  arrows_.push_back(Arrow{id, source, target, tag});
  return static_cast<int>(arrows_.size()) - 1;
}

std::optional<int> Quiver::vertex_index(const std::string& name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> Quiver::arrow_index(const std::string& id) const {
  for (std::size_t i = 0; i < arrows_.size(); ++i)
    if (arrows_[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

bool operator==(const Arrow& a, const Arrow& b) {
  return a.id == b.id && a.source == b.source && a.target == b.target && a.tag == b.tag;
}

bool operator==(const Quiver& a, const Quiver& b) {
  return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_;
}

Path Path::of_arrow(const Quiver& q, int arrow) {
  const Arrow& a = q.arrow(arrow);
  return Path{a.source, a.target, {arrow}};
}

Path Path::subpath(const Quiver& q, std::size_t from, std::size_t len) const {
  if (len == 0) {
    if (from == 0) return trivial(source);
    return trivial(q.arrow(arrows[from - 1]).target);
  }
  Path p;
  p.arrows.assign(arrows.begin() + static_cast<std::ptrdiff_t>(from),
                  arrows.begin() + static_cast<std::ptrdiff_t>(from + len));
  p.source = q.arrow(p.arrows.front()).source;
  p.target = q.arrow(p.arrows.back()).target;
  return p;
}

std::optional<Path> concat(const Path& a, const Path& b) {
  if (a.target != b.source) return std::nullopt;
  Path p{a.source, b.target, a.arrows};
  p.arrows.insert(p.arrows.end(), b.arrows.begin(), b.arrows.end());
  return p;
}

bool DeglexLess::operator()(const Path& a, const Path& b) const {
  if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
  if (a.arrows.empty()) return a.source < b.source;
  for (std::size_t i = 0; i < a.arrows.size(); ++i)
    if (a.arrows[i] != b.arrows[i]) return a.arrows[i] > b.arrows[i];
  return false;
}

std::string path_to_string(const Quiver& q, const Path& p) {
  if (p.is_trivial()) return fmt::format("e({})", q.vertex_name(p.source));
  std::string out;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i > 0) out += '*';
    out += q.arrow(p.arrows[i]).id;
  }
  return out;
}

FreeElement FreeElement::of_path(const Path& p, const Scalar& c) {
  FreeElement x;
  x.add_term(p, c);
  return x;
}

Scalar FreeElement::coefficient(const Path& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Scalar() : it->second;
}

void FreeElement::add_term(const Path& p, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(p, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FreeElement& FreeElement::operator+=(const FreeElement& other) {
  for (const auto& [p, c] : other.terms_) add_term(p, c);
  return *this;
}

FreeElement& FreeElement::operator-=(const FreeElement& other) {
  for (const auto& [p, c] : other.terms_) add_term(p, -c);
  return *this;
}

FreeElement operator*(const Scalar& s, const FreeElement& a) {
  FreeElement r;
  if (s.is_zero()) return r;
  for (const auto& [p, c] : a.terms_) r.add_term(p, s * c);
  return r;
}

FreeElement operator*(const FreeElement& a, const FreeElement& b) {
  FreeElement r;
  for (const auto& [p, c] : a.terms_)
    for (const auto& [q, d] : b.terms_)
      if (auto pq = concat(p, q)) r.add_term(*pq, c * d);
  return r;
}

bool operator==(const FreeElement& a, const FreeElement& b) { return a.terms_ == b.terms_; }

std::string element_to_string(const Quiver& q, const FreeElement& x) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
    Scalar c = it->second;
    bool negative = c.field().is_rational() && sgn(c.rational()) < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (!c.is_one()) out += c.to_string() + '*';
    out += path_to_string(q, it->first);
  }
  return out;
}

}  // namespace qdeform
