#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdeform/scalar.hpp"

namespace qdeform {

struct Arrow {
  std::string id;
  int source = 0;
  int target = 0;
  /// Free-form label carried through files, e.g. "deformation" for the
  /// loops added by a deformed presentation.
  std::string tag;
};

class Quiver {
 public:
  /// Throws InvalidQuiver on duplicate names.
  int add_vertex(const std::string& name);
  int add_arrow(const std::string& id, int source, int target, const std::string& tag = {});

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::string& vertex_name(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const Arrow& arrow(int a) const { return arrows_.at(static_cast<std::size_t>(a)); }

  std::optional<int> vertex_index(const std::string& name) const;
  std::optional<int> arrow_index(const std::string& id) const;

  friend bool operator==(const Quiver& a, const Quiver& b);

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

bool operator==(const Arrow& a, const Arrow& b);

/// A path in a quiver: arrow indices composed left to right, so the target
/// of each arrow is the source of the next. A trivial path has no arrows
/// and source == target.
struct Path {
  int source = 0;
  int target = 0;
  std::vector<int> arrows;

  static Path trivial(int vertex) { return Path{vertex, vertex, {}}; }
  static Path of_arrow(const Quiver& q, int arrow);

  std::size_t length() const { return arrows.size(); }
  bool is_trivial() const { return arrows.empty(); }
  /// Arrows [from, from + len) as a path; trivial at the right vertex when len == 0.
  Path subpath(const Quiver& q, std::size_t from, std::size_t len) const;

  friend bool operator==(const Path& a, const Path& b) = default;
};

/// Concatenation a·b, or nullopt when t(a) != s(b).
std::optional<Path> concat(const Path& a, const Path& b);

/// Degree-lexicographic order: longer paths are larger; among paths of equal
/// length the first differing arrow decides and the arrow declared earlier
/// is the larger one. Trivial paths are ordered by vertex.
struct DeglexLess {
  bool operator()(const Path& a, const Path& b) const;
};

std::string path_to_string(const Quiver& q, const Path& p);

/// Element of the path algebra kQ; zero coefficients are never stored.
class FreeElement {
 public:
  using Terms = std::map<Path, Scalar, DeglexLess>;

  FreeElement() = default;
  static FreeElement of_path(const Path& p, const Scalar& c = Scalar(1));

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Scalar coefficient(const Path& p) const;

  void add_term(const Path& p, const Scalar& c);
  /// Largest term under DeglexLess; requires nonzero.
  const std::pair<const Path, Scalar>& leading() const { return *terms_.rbegin(); }

  FreeElement& operator+=(const FreeElement& other);
  FreeElement& operator-=(const FreeElement& other);
  friend FreeElement operator+(FreeElement a, const FreeElement& b) { return a += b; }
  friend FreeElement operator-(FreeElement a, const FreeElement& b) { return a -= b; }
  friend FreeElement operator*(const Scalar& s, const FreeElement& a);
  /// Concatenation product in kQ.
  friend FreeElement operator*(const FreeElement& a, const FreeElement& b);
  friend bool operator==(const FreeElement& a, const FreeElement& b);

 private:
  Terms terms_;
};

/// "2*a1*a2 - 1/3*e(1)" with terms in decreasing order; "0" for zero.
std::string element_to_string(const Quiver& q, const FreeElement& x);

}  // namespace qdeform
