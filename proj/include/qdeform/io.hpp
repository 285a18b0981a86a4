#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdeform/algebra.hpp"
#include "qdeform/deformation.hpp"
#include "qdeform/hochschild.hpp"

namespace qdeform {

/// One `cocycle name(x, y) = value` line.
struct CocycleLine {
  std::string name;
  std::vector<FreeElement> args;
  FreeElement value;
  int line = 0;
};

/// Contents of an algebra file:
///
///   field Q | field F 7
///   vertex 1 2
///   arrow a1 : 1 -> 2          (optionally `arrow @tag id : s -> t`)
///   relation a1*a2             (optionally `relation @kind expr`)
///   param q = 1
///   cocycle f(a1, a2) = e(1)
struct AlgebraFile {
  Presentation presentation;
  std::vector<std::pair<std::string, Scalar>> params;
  std::vector<CocycleLine> cocycles;

  /// Cocycle names in order of first appearance.
  std::vector<std::string> cocycle_names() const;
};

/// Throws ParseError with a line number on malformed input. `field`
/// overrides any `field` line.
AlgebraFile parse_algebra(std::string_view text, std::optional<FieldSpec> field = std::nullopt);
AlgebraFile load_algebra(const std::string& path, std::optional<FieldSpec> field = std::nullopt);

/// Parses a field name: "Q", "F7" or "F 7".
FieldSpec parse_field(std::string_view text);

/// Builds the named reduced 2-cochain; arguments must be nontrivial basis
/// paths. An absent name gives the zero cochain. Throws InvalidCochain.
Cochain cocycle_from_file(const AlgebraFile& file, const AlgebraBasis& basis, const std::string& name = "f");

/// Parses a linear combination of paths over `quiver`.
FreeElement parse_element(std::string_view text, const Quiver& quiver, FieldSpec field,
                          const std::vector<std::pair<std::string, Scalar>>& params = {});

/// Algebra-file text for a presentation, optionally with cocycle lines.
std::string emit_algebra(const Presentation& pres, const std::vector<std::string>& extra_lines = {});
/// `cocycle name(x, y) = value` lines for the nonzero values of f.
std::vector<std::string> cocycle_lines(const Cochain& f, const AlgebraBasis& basis, const std::string& name = "f");

/// DOT digraph of the quiver; arrows tagged as deformation loops are dashed.
std::string emit_dot(const Presentation& pres);

/// Contents of a module file:
///
///   dim 2
///   act(e(1)) = 1 0 ; 0 1
///   act(a) = 0 0 ; 1 0
///   act(t) = 0 0 ; 0 0
struct ModuleFile {
  std::size_t dim = 0;
  std::vector<std::pair<std::string, Matrix>> actions;
};

ModuleFile parse_module(std::string_view text, FieldSpec field);
ModuleFile load_module(const std::string& path, FieldSpec field);

std::string read_file(const std::string& path);

}  // namespace qdeform
