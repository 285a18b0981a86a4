#include <gtest/gtest.h>

#include <random>

#include "qdeform/errors.hpp"
#include "qdeform/io.hpp"
#include "support.hpp"

namespace qdeform {
namespace {

using testing::random_scalar;

Presentation random_presentation(std::mt19937& gen) {
  std::uniform_int_distribution<int> coin(0, 1);
  const FieldSpec field = coin(gen) ? FieldSpec::rationals() : FieldSpec::prime(7);
  Presentation p;
  p.field = field;
  const int vertices = std::uniform_int_distribution<int>(1, 3)(gen);
  for (int v = 0; v < vertices; ++v) p.quiver.add_vertex(std::to_string(v + 1));
  const int arrows = std::uniform_int_distribution<int>(1, 4)(gen);
  std::uniform_int_distribution<int> vertex(0, vertices - 1);
  for (int a = 0; a < arrows; ++a)
    p.quiver.add_arrow("x" + std::to_string(a), vertex(gen), vertex(gen),
                       coin(gen) ? std::string(kDeformationTag) : std::string());

  // relations: combinations of equal-length paths with common endpoints
  std::vector<Path> layer;
  for (int v = 0; v < vertices; ++v) layer.push_back(Path::trivial(v));
  std::vector<Path> long_paths;
  for (int len = 1; len <= 3; ++len) {
    std::vector<Path> next;
    for (const Path& q : layer)
      for (int a = 0; a < arrows; ++a)
        if (p.quiver.arrow(a).source == q.target) {
          Path x = q;
          x.arrows.push_back(a);
          x.target = p.quiver.arrow(a).target;
          next.push_back(x);
        }
    if (len >= 2) long_paths.insert(long_paths.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  if (long_paths.empty()) return p;
  std::uniform_int_distribution<std::size_t> pick(0, long_paths.size() - 1);
  const int relations = std::uniform_int_distribution<int>(0, 3)(gen);
  for (int r = 0; r < relations; ++r) {
    const Path& lead = long_paths[pick(gen)];
    FreeElement x;
    x.add_term(lead, Scalar::from_integer(1 + coin(gen), field));
    for (const Path& other : long_paths)
      if (other.source == lead.source && other.target == lead.target && coin(gen))
        x.add_term(other, random_scalar(gen, field));
    if (x.is_zero()) continue;
    p.relations.push_back(x);
    p.kinds.push_back(static_cast<RelationKind>(std::uniform_int_distribution<int>(0, 3)(gen)));
  }
  return p;
}

TEST(IoProperty, ParseEmitRoundTrip) {
  std::mt19937 gen(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Presentation p = random_presentation(gen);
    const std::string text = emit_algebra(p);
    const Presentation back = parse_algebra(text).presentation;
    EXPECT_EQ(back, p) << text;
    EXPECT_EQ(emit_algebra(back), text);
  }
}

TEST(Io, ExampleFilesRoundTrip) {
  for (const auto& name : testing::kExamples) {
    const AlgebraFile file = load_algebra(testing::data_path(name + ".alg"));
    EXPECT_EQ(parse_algebra(emit_algebra(file.presentation)).presentation, file.presentation) << name;
  }
}

TEST(Io, CocycleLinesRoundTrip) {
  for (const auto& name : testing::kExamples) {
    const auto ex = testing::load_example(name);
    const std::string text = emit_algebra(ex.file.presentation, cocycle_lines(ex.f, ex.basis, "f"));
    const AlgebraFile back = parse_algebra(text);
    EXPECT_EQ(cocycle_from_file(back, ex.basis), ex.f) << text;
  }
}

TEST(Io, ParamsAndFieldOverride) {
  const AlgebraFile file = parse_algebra("field Q\nparam q = 3/2\nvertex 1\narrow a : 1 -> 1\nrelation a*a - q*a*a*a\n",
                                         FieldSpec::prime(7));
  EXPECT_EQ(file.presentation.field, FieldSpec::prime(7));
  ASSERT_EQ(file.params.size(), 1u);
  EXPECT_EQ(file.params[0].second.to_string(), "5");
}

TEST(Io, ElementGrammar) {
  const AlgebraFile file = parse_algebra("field Q\nvertex 1 2\narrow a1 : 1 -> 2\narrow a2 : 2 -> 1\n");
  const Quiver& q = file.presentation.quiver;
  const FreeElement x = parse_element("2*a1*a2 - 1/3*e(1)", q, FieldSpec::rationals());
  EXPECT_EQ(element_to_string(q, x), "2*a1*a2 - 1/3*e(1)");
  EXPECT_THROW(parse_element("a1*a1", q, FieldSpec::rationals()), Error);
  EXPECT_THROW(parse_element("e(3)", q, FieldSpec::rationals()), Error);
}

TEST(Io, ModuleFile) {
  const ModuleFile m = parse_module("dim 2\nact(e(1)) = 1 0 ; 0 1\nact(a) = 0 0 ; 1/2 0\n", FieldSpec::rationals());
  EXPECT_EQ(m.dim, 2u);
  ASSERT_EQ(m.actions.size(), 2u);
  EXPECT_EQ(m.actions[1].first, "a");
  EXPECT_EQ(m.actions[1].second(1, 0).to_string(), "1/2");
  EXPECT_THROW(parse_module("dim 2\nact(a) = 1 0\n", FieldSpec::rationals()), Error);
  EXPECT_THROW(parse_module("act(a) = 1\n", FieldSpec::rationals()), Error);
}

TEST(Dot, EmptyArrowQuiverHasNodesOnly) {
  Presentation p;
  p.quiver.add_vertex("1");
  p.quiver.add_vertex("2");
  EXPECT_EQ(emit_dot(p), "digraph Q {\n  \"1\";\n  \"2\";\n}\n");
}

TEST(Dot, DeformationLoopsAreDashed) {
  Presentation p;
  p.quiver.add_vertex("1");
  p.quiver.add_arrow("a", 0, 0);
  p.quiver.add_arrow("t1", 0, 0, std::string(kDeformationTag));
  const std::string dot = emit_dot(p);
  EXPECT_NE(dot.find("[label=\"t1\", style=dashed]"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"a\"];"), std::string::npos);
}

}  // namespace
}  // namespace qdeform
