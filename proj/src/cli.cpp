#include "qdeform/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qdeform/category.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/io.hpp"
#include "qdeform/morita.hpp"

namespace qdeform::cli {
namespace {

struct Options {
  std::string field;
  std::size_t max_degree = kDefaultMaxDegree;
  std::string report = "text";
};

struct Loaded {
  AlgebraFile file;
  AlgebraBasis basis;
};

Loaded load(const std::string& path, const Options& opt) {
  std::optional<FieldSpec> field;
  if (!opt.field.empty()) field = parse_field(opt.field);
  AlgebraFile file = load_algebra(path, field);
  const Presentation& p = file.presentation;
  AlgebraBasis basis = compute_basis(p.quiver, p.relations, p.field, opt.max_degree);
  return Loaded{std::move(file), std::move(basis)};
}

int finish(const Report& report, const Options& opt, std::ostream& out) {
  if (opt.report == "json-lines") {
    report.write_json_lines(out);
  } else {
    report.write_text(out);
    out << (report.passed() ? "all checks passed" : fmt::format("{} check(s) failed", report.failures())) << '\n';
  }
  return report.passed() ? 0 : 1;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::ParseError, fmt::format("cannot write '{}'", path));
  os << text;
}

/// The cocycle as given, or a cohomologous one satisfying the image
/// condition when the given one does not.
Cochain usable_cocycle(const AlgebraBasis& basis, const Cochain& f, std::ostream& err) {
  if (!is_cocycle(f, basis)) throw Error(ErrorKind::NotACocycle, "d f is not zero");
  if (check_image_condition(basis, f).holds) return f;
  err << "note: cocycle replaced by a cohomologous one satisfying the image condition\n";
  return normalize_cocycle(basis, f);
}

int cmd_basis(const Loaded& l, std::ostream& out) {
  out << "dim = " << l.basis.dim() << '\n';
  for (std::size_t i = 0; i < l.basis.dim(); ++i) out << l.basis.label(i) << '\n';
  return 0;
}

int cmd_hh(const Loaded& l, std::ostream& out) {
  const HHDimensions h = hh2_dimensions(l.basis);
  out << "dim Z^2 = " << h.cocycles << '\n';
  out << "dim B^2 = " << h.coboundaries << '\n';
  out << "dim HH^2 = " << h.cohomology << '\n';
  return 0;
}

int cmd_check_cocycle(const Loaded& l, const std::string& name, const Options& opt, std::ostream& out) {
  const Cochain f = cocycle_from_file(l.file, l.basis, name);
  Report r;
  const bool closed = is_cocycle(f, l.basis);
  const bool image = check_image_condition(l.basis, f).holds;
  r.add("cocycle", closed, fmt::format("image condition {}", image ? "holds" : "fails"));
  const auto fail = DeformedAlgebra(l.basis, f).associativity_failure();
  r.add("associativity", !fail, fail.value_or(""));
  return finish(r, opt, out);
}

int cmd_deform(const Loaded& l, const std::string& name, const std::string& output, const std::string& dot,
               bool reduce, const Options& opt, std::ostream& out, std::ostream& err) {
  const Cochain f = usable_cocycle(l.basis, cocycle_from_file(l.file, l.basis, name), err);
  DeformedPresentation dp = build_presentation(l.basis, f);
  Presentation pres = reduce ? interreduce(dp.presentation, opt.max_degree) : dp.presentation;
  const std::string text = fmt::format("# deformed algebra of dimension {}\n", 2 * l.basis.dim()) + emit_algebra(pres);
  if (output.empty()) {
    out << text;
  } else {
    write_file(output, text);
    out << fmt::format("vertices {}, arrows {}, relations {}, dim {}\n", pres.quiver.vertex_count(),
                       pres.quiver.arrow_count(), pres.relations.size(), 2 * l.basis.dim());
  }
  if (!dot.empty()) write_file(dot, emit_dot(pres));
  return 0;
}

int cmd_verify_deform(const Loaded& l, const std::string& name, const Options& opt, std::ostream& out,
                      std::ostream& err) {
  const Cochain given = cocycle_from_file(l.file, l.basis, name);
  Report r;
  r.add("cocycle", is_cocycle(given, l.basis));
  const DeformedAlgebra d(l.basis, given);
  const auto assoc = d.associativity_failure();
  r.add("associativity", !assoc, assoc.value_or(""));
  const auto lemma = path_product_failure(d);
  r.add("path_products", !lemma, lemma.value_or(""));
  if (!r.passed()) return finish(r, opt, out);

  const Cochain f = usable_cocycle(l.basis, given, err);
  const DeformedPresentation dp = build_presentation(l.basis, f);
  r.merge("presentation", verify_presentation(l.basis, f, dp));
  const Presentation back = parse_algebra(emit_algebra(dp.presentation)).presentation;
  r.add("emit_roundtrip", back == dp.presentation);
  const Cochain zero(2, l.basis.dim());
  r.merge("zero_cocycle", verify_presentation(l.basis, zero, build_presentation(l.basis, zero)));
  return finish(r, opt, out);
}

int cmd_equiv(const Loaded& l, const std::string& first, const std::string& second, const Options& opt,
              std::ostream& out) {
  const Cochain f = cocycle_from_file(l.file, l.basis, first);
  const Cochain f2 = cocycle_from_file(l.file, l.basis, second);
  Report r;
  const auto e = deformation_equivalence(f, f2, l.basis);
  r.add("cohomologous", e.has_value(), e ? "" : fmt::format("{} - {} is not a coboundary", first, second));
  if (e) {
    if (opt.report != "json-lines") {
      out << "sign = " << e->sign << '\n';
      for (const auto& line : cocycle_lines(e->g, l.basis, "g")) out << line << '\n';
    }
    r.add("bijective", rank(e->map) == 2 * l.basis.dim());
    r.add("multiplicative", verify_equivalence(*e, DeformedAlgebra(l.basis, f), DeformedAlgebra(l.basis, f2)));
  }
  return finish(r, opt, out);
}

MoritaContext make_context(const Loaded& l, std::size_t matrix, const std::vector<std::string>& vertices) {
  if (matrix > 0) return matrix_context(FinDimAlgebra::from_basis(l.basis), matrix);
  return idempotent_context(l.basis, vertices);
}

void print_table(const FullCochain& g, const FinDimAlgebra& b, std::ostream& out) {
  for (std::size_t i = 0; i < g.tuple_count(); ++i) {
    if (is_zero(g.at(i))) continue;
    const Tuple t = g.unflatten(i);
    out << "g(" << b.label(t[0]) << ", " << b.label(t[1]) << ") = " << b.element_string(g.at(i)) << '\n';
  }
}

int cmd_transfer(const Loaded& l, const std::string& name, std::size_t matrix,
                 const std::vector<std::string>& vertices, const Options& opt, std::ostream& out) {
  const MoritaContext ctx = make_context(l, matrix, vertices);
  require_valid(ctx);
  const FullCochain f = extend_to_full(cocycle_from_file(l.file, l.basis, name), l.basis);
  const FullCochain g = transfer_phi(ctx, f, 2);
  if (opt.report != "json-lines") {
    out << "B has dimension " << ctx.B.dim() << '\n';
    print_table(g, ctx.B, out);
  }
  Report r;
  r.add("cocycle", full_differential(g, ctx.B).is_zero(), "d g = 0");
  const bool chain_phi = full_differential(g, ctx.B) == transfer_phi(ctx, full_differential(f, ctx.A), 3);
  const bool chain_psi = full_differential(transfer_psi(ctx, g, 2), ctx.A) ==
                         transfer_psi(ctx, full_differential(g, ctx.B), 3);
  r.add("chain_map", chain_phi && chain_psi, "d phi = phi d and d psi = psi d");
  const FullCochain lhs = homotopy_h(ctx, full_differential(f, ctx.A), 2) + full_differential(homotopy_h(ctx, f, 1), ctx.A);
  r.add("homotopy", lhs == f - transfer_psi(ctx, g, 2), "h d + d h = id - psi phi");
  return finish(r, opt, out);
}

int cmd_verify_morita(const Loaded& l, const std::string& name, std::size_t matrix,
                      const std::vector<std::string>& vertices, const Options& opt, std::ostream& out) {
  const MoritaContext ctx = make_context(l, matrix, vertices);
  const FullCochain f = extend_to_full(cocycle_from_file(l.file, l.basis, name), l.basis);
  return finish(verify_morita_deformed(ctx, f), opt, out);
}

ConcreteModule module_of(const ModuleFile& m, const DeformedAlgebra& d) {
  const FinDimAlgebra s = d.structure();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < s.dim(); ++i) index[s.label(i)] = i;
  bool full = m.actions.size() == s.dim();
  for (const auto& [label, _] : m.actions) full = full && index.count(label) > 0;
  if (!full) return module_from_generators(m.actions, m.dim, d);
  ConcreteModule out{m.dim, std::vector<Matrix>(s.dim())};
  for (const auto& [label, matrix] : m.actions) out.action[index[label]] = matrix;
  if (const auto fail = module_failure(out, d)) throw Error(ErrorKind::InvalidModule, *fail);
  return out;
}

int cmd_module_roundtrip(const Loaded& l, const std::string& module_path, const std::string& name,
                         const Options& opt, std::ostream& out) {
  const DeformedAlgebra d(l.basis, cocycle_from_file(l.file, l.basis, name));
  if (const auto fail = d.associativity_failure()) throw Error(ErrorKind::NotACocycle, *fail);
  const ModuleFile m = load_module(module_path, l.basis.field());
  return finish(module_roundtrip_report(module_of(m, d), d), opt, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinitesimal deformations of bound quiver algebras", "qdeform"};
  app.require_subcommand(1);
  Options opt;
  const CLI::Validator field_name(
      [](std::string& text) -> std::string {
        try {
          parse_field(text);
        } catch (const Error& e) {
          return e.what();
        }
        return {};
      },
      "FIELD");
  app.add_option("--field", opt.field, "Override the ground field (Q or F<p>)")->check(field_name);
  app.add_option("--max-degree", opt.max_degree, "Path length bound for basis enumeration")->check(CLI::Range(2, 64));
  app.add_option("--report", opt.report, "Report format")->check(CLI::IsMember({"text", "json-lines"}));

  std::string file;
  std::string name = "f";
  auto with_file = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("FILE", file, "Algebra file")->required();
    return sub;
  };
  auto with_cocycle = [&](CLI::App* sub) {
    sub->add_option("--cocycle", name, "Cocycle name in the file")->capture_default_str();
    return sub;
  };

  auto* basis = with_file(app.add_subcommand("basis", "List the standard monomial basis"));
  auto* hh = with_file(app.add_subcommand("hh", "Dimensions of Z^2, B^2 and HH^2"));
  auto* check = with_cocycle(with_file(app.add_subcommand("check-cocycle", "Check a cocycle and A_f associativity")));

  std::string output;
  std::string dot;
  bool reduce = false;
  auto* deform = with_cocycle(with_file(app.add_subcommand("deform", "Quiver and relations of A_f")));
  deform->add_option("-o,--output", output, "Write the algebra file here");
  deform->add_option("--dot", dot, "Write a DOT rendering of the quiver here");
  deform->add_flag("--interreduce", reduce, "Replace the relations by a reduced rewrite system");

  auto* verify = with_cocycle(with_file(app.add_subcommand("verify-deform", "Check the presentation of A_f")));

  std::string first;
  std::string second;
  auto* equiv = with_file(app.add_subcommand("equiv", "Equivalence A_f -> A_f' for cohomologous cocycles"));
  equiv->add_option("--first", first, "First cocycle name")->required();
  equiv->add_option("--second", second, "Second cocycle name")->required();

  std::size_t matrix = 0;
  std::vector<std::string> vertices;
  auto with_context = [&](CLI::App* sub) {
    auto* group = sub->add_option_group("context");
    group->add_option("--matrix", matrix, "Context with B = M_n(A)")->check(CLI::PositiveNumber);
    group->add_option("--idempotent", vertices, "Context with B = eAe")->delimiter(',');
    group->require_option(1);
    return sub;
  };
  auto* transfer = with_context(with_cocycle(with_file(app.add_subcommand("transfer", "Transfer a cocycle to B"))));
  auto* morita = with_context(with_cocycle(
      with_file(app.add_subcommand("verify-morita", "Check the deformed Morita equivalence"))));

  std::string module_path;
  auto* roundtrip = with_cocycle(with_file(app.add_subcommand("module-roundtrip", "Uple reconstruction report")));
  roundtrip->add_option("MODFILE", module_path, "Module file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const Loaded l = load(file, opt);
    if (basis->parsed()) return cmd_basis(l, out);
    if (hh->parsed()) return cmd_hh(l, out);
    if (check->parsed()) return cmd_check_cocycle(l, name, opt, out);
    if (deform->parsed()) return cmd_deform(l, name, output, dot, reduce, opt, out, err);
    if (verify->parsed()) return cmd_verify_deform(l, name, opt, out, err);
    if (equiv->parsed()) return cmd_equiv(l, first, second, opt, out);
    if (transfer->parsed()) return cmd_transfer(l, name, matrix, vertices, opt, out);
    if (morita->parsed()) return cmd_verify_morita(l, name, matrix, vertices, opt, out);
    if (roundtrip->parsed()) return cmd_module_roundtrip(l, module_path, name, opt, out);
  } catch (const Error& e) {
    err << "error: " << e.kind_name() << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qdeform::cli
