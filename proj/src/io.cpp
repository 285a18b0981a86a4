#include "qdeform/io.hpp"

#include <fmt/format.h>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "qdeform/errors.hpp"

namespace qdeform {

namespace {

[[noreturn]] void fail(int line, std::string_view message) {
  if (line > 0) throw Error(ErrorKind::ParseError, fmt::format("line {}: {}", line, message));
  throw Error(ErrorKind::ParseError, std::string(message));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

bool is_vertex_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

struct Token {
  enum Kind { Ident, Number, Symbol, End } kind;
  std::string text;
};

class Lexer {
 public:
  Lexer(std::string_view text, int line) : text_(text), line_(line) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }
  bool accept(std::string_view symbol) {
    if (current_.kind == Token::Symbol && current_.text == symbol) {
      advance();
      return true;
    }
    return false;
  }
  void expect(std::string_view symbol) {
    if (!accept(symbol)) fail(line_, fmt::format("expected '{}' near '{}'", symbol, current_.text));
  }
  int line() const { return line_; }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) {
      current_ = Token{Token::End, ""};
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = pos_;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      if (j + 1 < text_.size() && text_[j] == '/' && std::isdigit(static_cast<unsigned char>(text_[j + 1]))) {
        ++j;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      }
      // A vertex name such as "1a" is lexed as an identifier.
      if (j < text_.size() && is_ident_start(text_[j])) {
        while (j < text_.size() && is_ident_char(text_[j])) ++j;
        current_ = Token{Token::Ident, std::string(text_.substr(pos_, j - pos_))};
      } else {
        current_ = Token{Token::Number, std::string(text_.substr(pos_, j - pos_))};
      }
      pos_ = j;
      return;
    }
    if (is_ident_start(c)) {
      std::size_t j = pos_;
      while (j < text_.size() && is_ident_char(text_[j])) ++j;
      current_ = Token{Token::Ident, std::string(text_.substr(pos_, j - pos_))};
      pos_ = j;
      return;
    }
    if (std::string_view("+-*(),=;").find(c) != std::string_view::npos) {
      current_ = Token{Token::Symbol, std::string(1, c)};
      ++pos_;
      return;
    }
    fail(line_, fmt::format("unexpected character '{}'", c));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  Token current_{Token::End, ""};
};

using Params = std::vector<std::pair<std::string, Scalar>>;

const Scalar* find_param(const Params& params, std::string_view name) {
  for (const auto& [n, v] : params)
    if (n == name) return &v;
  return nullptr;
}

// term := factor ('*' factor)*, factor := number | param | arrow | e(v)
FreeElement parse_term(Lexer& lex, const Quiver& q, FieldSpec field, const Params& params) {
  Scalar coeff = Scalar::from_integer(1, field);
  std::optional<Path> path;
  do {
    Token t = lex.take();
    if (t.kind == Token::Number) {
      coeff *= parse_scalar(t.text, field);
    } else if (t.kind == Token::Ident && t.text == "e" && lex.peek().kind == Token::Symbol && lex.peek().text == "(") {
      lex.expect("(");
      Token v = lex.take();
      if (v.kind == Token::End || v.kind == Token::Symbol) fail(lex.line(), "expected a vertex name in e(...)");
      lex.expect(")");
      auto idx = q.vertex_index(v.text);
      if (!idx) fail(lex.line(), fmt::format("unknown vertex '{}'", v.text));
      const Path p = Path::trivial(*idx);
      if (!path) {
        path = p;
      } else {
        auto c = concat(*path, p);
        if (!c) fail(lex.line(), "product of non-composable paths");
        path = c;
      }
    } else if (t.kind == Token::Ident) {
      if (const Scalar* s = find_param(params, t.text)) {
        coeff *= s->in_field(field);
        continue;
      }
      auto a = q.arrow_index(t.text);
      if (!a) fail(lex.line(), fmt::format("unknown arrow or parameter '{}'", t.text));
      const Path p = Path::of_arrow(q, *a);
      if (!path) {
        path = p;
      } else {
        auto c = concat(*path, p);
        if (!c) fail(lex.line(), fmt::format("'{}' does not compose with the path before it", t.text));
        path = c;
      }
    } else {
      fail(lex.line(), fmt::format("unexpected '{}' in expression", t.text));
    }
  } while (lex.accept("*"));
  if (!path) fail(lex.line(), "term without a path (write e(v) for a vertex)");
  return FreeElement::of_path(*path, coeff);
}

FreeElement parse_sum(Lexer& lex, const Quiver& q, FieldSpec field, const Params& params) {
  FreeElement x;
  bool negative = lex.accept("-");
  if (!negative) lex.accept("+");
  for (;;) {
    FreeElement term = parse_term(lex, q, field, params);
    if (negative) term = Scalar(-1) * term;
    x += term;
    if (lex.accept("+")) {
      negative = false;
    } else if (lex.accept("-")) {
      negative = true;
    } else {
      break;
    }
  }
  return x;
}

Scalar parse_scalar_expr(Lexer& lex, FieldSpec field, const Params& params) {
  Scalar value = Scalar::from_integer(lex.accept("-") ? -1 : 1, field);
  do {
    Token t = lex.take();
    if (t.kind == Token::Number) {
      value *= parse_scalar(t.text, field);
    } else if (t.kind == Token::Ident) {
      const Scalar* s = find_param(params, t.text);
      if (!s) fail(lex.line(), fmt::format("unknown parameter '{}'", t.text));
      value *= *s;
    } else {
      fail(lex.line(), fmt::format("unexpected '{}' in scalar", t.text));
    }
  } while (lex.accept("*"));
  return value;
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(trim(line.substr(0, hash)));
}

// Splits "@tag rest" into (tag, rest).
std::pair<std::string, std::string_view> take_tag(std::string_view rest, int line) {
  rest = trim(rest);
  if (rest.empty() || rest.front() != '@') return {"", rest};
  std::size_t j = 1;
  while (j < rest.size() && is_ident_char(rest[j])) ++j;
  std::string tag(rest.substr(1, j - 1));
  if (tag.empty()) fail(line, "empty @tag");
  return {tag, trim(rest.substr(j))};
}

}  // namespace

std::vector<std::string> AlgebraFile::cocycle_names() const {
  std::vector<std::string> names;
  for (const auto& c : cocycles)
    if (std::find(names.begin(), names.end(), c.name) == names.end()) names.push_back(c.name);
  return names;
}

FieldSpec parse_field(std::string_view text) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  if (compact == "Q") return FieldSpec::rationals();
  if (compact.size() >= 2 && compact.front() == 'F') {
    const std::string digits = compact.substr(1);
    if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 9) {
      const auto p = static_cast<std::uint32_t>(std::stoul(digits));
      try {
        return FieldSpec::prime(p);
      } catch (const Error&) {
        fail(0, fmt::format("field characteristic {} is not prime", p));
      }
    }
  }
  fail(0, fmt::format("unknown field '{}' (expected Q or F<p>)", text));
}

FreeElement parse_element(std::string_view text, const Quiver& quiver, FieldSpec field, const Params& params) {
  Lexer lex(text, 0);
  FreeElement x = parse_sum(lex, quiver, field, params);
  if (lex.peek().kind != Token::End) fail(0, fmt::format("trailing input '{}'", lex.peek().text));
  return x;
}

AlgebraFile parse_algebra(std::string_view text, std::optional<FieldSpec> field_override) {
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      std::string line = strip_comment(raw);
      if (!line.empty()) lines.emplace_back(number, std::move(line));
    }
  }

  FieldSpec field = FieldSpec::rationals();
  bool field_seen = false;
  for (const auto& [number, line] : lines) {
    auto words = split_words(line);
    if (words.front() != "field") continue;
    if (field_seen) fail(number, "duplicate field line");
    field_seen = true;
    try {
      field = parse_field(trim(std::string_view(line).substr(5)));
    } catch (const Error& e) {
      fail(number, e.what());
    }
  }
  if (field_override) field = *field_override;

  AlgebraFile file;
  Presentation& pres = file.presentation;
  pres.field = field;
  Quiver& q = pres.quiver;
  std::set<std::tuple<std::string, std::vector<std::string>>> seen_cocycle;

  for (const auto& [number, line] : lines) {
    const std::string_view view(line);
    const auto words = split_words(view);
    const std::string_view keyword = words.front();
    const std::string_view rest = trim(view.substr(keyword.size()));
    try {
      if (keyword == "field") continue;
      if (keyword == "vertex") {
        if (words.size() < 2) fail(number, "vertex line without names");
        for (std::size_t i = 1; i < words.size(); ++i) {
          if (!is_vertex_name(words[i])) fail(number, fmt::format("bad vertex name '{}'", words[i]));
          q.add_vertex(std::string(words[i]));
        }
      } else if (keyword == "arrow") {
        auto [tag, body] = take_tag(rest, number);
        auto colon = body.find(':');
        auto arrow_pos = body.find("->");
        if (colon == std::string_view::npos || arrow_pos == std::string_view::npos || arrow_pos < colon)
          fail(number, "expected 'arrow id : source -> target'");
        const std::string id(trim(body.substr(0, colon)));
        const std::string src(trim(body.substr(colon + 1, arrow_pos - colon - 1)));
        const std::string tgt(trim(body.substr(arrow_pos + 2)));
        if (!is_identifier(id) || id == "e") fail(number, fmt::format("bad arrow id '{}'", id));
        if (find_param(file.params, id)) fail(number, fmt::format("'{}' is already a parameter", id));
        auto s = q.vertex_index(src);
        auto t = q.vertex_index(tgt);
        if (!s || !t) fail(number, fmt::format("arrow '{}' uses an undeclared vertex", id));
        q.add_arrow(id, *s, *t, tag);
      } else if (keyword == "param") {
        auto eq = rest.find('=');
        if (eq == std::string_view::npos) fail(number, "expected 'param name = value'");
        const std::string name(trim(rest.substr(0, eq)));
        if (!is_identifier(name) || name == "e") fail(number, fmt::format("bad parameter name '{}'", name));
        if (find_param(file.params, name) || q.arrow_index(name))
          fail(number, fmt::format("'{}' is already defined", name));
        Lexer lex(rest.substr(eq + 1), number);
        Scalar value = parse_scalar_expr(lex, field, file.params);
        if (lex.peek().kind != Token::End) fail(number, "trailing input after parameter value");
        file.params.emplace_back(name, value);
      } else if (keyword == "relation") {
        auto [tag, body] = take_tag(rest, number);
        auto kind = relation_kind_from_name(tag);
        if (!kind) fail(number, fmt::format("unknown relation tag '@{}'", tag));
        Lexer lex(body, number);
        FreeElement r = parse_sum(lex, q, field, file.params);
        if (lex.peek().kind != Token::End) fail(number, fmt::format("trailing input '{}'", lex.peek().text));
        pres.relations.push_back(std::move(r));
        pres.kinds.push_back(*kind);
      } else if (keyword == "cocycle") {
        auto open = rest.find('(');
        auto eq = rest.rfind('=');
        if (open == std::string_view::npos || eq == std::string_view::npos || eq < open)
          fail(number, "expected 'cocycle name(x, y) = value'");
        const std::string name(trim(rest.substr(0, open)));
        if (!is_identifier(name)) fail(number, fmt::format("bad cocycle name '{}'", name));
        const std::string_view lhs = trim(rest.substr(open, eq - open));
        if (lhs.size() < 2 || lhs.back() != ')') fail(number, "cocycle arguments must be closed by ')'");
        CocycleLine entry;
        entry.name = name;
        entry.line = number;
        std::vector<std::string> arg_texts;
        std::string_view inner = lhs.substr(1, lhs.size() - 2);
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= inner.size(); ++i) {
          if (i == inner.size() || (inner[i] == ',' && depth == 0)) {
            arg_texts.emplace_back(trim(inner.substr(start, i - start)));
            start = i + 1;
          } else if (inner[i] == '(') {
            ++depth;
          } else if (inner[i] == ')') {
            --depth;
          }
        }
        for (const auto& a : arg_texts) {
          Lexer lex(a, number);
          entry.args.push_back(parse_sum(lex, q, field, file.params));
          if (lex.peek().kind != Token::End) fail(number, "trailing input in cocycle argument");
        }
        if (!seen_cocycle.insert({name, arg_texts}).second)
          fail(number, fmt::format("duplicate value for {}({})", name, fmt::join(arg_texts, ", ")));
        Lexer lex(rest.substr(eq + 1), number);
        entry.value = parse_sum(lex, q, field, file.params);
        if (lex.peek().kind != Token::End) fail(number, "trailing input after cocycle value");
        file.cocycles.push_back(std::move(entry));
      } else {
        fail(number, fmt::format("unknown statement '{}'", keyword));
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError) throw;
      fail(number, e.what());
    }
  }
  if (q.vertex_count() == 0) fail(0, "no vertices declared");
  return file;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlgebraFile load_algebra(const std::string& path, std::optional<FieldSpec> field) {
  return parse_algebra(read_file(path), field);
}

Cochain cocycle_from_file(const AlgebraFile& file, const AlgebraBasis& basis, const std::string& name) {
  Cochain f(2, basis.dim());
  for (const auto& c : file.cocycles) {
    if (c.name != name) continue;
    if (c.args.size() != 2)
      throw Error(ErrorKind::InvalidCochain, fmt::format("line {}: a 2-cocycle takes two arguments", c.line));
    Tuple args;
    for (const auto& a : c.args) {
      if (a.size() != 1 || !a.terms().begin()->second.is_one())
        throw Error(ErrorKind::InvalidCochain, fmt::format("line {}: cocycle arguments must be single paths", c.line));
      const Path& p = a.terms().begin()->first;
      auto idx = basis.index_of(p);
      if (!idx)
        throw Error(ErrorKind::InvalidCochain,
                    fmt::format("line {}: {} is not a basis path", c.line, path_to_string(basis.quiver(), p)));
      args.push_back(*idx);
    }
    f.set(args, basis.normal_form(c.value));
  }
  validate_cochain(f, basis);
  return f;
}

std::string emit_algebra(const Presentation& pres, const std::vector<std::string>& extra_lines) {
  std::string out = fmt::format("field {}\n", pres.field.is_rational() ? "Q" : fmt::format("F {}", pres.field.characteristic));
  out += "vertex";
  for (const auto& v : pres.quiver.vertices()) out += " " + v;
  out += '\n';
  for (const auto& a : pres.quiver.arrows()) {
    out += "arrow ";
    if (!a.tag.empty()) out += "@" + a.tag + " ";
    out += fmt::format("{} : {} -> {}\n", a.id, pres.quiver.vertex_name(a.source), pres.quiver.vertex_name(a.target));
  }
  for (std::size_t i = 0; i < pres.relations.size(); ++i) {
    out += "relation ";
    const RelationKind kind = i < pres.kinds.size() ? pres.kinds[i] : RelationKind::Input;
    if (kind != RelationKind::Input) out += fmt::format("@{} ", relation_kind_name(kind));
    out += element_to_string(pres.quiver, pres.relations[i]) + '\n';
  }
  for (const auto& line : extra_lines) out += line + '\n';
  return out;
}

std::vector<std::string> cocycle_lines(const Cochain& f, const AlgebraBasis& basis, const std::string& name) {
  std::vector<std::string> out;
  for (const auto& [args, v] : f.values()) {
    std::vector<std::string> labels;
    for (std::size_t a : args) labels.push_back(basis.label(a));
    out.push_back(fmt::format("cocycle {}({}) = {}", name, fmt::join(labels, ", "), basis.element_string(v)));
  }
  return out;
}

std::string emit_dot(const Presentation& pres) {
  std::string out = "digraph Q {\n";
  for (const auto& v : pres.quiver.vertices()) out += fmt::format("  \"{}\";\n", v);
  for (const auto& a : pres.quiver.arrows()) {
    out += fmt::format("  \"{}\" -> \"{}\" [label=\"{}\"", pres.quiver.vertex_name(a.source),
                       pres.quiver.vertex_name(a.target), a.id);
    if (a.tag == kDeformationTag) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

ModuleFile parse_module(std::string_view text, FieldSpec field) {
  ModuleFile mod;
  bool have_dim = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;
    const std::string_view view(line);
    if (view.substr(0, 3) == "dim" && (view.size() == 3 || std::isspace(static_cast<unsigned char>(view[3])))) {
      const auto words = split_words(view);
      if (words.size() != 2 || words[1].find_first_not_of("0123456789") != std::string_view::npos)
        fail(number, "expected 'dim N'");
      mod.dim = std::stoul(std::string(words[1]));
      have_dim = true;
      continue;
    }
    if (view.substr(0, 4) != "act(") fail(number, "expected 'dim N' or 'act(label) = rows'");
    if (!have_dim) fail(number, "'dim' must come before the actions");
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = 3; i < view.size(); ++i) {
      if (view[i] == '(') ++depth;
      if (view[i] == ')' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos) fail(number, "unbalanced parentheses in act(...)");
    const std::string label(trim(view.substr(4, close - 4)));
    std::string_view rhs = trim(view.substr(close + 1));
    if (rhs.empty() || rhs.front() != '=') fail(number, "expected '=' after act(...)");
    rhs = trim(rhs.substr(1));
    Matrix m(mod.dim, mod.dim);
    std::size_t r = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rhs.size(); ++i) {
      if (i != rhs.size() && rhs[i] != ';') continue;
      const auto entries = split_words(rhs.substr(start, i - start));
      start = i + 1;
      if (r >= mod.dim) fail(number, "too many rows");
      if (entries.size() != mod.dim) fail(number, fmt::format("row {} has {} entries, expected {}", r + 1, entries.size(), mod.dim));
      for (std::size_t c = 0; c < mod.dim; ++c) {
        try {
          m(r, c) = parse_scalar(entries[c], field);
        } catch (const Error& e) {
          fail(number, e.what());
        }
      }
      ++r;
    }
    if (r != mod.dim && mod.dim > 0) fail(number, fmt::format("{} rows given, expected {}", r, mod.dim));
    for (const auto& [l, existing] : mod.actions)
      if (l == label) fail(number, fmt::format("duplicate action for '{}'", label));
    mod.actions.emplace_back(label, std::move(m));
  }
  if (!have_dim) fail(0, "missing 'dim' line");
  return mod;
}

ModuleFile load_module(const std::string& path, FieldSpec field) { return parse_module(read_file(path), field); }

}  // namespace qdeform
