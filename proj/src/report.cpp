#include "qdeform/report.hpp"

#include <ostream>

namespace qdeform {

void Report::add(std::string name, bool pass, std::string detail) {
  checks_.push_back(Check{std::move(name), pass, std::move(detail)});
}

void Report::merge(std::string_view prefix, const Report& other) {
  for (const auto& c : other.checks_) {
    std::string name = prefix.empty() ? c.name : std::string(prefix) + "." + c.name;
    checks_.push_back(Check{std::move(name), c.pass, c.detail});
  }
}

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks_) n += c.pass ? 0 : 1;
  return n;
}

void Report::write_text(std::ostream& os) const {
  for (const auto& c : checks_) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
}

void Report::write_json_lines(std::ostream& os) const {
  for (const auto& c : checks_) {
    std::string detail = c.detail;
    for (auto& ch : detail)
      if (ch == '\t' || ch == '\n') ch = ' ';
    os << c.name << '\t' << (c.pass ? "PASS" : "FAIL") << '\t' << detail << '\n';
  }
}

}  // namespace qdeform
