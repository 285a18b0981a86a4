#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qdeform {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Ordered list of named checks; passes iff every check passes.
class Report {
 public:
  void add(std::string name, bool pass, std::string detail = {});
  /// Appends every check of `other`, prefixing names with `prefix.`.
  void merge(std::string_view prefix, const Report& other);

  const std::vector<Check>& checks() const { return checks_; }
  bool passed() const;
  std::size_t failures() const;

  /// "PASS name: detail" lines.
  void write_text(std::ostream& os) const;
  /// "name<TAB>PASS|FAIL<TAB>detail" lines.
  void write_json_lines(std::ostream& os) const;

 private:
  std::vector<Check> checks_;
};

}  // namespace qdeform
