#pragma once

#include <string>
#include <vector>

namespace shapekit {

struct Violation {
  enum class Kind { Malformed, Law };
  Kind kind = Kind::Law;
  std::string law;      // short name of the broken rule
  std::string witness;  // ids of the offending morphisms / elements / cells
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has_malformed() const {
    for (const auto& v : violations)
      if (v.kind == Violation::Kind::Malformed) return true;
    return false;
  }
  bool mentions(const std::string& law) const {
    for (const auto& v : violations)
      if (v.law == law) return true;
    return false;
  }
  void malformed(std::string law, std::string witness) {
    violations.push_back({Violation::Kind::Malformed, std::move(law), std::move(witness)});
  }
  void law(std::string law, std::string witness) {
    violations.push_back({Violation::Kind::Law, std::move(law), std::move(witness)});
  }
  /// First violation rendered as "law: witness", or empty.
  std::string summary() const {
    if (violations.empty()) return {};
    return violations.front().law + ": " + violations.front().witness;
  }
};

/// Throws SemanticError carrying the first violation when the report is not empty.
void require_valid(const ValidationReport& report, const std::string& what);

}  // namespace shapekit
