#pragma once

#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace cloudcost {

enum class Severity { warning, error };

enum class DiagnosticCode {
  duplicate_id,
  dangling_reference,
  illegal_requirement,
  illegal_binding,
  group_overlap,
  bad_placement,
  bad_node_spec,
  bad_value,
  bad_pattern,
  rating_out_of_range,
  unknown_item,
  unrated_item,
};

struct Diagnostic {
  Severity severity = Severity::error;
  DiagnosticCode code = DiagnosticCode::bad_value;
  std::string path;  // location, e.g. "nodes[web1].requirements[0]"
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline bool operator<(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.path, a.severity, a.message) < std::tie(b.path, b.severity, b.message);
}

inline std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::error) return true;
  }
  return false;
}

}  // namespace cloudcost
