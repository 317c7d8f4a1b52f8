#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace netres {

enum class Severity { Info, Warning, Error };

const char* to_string(Severity s);

struct Finding {
  Severity severity;
  std::string message;
};

inline bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

}  // namespace netres
