#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evflex/model/instance.hpp"

namespace evflex {

struct Violation {
  /// Dotted path of the offending field, e.g. "sessions[3].gamma".
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  /// One violation per line, "field: message".
  [[nodiscard]] std::string summary() const;
};

/// Checks every instance invariant, including the per-session compensation
/// cap. An empty report means the solver accepts the instance.
[[nodiscard]] ValidationReport validate(const Instance& instance);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error("invalid instance:\n" + report.summary()), report_(std::move(report)) {}
  [[nodiscard]] const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace evflex
