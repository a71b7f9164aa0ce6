#pragma once

#include <string>
#include <vector>

namespace dqo {

struct CheckResult {
  std::string name;
  int criterion = 0;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  // Printed only; kept out of the JSON so reports are reproducible.
  double runtime_ms = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  unsigned long long seed = 0;

  bool overall() const;
  // Checks sorted by name.
  std::string to_json() const;
};

// |measured - expected| <= tolerance.
CheckResult make_check(std::string name, int criterion, double measured, double expected, double tolerance,
                       std::string detail = {});

// measured <= tolerance, expected 0.
CheckResult bound_check(std::string name, int criterion, double measured, double tolerance, std::string detail = {});

}  // namespace dqo
