#pragma once

// The acceptance suite: ten criteria, each a list of named checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqo/dynamics.hpp"
#include "dqo/report.hpp"

namespace dqo {

inline constexpr int kCriterionCount = 10;

struct VerifyOptions {
  std::uint64_t seed = 1;
  // Replaces every criterion's own wave grid when set.
  std::optional<GridSpec> grid;
};

std::string criterion_title(int criterion);
// Wall-clock budget in seconds.
double criterion_budget(int criterion);

// Runs one criterion (1..10). Exceptions become failed checks.
std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options);

VerificationReport run_verify(const VerifyOptions& options);

}  // namespace dqo
