#include "dqo/report.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace dqo {

bool VerificationReport::overall() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerificationReport::to_json() const {
  std::vector<const CheckResult*> sorted;
  for (const auto& c : checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->name < b->name; });

  // NaN is not JSON; failures that produce it are stored as null.
  auto number = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
  nlohmann::ordered_json j;
  j["overall"] = overall();
  j["seed"] = seed;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult* c : sorted) {
    nlohmann::ordered_json item;
    item["name"] = c->name;
    item["criterion"] = c->criterion;
    item["measured"] = number(c->measured);
    item["expected"] = number(c->expected);
    item["tolerance"] = number(c->tolerance);
    item["pass"] = c->pass;
    item["detail"] = c->detail;
    j["checks"].push_back(std::move(item));
  }
  return j.dump(2) + "\n";
}

CheckResult make_check(std::string name, int criterion, double measured, double expected, double tolerance,
                       std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.criterion = criterion;
  c.measured = measured;
  c.expected = expected;
  c.tolerance = tolerance;
  c.pass = std::abs(measured - expected) <= tolerance;
  c.detail = std::move(detail);
  return c;
}

CheckResult bound_check(std::string name, int criterion, double measured, double tolerance, std::string detail) {
  return make_check(std::move(name), criterion, measured, 0.0, tolerance, std::move(detail));
}

}  // namespace dqo
