#include <string>

#include <doctest.h>

#include "dqo/config.hpp"
#include "dqo/verify.hpp"

using namespace dqo;

namespace {

bool mentions(const std::vector<std::string>& errors, const std::string& what) {
  for (const auto& e : errors) {
    if (e.find(what) != std::string::npos) return true;
  }
  return false;
}

std::vector<std::string> parse_errors(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig cfg = parse_config("[model]\nname = model1\n");
  CHECK(cfg.kind() == ModelKind::Model1);
  CHECK(cfg.grid == GridSpec{-20.0, 20.0, 2048});
  CHECK_FALSE(cfg.grid_set);
  CHECK(cfg.times == std::vector<double>{1.0});
  CHECK(cfg.seed == 1);
  CHECK(validate_for(cfg, Command::Verify).empty());
}

TEST_CASE("config values and comments") {
  const RunConfig cfg = parse_config(
      "# run\n[model]\nname = model2 ; inline\nomega0 = 1.5\nlambda = 0.25\n"
      "[grid]\nx_min = -15\nx_max = 15\nn = 1024\n"
      "[initial]\nstate = gaussian:x0=1,p0=0,s=1\n"
      "[run]\ntimes = 0.5, 1, 2\noutputs = out\nseed = 42\n");
  CHECK(cfg.kind() == ModelKind::Model2);
  CHECK(cfg.omega0 == 1.5);
  CHECK(cfg.grid.n == 1024);
  CHECK(cfg.grid_set);
  CHECK(cfg.times.size() == 3);
  CHECK(cfg.gaussian().x0 == 1.0);
  CHECK(cfg.outputs == "out");
  CHECK(cfg.seed == 42);
}

TEST_CASE("config errors are collected") {
  const auto errors = parse_errors("[model]\nomega0 = 1.x\nbogus = 3\n[grid]\nn = 1000\n[weird]\n");
  CHECK(errors.size() >= 4);
  CHECK(mentions(errors, "line 2"));
  CHECK(mentions(errors, "unknown key 'bogus'"));
  CHECK(mentions(errors, "[grid]"));
  CHECK(mentions(errors, "unknown section [weird]"));
  CHECK(mentions(parse_errors("[run]\ntimes = 1, -2\n"), "times"));
  CHECK(mentions(parse_errors("name = model1\n"), "outside any section"));
}

TEST_CASE("validation against the command") {
  const RunConfig over = parse_config("[model]\nlambda = 1.4\n");
  for (Command c : {Command::Mehler, Command::Eigen, Command::Verify}) {
    CHECK(mentions(validate_for(over, c), "underdamped"));
  }
  CHECK(validate_for(over, Command::Moments).empty());
  CHECK(validate_for(over, Command::Kernel).empty());
  CHECK_THROWS_AS(parse_config("[model]\nname = model9\n"), ConfigError);
  CHECK_FALSE(validate_for(parse_config("[initial]\nstate = gaussian:s=9\n"), Command::Propagate).empty());
  CHECK_FALSE(validate_for(parse_config("[model]\nname = custom:/nonexistent.csv\n"), Command::Kernel).empty());
}

TEST_CASE("reports") {
  VerificationReport r;
  CHECK_FALSE(r.overall());
  r.checks.push_back(make_check("b", 1, 1.0, 1.0, 0.1));
  r.checks.push_back(bound_check("a", 2, 0.5, 0.1, "note"));
  CHECK_FALSE(r.overall());
  r.checks[1].pass = true;
  CHECK(r.overall());
  const std::string json = r.to_json();
  CHECK(json.find("\"a\"") < json.find("\"b\""));
  CHECK(json.find("runtime") == std::string::npos);
  r.checks[0].measured = std::nan("");
  CHECK(r.to_json().find("null") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical reports") {
  VerifyOptions opt;
  opt.seed = 11;
  auto run = [&] {
    VerificationReport r;
    r.seed = opt.seed;
    for (int c : {1, 10}) {
      for (auto& ch : run_criterion(c, opt)) r.checks.push_back(ch);
    }
    return r.to_json();
  };
  const std::string first = run();
  CHECK(first == run());
  opt.seed = 12;
  CHECK(first != run());
}

TEST_CASE("criterion failures are reported, not thrown") {
  VerifyOptions opt;
  opt.grid = GridSpec{-20.0, 20.0, 128};
  const auto checks = run_criterion(2, opt);
  REQUIRE_FALSE(checks.empty());
  bool any_fail = false;
  for (const auto& c : checks) any_fail |= !c.pass;
  CHECK(any_fail);
  CHECK_THROWS_AS(run_criterion(99, opt), InvalidArgument);
}
