#pragma once

// Run configuration: INI-style text with sections [model], [grid], [initial]
// and [run].
//
//   [model]                 [grid]          [initial]
//   name = model1           x_min = -20     state = gaussian:x0=0,p0=0,s=1
//   omega0 = 1              x_max = 20
//   lambda = 0.6            n = 2048        [run]
//                                           times = 0.5, 1.0
//                                           outputs = out
//                                           seed = 1

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqo/dynamics.hpp"
#include "dqo/errors.hpp"
#include "dqo/models.hpp"

namespace dqo {

enum class Command { Propagate, Kernel, Moments, Mehler, Eigen, Verify };

std::string_view command_name(Command c);

struct RunConfig {
  std::string model = "model1";
  double omega0 = 1.0;
  double lambda = 0.6;
  GridSpec grid;
  // True when [grid] appeared in the text; verify then uses it instead of
  // its pinned grids.
  bool grid_set = false;
  std::string initial = "gaussian:x0=0,p0=0,s=1";
  std::vector<double> times{1.0};
  std::string outputs = ".";
  std::uint64_t seed = 1;

  ModelKind kind() const { return parse_model_kind(model); }
  GaussianSpec gaussian() const { return parse_gaussian_spec(initial); }
  // Built-in models come from (omega0, lambda); custom:<path> loads the table.
  CoefficientSet coefficients() const;
};

// Every problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Syntax and per-key checks. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Preconditions of `command` on an already parsed config; empty when valid.
std::vector<std::string> validate_for(const RunConfig& config, Command command);

}  // namespace dqo
