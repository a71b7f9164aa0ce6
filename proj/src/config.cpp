#include "dqo/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace dqo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "\n") + s;
  return out;
}

std::optional<double> to_double(const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != v.size() || !std::isfinite(out)) return std::nullopt;
  return out;
}

std::optional<std::uint64_t> to_uint(const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"model", {"name", "omega0", "lambda"}},
      {"grid", {"x_min", "x_max", "n"}},
      {"initial", {"state"}},
      {"run", {"times", "outputs", "seed"}},
  };
  return keys;
}

bool is_known(const std::string& section, const std::string& key) {
  const auto it = known_keys().find(section);
  if (it == known_keys().end()) return false;
  for (const auto& k : it->second) {
    if (k == key) return true;
  }
  return false;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Propagate: return "propagate";
    case Command::Kernel: return "kernel";
    case Command::Moments: return "moments";
    case Command::Mehler: return "mehler";
    case Command::Eigen: return "eigen";
    case Command::Verify: return "verify";
  }
  return "?";
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : Error("invalid configuration:\n" + join(errors)), errors_(std::move(errors)) {}

CoefficientSet RunConfig::coefficients() const {
  const std::string prefix = "custom:";
  if (model.rfind(prefix, 0) == 0) {
    return CoefficientSet::custom(load_coefficient_csv(model.substr(prefix.size())));
  }
  return builtin_model(kind(), omega0, lambda);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  auto err = [&](const std::string& msg) { errors.push_back("line " + std::to_string(lineno) + ": " + msg); };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        err("malformed section header '" + s + "'");
        continue;
      }
      section = trim(s.substr(1, s.size() - 2));
      if (!known_keys().count(section)) err("unknown section [" + section + "]");
      if (section == "grid") cfg.grid_set = true;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      err("expected key = value, got '" + s + "'");
      continue;
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section.empty()) {
      err("key '" + key + "' outside any section");
      continue;
    }
    if (!known_keys().count(section)) continue;  // already reported
    if (!is_known(section, key)) {
      err("unknown key '" + key + "' in [" + section + "]");
      continue;
    }
    auto number = [&](double& dst) {
      if (auto v = to_double(val)) {
        dst = *v;
      } else {
        err("malformed number '" + val + "' for " + key);
      }
    };
    if (section == "model") {
      if (key == "name") {
        cfg.model = val;
        try {
          parse_model_kind(val);
        } catch (const Error& e) {
          err(e.what());
        }
      } else if (key == "omega0") {
        number(cfg.omega0);
      } else {
        number(cfg.lambda);
      }
    } else if (section == "grid") {
      if (key == "x_min") {
        number(cfg.grid.x_min);
      } else if (key == "x_max") {
        number(cfg.grid.x_max);
      } else if (auto v = to_uint(val)) {
        cfg.grid.n = static_cast<std::size_t>(*v);
      } else {
        err("malformed integer '" + val + "' for n");
      }
    } else if (section == "initial") {
      cfg.initial = val;
      try {
        parse_gaussian_spec(val);
      } catch (const Error& e) {
        err(e.what());
      }
    } else {
      if (key == "times") {
        cfg.times.clear();
        std::istringstream items(val);
        std::string item;
        while (std::getline(items, item, ',')) {
          if (auto v = to_double(trim(item))) {
            cfg.times.push_back(*v);
          } else {
            err("malformed number '" + trim(item) + "' in times");
          }
        }
      } else if (key == "outputs") {
        cfg.outputs = val;
      } else if (auto v = to_uint(val)) {
        cfg.seed = *v;
      } else {
        err("malformed integer '" + val + "' for seed");
      }
    }
  }

  if (!(cfg.omega0 > 0.0)) errors.push_back("[model] omega0 must be > 0");
  if (!(cfg.lambda >= 0.0)) errors.push_back("[model] lambda must be >= 0");
  try {
    cfg.grid.validate();
  } catch (const Error& e) {
    errors.push_back(std::string("[grid] ") + e.what());
  }
  if (cfg.times.empty()) errors.push_back("[run] times must not be empty");
  for (double t : cfg.times) {
    if (!(t > 0.0)) {
      errors.push_back("[run] times must be > 0");
      break;
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> validate_for(const RunConfig& cfg, Command command) {
  std::vector<std::string> errors;
  const std::string name(command_name(command));
  ModelKind kind = ModelKind::Custom;
  try {
    kind = cfg.kind();
  } catch (const Error& e) {
    errors.push_back(e.what());
    return errors;
  }
  const bool closed_form_only = command == Command::Mehler || command == Command::Eigen || command == Command::Verify;
  if (closed_form_only) {
    if (kind == ModelKind::Custom) errors.push_back(name + " needs a built-in model, not a custom table");
    if (!(cfg.lambda < cfg.omega0)) {
      errors.push_back(name + " uses closed forms that need the underdamped regime: lambda (" +
                       std::to_string(cfg.lambda) + ") < omega0 (" + std::to_string(cfg.omega0) + ")");
    }
  }
  if (command == Command::Propagate || command == Command::Kernel || command == Command::Moments) {
    try {
      cfg.coefficients();
    } catch (const Error& e) {
      errors.push_back(e.what());
    }
  }
  if (command == Command::Propagate) {
    try {
      initial_gaussian(cfg.gaussian(), cfg.grid);
    } catch (const Error& e) {
      errors.push_back(e.what());
    }
  }
  return errors;
}

}  // namespace dqo
