#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqo/config.hpp"
#include "dqo/eigenstates.hpp"
#include "dqo/kernel.hpp"
#include "dqo/moments.hpp"
#include "dqo/verify.hpp"

namespace fs = std::filesystem;
using namespace dqo;
using numerics::format_double;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) row += (row.empty() ? "" : ",") + format_double(v);
  return row + "\n";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

Json params_json(const RunConfig& cfg) {
  Json j;
  j["omega0"] = cfg.omega0;
  j["lambda"] = cfg.lambda;
  j["grid"] = {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max}, {"n", cfg.grid.n}};
  j["initial"] = cfg.initial;
  return j;
}

// Closed forms for built-in models, the numeric pipeline for tables.
KernelParams kernel_for(const CoefficientSet& c, double t, std::string& source) {
  if (c.is_builtin()) {
    source = "closed_form";
    return kernel_closed_form(c, t);
  }
  source = "numeric";
  return kernel_params_numeric(c, solve_mu_numeric_auto(c, t), t);
}

int run_propagate(const RunConfig& cfg, const fs::path& out) {
  const CoefficientSet c = cfg.coefficients();
  const WaveGrid chi = initial_gaussian(cfg.gaussian(), cfg.grid);
  for (std::size_t k = 0; k < cfg.times.size(); ++k) {
    const double t = cfg.times[k];
    std::string source;
    const WaveGrid psi = propagate(kernel_for(c, t, source), chi);
    const double delta = std::min(1e-4, 0.5 * t);
    const WaveGrid before = propagate(kernel_for(c, t - delta, source), chi);
    const WaveGrid after = propagate(kernel_for(c, t + delta, source), chi);

    std::string csv = "x,re,im,abs2\n";
    for (std::size_t i = 0; i < psi.grid.n; ++i) {
      const Complex v = psi.values[i];
      csv += csv_row({psi.grid.x(i), v.real(), v.imag(), std::norm(v)});
    }
    const std::string stem = "propagate_" + std::to_string(k);
    write_file(out / (stem + ".csv"), csv);

    Json side;
    side["model"] = cfg.model;
    side["params"] = params_json(cfg);
    side["t"] = t;
    side["kernel_source"] = source;
    side["norm2"] = squared_norm(psi);
    side["residual"] = pde_residual(c, before, psi, after);
    write_file(out / (stem + ".json"), side.dump(2) + "\n");
    std::cout << stem << ".csv  t=" << format_double(t) << "  norm2=" << format_double(side["norm2"].get<double>())
              << "\n";
  }
  return 0;
}

int run_kernel(const RunConfig& cfg, const fs::path& out) {
  const CoefficientSet c = cfg.coefficients();
  std::string csv = "t,alpha,beta,gamma,pref_re,pref_im,source\n";
  auto row = [&](const KernelParams& kp, const char* source) {
    std::string r = csv_row({kp.t, kp.alpha, kp.beta, kp.gamma, kp.prefactor.real(), kp.prefactor.imag()});
    r.pop_back();
    csv += r + "," + source + "\n";
  };
  double t_max = 0.0;
  for (double t : cfg.times) t_max = std::max(t_max, t);
  const MuSolution mu = solve_mu_numeric_auto(c, t_max);
  for (double t : cfg.times) {
    if (c.is_builtin()) row(kernel_closed_form(c, t), "closed_form");
    row(kernel_params_numeric(c, mu, t), "numeric");
  }
  write_file(out / "kernel.csv", csv);
  std::cout << csv;
  return 0;
}

int run_moments(const RunConfig& cfg, const fs::path& out) {
  const CoefficientSet c = cfg.coefficients();
  const MomentState s0 = gaussian_moments(cfg.gaussian());
  const ModelKind kind = c.kind();
  const bool closed = (kind == ModelKind::Model1 || kind == ModelKind::Model2) && cfg.lambda < cfg.omega0;
  const char* path = closed ? "closed_form" : "rk4";

  std::string csv = "t,p2,x2,sym,x1,p1,one,E\n";
  auto emit = [&](const MomentState& s) {
    csv += csv_row({s.t, s.p2, s.x2, s.sym, s.x1, s.p1, s.one, mechanical_energy(c.operator_form(s.t), s)});
  };
  emit(s0);
  for (double t : cfg.times) {
    if (closed) {
      emit(kind == ModelKind::Model1 ? closed_form_model1(cfg.omega0, cfg.lambda, s0, t)
                                     : closed_form_model2(cfg.omega0, cfg.lambda, s0, t));
    } else {
      const int steps = std::max(100, static_cast<int>(std::ceil(t / 1e-3)));
      emit(integrate_moments(c, s0, t, steps).back());
    }
  }
  write_file(out / "moments.csv", csv);

  Json side;
  side["model"] = cfg.model;
  side["params"] = params_json(cfg);
  Json cols;
  for (const char* col : {"p2", "x2", "sym", "x1", "p1", "one"}) cols[col] = path;
  cols["E"] = std::string(path) + "+mechanical_energy";
  side["columns"] = cols;
  write_file(out / "moments.json", side.dump(2) + "\n");
  std::cout << csv;
  return 0;
}

int run_mehler(const RunConfig& cfg, const fs::path& out) {
  const OscillatorBasis basis = OscillatorBasis::shifted(cfg.omega0, cfg.lambda);
  const double t = cfg.times.front();
  const KernelParams kp = kernel_closed_form(builtin_model(ModelKind::Shifted, cfg.omega0, cfg.lambda), t);
  const std::pair<double, double> points[] = {{0.0, 0.0}, {1.0, -1.0}, {1.0, 2.0}, {-0.5, 0.7}, {1.5, 1.0}};
  std::string csv = "N,eps,sup_error\n";
  for (double eps : {1e-2, 1e-3}) {
    for (int N : {25, 50, 100, 200, 400, 800, 1600, 3200}) {
      double err = 0.0;
      for (auto [x, y] : points) {
        err = std::max(err, std::abs(expansion_kernel(basis, x, y, t, N, eps) - green_function(kp, x, y)));
      }
      csv += std::to_string(N) + "," + format_double(eps) + "," + format_double(err) + "\n";
    }
  }
  write_file(out / "mehler.csv", csv);
  std::cout << csv;
  return 0;
}

int run_eigen(const RunConfig& cfg, const fs::path& out) {
  const OscillatorBasis basis = OscillatorBasis::shifted(cfg.omega0, cfg.lambda);
  const auto phi = eigenstate_table(basis, 8, cfg.grid);
  const PdeCoefficients h = builtin_model(ModelKind::Shifted, cfg.omega0, cfg.lambda).at(0.0);
  std::string csv = "n,E_n,norm_defect,rayleigh_defect\n";
  for (int n = 0; n <= 8; ++n) {
    const double e = energy(n, basis.omega);
    csv += std::to_string(n) + "," + format_double(e) + "," + format_double(std::abs(squared_norm(phi[n]) - 1.0)) +
           "," + format_double(std::abs(rayleigh_quotient(h, phi[n]) - e)) + "\n";
  }
  write_file(out / "eigen.csv", csv);
  std::cout << csv;
  return 0;
}

int run_verify_cmd(const RunConfig& cfg, const fs::path& out) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  if (cfg.grid_set) opt.grid = cfg.grid;
  const VerificationReport report = run_verify(opt);
  for (const CheckResult& c : report.checks) {
    std::printf("%-4s %-40s measured=%-24s expected=%-10s tol=%-8s %8.1f ms%s%s\n", c.pass ? "ok" : "FAIL",
                c.name.c_str(), format_double(c.measured).c_str(), format_double(c.expected).c_str(),
                format_double(c.tolerance).c_str(), c.runtime_ms, c.detail.empty() ? "" : "  ",
                c.detail.c_str());
  }
  write_file(out / "report.json", report.to_json());
  std::printf("overall: %s\n", report.overall() ? "PASS" : "FAIL");
  return report.overall() ? 0 : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped quantum oscillators: propagators, moments and eigenstates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory (overrides [run] outputs)");
  app.add_option("--seed", g.seed, "seed for randomized checks (overrides [run] seed)");

  struct Sub {
    Command command;
    const char* help;
    int (*run)(const RunConfig&, const fs::path&);
  };
  const Sub subs[] = {
      {Command::Propagate, "propagate the initial Gaussian; CSV x,re,im,abs2 plus JSON sidecar", run_propagate},
      {Command::Kernel, "kernel parameters; CSV t,alpha,beta,gamma,pref_re,pref_im,source", run_kernel},
      {Command::Moments, "moment trajectory; CSV t,p2,x2,sym,x1,p1,one,E", run_moments},
      {Command::Mehler, "Mehler convergence table; CSV N,eps,sup_error", run_mehler},
      {Command::Eigen, "shifted-oscillator spectrum; CSV n,E_n,norm_defect,rayleigh_defect", run_eigen},
      {Command::Verify, "run the acceptance suite and write report.json", run_verify_cmd},
  };
  for (const Sub& s : subs) {
    app.add_subcommand(std::string(command_name(s.command)), s.help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const Sub* chosen = nullptr;
  for (const Sub& s : subs) {
    if (app.got_subcommand(std::string(command_name(s.command)))) chosen = &s;
  }

  RunConfig cfg;
  fs::path out;
  try {
    cfg = g.config_path.empty() ? parse_config("") : load_config(g.config_path);
    if (g.out) cfg.outputs = *g.out;
    if (g.seed) cfg.seed = *g.seed;
    const auto errors = validate_for(cfg, chosen->command);
    if (!errors.empty()) throw ConfigError(errors);
    out = cfg.outputs;
    fs::create_directories(out);
  } catch (const ConfigError& e) {
    std::cerr << "dqo " << command_name(chosen->command) << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "dqo " << command_name(chosen->command) << ": " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return chosen->run(cfg, out);
  } catch (const InvalidArgument& e) {
    std::cerr << "dqo " << command_name(chosen->command) << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "dqo " << command_name(chosen->command) << ": " << e.what() << "\n";
    return kExitCheckFailure;
  }
}
