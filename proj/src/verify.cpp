#include "dqo/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "dqo/eigenstates.hpp"
#include "dqo/errors.hpp"
#include "dqo/kernel.hpp"
#include "dqo/moments.hpp"
#include "dqo/numerics.hpp"

namespace dqo {

namespace {

constexpr double kPi = std::numbers::pi;
using numerics::format_double;

struct CriterionInfo {
  const char* title;
  double budget_s;
};

constexpr CriterionInfo kCriteria[kCriterionCount] = {
    {"kernel oracle agreement", 10.0},
    {"norm laws", 20.0},
    {"moment dynamics", 2.0},
    {"wave/ODE moment consistency", 30.0},
    {"Ehrenfest equations", 20.0},
    {"spectrum and factorization", 5.0},
    {"Mehler resummation", 10.0},
    {"gauge pipeline", 10.0},
    {"Fourier duality", 10.0},
    {"structural identities", 10.0},
};

GridSpec grid_or(const VerifyOptions& opt, GridSpec fallback) { return opt.grid.value_or(fallback); }

std::string name_of(ModelKind k) { return std::string(model_name(k)); }

double omega_of(double omega0, double lambda) { return std::sqrt((omega0 - lambda) * (omega0 + lambda)); }

double max_moment_diff(const MomentState& a, const MomentState& b) {
  return std::max({std::abs(a.p2 - b.p2), std::abs(a.x2 - b.x2), std::abs(a.sym - b.sym), std::abs(a.x1 - b.x1),
                   std::abs(a.p1 - b.p1), std::abs(a.one - b.one)});
}

// 1. Generic (mu, gamma) pipeline vs the closed-form kernels.
std::vector<CheckResult> kernel_oracle(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (ModelKind kind : {ModelKind::Model1, ModelKind::Model2, ModelKind::Shifted, ModelKind::Model3}) {
    double abg = 0.0, pref = 0.0;
    std::string worst;
    for (int draw = 0; draw < 50; ++draw) {
      const double w0 = 0.5 + 1.5 * unit(rng);
      const double l = 0.9 * w0 * unit(rng);
      const double t = (0.05 + 0.85 * unit(rng)) * kPi / omega_of(w0, l);
      const CoefficientSet c = builtin_model(kind, w0, l);
      const KernelParams num = kernel_params_numeric(c, solve_mu_numeric_auto(c, t), t);
      const KernelParams ref = kernel_closed_form(c, t);
      const double e = std::max({std::abs(num.alpha - ref.alpha), std::abs(num.beta - ref.beta),
                                 std::abs(num.gamma - ref.gamma)});
      if (e > abg) {
        abg = e;
        worst = "omega0=" + format_double(w0) + " lambda=" + format_double(l) + " t=" + format_double(t);
      }
      pref = std::max(pref, std::abs(num.prefactor - ref.prefactor) / std::abs(ref.prefactor));
    }
    out.push_back(bound_check("c01." + name_of(kind) + ".alpha_beta_gamma", 1, abg, 1e-7, "worst at " + worst));
    out.push_back(bound_check("c01." + name_of(kind) + ".prefactor_rel", 1, pref, 1e-6));
  }
  return out;
}

// 2. ||psi(t)||^2 / ||psi(0)||^2 = e^{+-lt}.
std::vector<CheckResult> norm_laws(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 4096});
  const double w0 = 1.0, l = 0.6, t = 1.0;
  const WaveGrid chi = initial_gaussian({0.5, 0.3, 1.0}, grid);
  const double n0 = squared_norm(chi);
  struct Case {
    ModelKind kind;
    double expected;
    double rel_tol;
  };
  for (const Case& c : {Case{ModelKind::Model1, std::exp(l * t), 1e-3}, Case{ModelKind::Model2, std::exp(-l * t), 1e-3},
                        Case{ModelKind::Shifted, 1.0, 1e-6}}) {
    const WaveGrid psi = propagate(kernel_closed_form(builtin_model(c.kind, w0, l), t), chi, {false});
    const double ratio = squared_norm(psi) / n0;
    out.push_back(make_check("c02." + name_of(c.kind) + ".norm_ratio", 2, ratio, c.expected, c.rel_tol * c.expected,
                             "grid n=" + std::to_string(grid.n) + (psi.truncation_safe() ? "" : ", edges not decayed")));
  }
  return out;
}

// 3. Closed-form moment solution, eigenstructure and energy laws.
std::vector<CheckResult> moment_dynamics(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const double w0 = 1.0, l = 0.6;
  const std::vector<MomentState> starts{{0.5, 0.5, 0.0, 0.0, 0.0, 1.0, 0.0},
                                        gaussian_moments({1.0, -0.5, 0.7})};
  for (ModelKind kind : {ModelKind::Model1, ModelKind::Model2}) {
    const CoefficientSet c = builtin_model(kind, w0, l);
    const OperatorCoefficients op = c.operator_form(0.0);
    const double sign = kind == ModelKind::Model1 ? 1.0 : -1.0;
    double closed = 0.0, energy = 0.0;
    for (const MomentState& s0 : starts) {
      const auto traj = integrate_moments(c, s0, 3.0, 3000);
      const double e0 = mechanical_energy(op, s0);
      for (std::size_t k = 150; k < traj.size(); k += 150) {
        const MomentState& s = traj[k];
        const MomentState ref = kind == ModelKind::Model1 ? closed_form_model1(w0, l, s0, s.t)
                                                          : closed_form_model2(w0, l, s0, s.t);
        closed = std::max(closed, max_moment_diff(s, ref));
      }
      for (const MomentState& s : traj) {
        const double expected = e0 * std::exp(sign * l * s.t);
        energy = std::max(energy, std::abs(mechanical_energy(op, s) - expected) / std::abs(expected));
      }
    }
    out.push_back(bound_check("c03." + name_of(kind) + ".closed_vs_rk4", 3, closed, 1e-8, "20 times in [0, 3]"));
    out.push_back(bound_check("c03." + name_of(kind) + ".energy_law_rel", 3, energy, 1e-8));
  }

  std::mt19937_64 rng(opt.seed + 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double det = 0.0, eig = 0.0;
  for (int draw = 0; draw < 21; ++draw) {
    const double a = draw == 0 ? 1.0 : 0.5 + 1.5 * unit(rng);
    const double b = draw == 0 ? 0.6 : 0.95 * a * unit(rng);
    const EigenStructure es = eigen_structure_model1(a, b);
    const double w = omega_of(a, b);
    const Complex expected(0.0, -8.0 * a * a * w * w * w);
    det = std::max(det, std::abs(es.det - expected) / std::abs(expected));
    const Matrix3 A = system_matrix(builtin_model(ModelKind::Model1, a, b).operator_form(0.0));
    auto residual = [&](const std::array<Complex, 3>& v, Complex r) {
      double worst = 0.0;
      for (int i = 0; i < 3; ++i) {
        Complex av = 0.0;
        for (int j = 0; j < 3; ++j) av += A[i][j] * v[j];
        worst = std::max(worst, std::abs(av - r * v[i]));
      }
      return worst;
    };
    eig = std::max({eig, residual(es.v0, es.r0), residual(es.v_plus, es.r_plus), residual(es.v_minus, es.r_minus)});
  }
  out.push_back(bound_check("c03.eigen.determinant_rel", 3, det, 1e-12, "-8i omega0^2 omega^3, 21 draws"));
  out.push_back(bound_check("c03.eigen.eigenvector_residual", 3, eig, 1e-12));
  return out;
}

// 4. Moments of propagated packets vs the ODE trajectory.
std::vector<CheckResult> wave_ode(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 2048});
  const GaussianSpec g{1.0, -0.5, 0.8};
  const WaveGrid chi = initial_gaussian(g, grid);
  for (ModelKind kind : {ModelKind::Model1, ModelKind::Model2}) {
    const CoefficientSet c = builtin_model(kind, 1.0, 0.6);
    const auto traj = integrate_moments(c, gaussian_moments(g), 1.0, 1000);
    double worst = 0.0;
    for (std::size_t k : {250u, 500u, 1000u}) {
      const double t = traj[k].t;
      const MomentState w = moments_from_wave(propagate(kernel_closed_form(c, t), chi));
      worst = std::max(worst, max_moment_diff(w, traj[k]));
    }
    out.push_back(bound_check("c04." + name_of(kind) + ".wave_vs_ode", 4, worst, 2e-3, "t in {0.25, 0.5, 1}"));
  }
  return out;
}

// 5. <x>(t) from propagation against the second-order equations.
std::vector<CheckResult> ehrenfest(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 2048});
  const GaussianSpec g{1.0, 0.5, 1.0};
  const double w0 = 1.0, l = 0.6, h = 0.01;
  const WaveGrid chi = initial_gaussian(g, grid);
  for (ModelKind kind : {ModelKind::Model1, ModelKind::Model2, ModelKind::Shifted}) {
    const CoefficientSet c = builtin_model(kind, w0, l);
    auto x_at = [&](double t) { return moments_from_wave(propagate(kernel_closed_form(c, t), chi)).x1; };
    double res = 0.0, match = 0.0;
    for (double t : {0.5, 1.0}) {
      const double xm = x_at(t - h), x = x_at(t), xp = x_at(t + h);
      res = std::max(res, std::abs(ehrenfest_residual(kind, w0, l, xm, x, xp, h)));
      for (auto [tt, xx] : {std::pair{t - h, xm}, std::pair{t, x}, std::pair{t + h, xp}}) {
        match = std::max(match, std::abs(xx - ehrenfest_position(kind, w0, l, g.x0, g.p0, tt)));
      }
    }
    out.push_back(bound_check("c05." + name_of(kind) + ".ode_residual", 5, res, 1e-3, "h = 0.01"));
    out.push_back(bound_check("c05." + name_of(kind) + ".analytic_match", 5, match, 2e-3));
  }
  return out;
}

// 6. Spectrum, commutator and ground-state annihilation.
std::vector<CheckResult> spectrum(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 4096});
  const OscillatorBasis basis = OscillatorBasis::shifted(1.0, 0.6);
  const auto phi = eigenstate_table(basis, 10, grid);
  const PdeCoefficients h = builtin_model(ModelKind::Shifted, 1.0, 0.6).at(0.0);
  const LadderOperators op = LadderOperators::for_basis(basis);

  double rq = 0.0, rq_ladder = 0.0;
  for (int n = 0; n <= 8; ++n) {
    rq = std::max(rq, std::abs(rayleigh_quotient(h, phi[n]) - energy(n, basis.omega)));
    rq_ladder = std::max(rq_ladder, std::abs(ladder_rayleigh_quotient(op, phi[n]) - energy(n, basis.omega)));
  }
  out.push_back(bound_check("c06.rayleigh_hamiltonian", 6, rq, 1e-6, "n <= 8"));
  out.push_back(bound_check("c06.rayleigh_ladder", 6, rq_ladder, 1e-6, "n <= 8"));

  std::mt19937_64 rng(opt.seed + 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double comm = 0.0;
  for (int k = 0; k < 5; ++k) {
    const GaussianSpec g{-2.0 + 4.0 * unit(rng), -1.0 + 2.0 * unit(rng), 0.7 + 0.8 * unit(rng)};
    comm = std::max(comm, commutator_defect(op, initial_gaussian(g, grid)));
  }
  comm = std::max(comm, commutator_defect(op, phi[3]));
  out.push_back(bound_check("c06.commutator", 6, comm, 1e-5, "6 test states"));

  out.push_back(bound_check("c06.lowering_ground", 6, ladder_apply(op, true, phi[0]).max_abs() / phi[0].max_abs(), 1e-6));

  double ortho = 0.0;
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; m <= 10; ++m) {
      ortho = std::max(ortho, std::abs(inner_product(phi[n], phi[m]) - (n == m ? 1.0 : 0.0)));
    }
  }
  out.push_back(bound_check("c06.orthonormality", 6, ortho, 1e-7, "n, m <= 10"));
  return out;
}

// 7. Mehler partial sums and the Abel-regularized expansion kernel.
std::vector<CheckResult> mehler(const VerifyOptions&) {
  std::vector<CheckResult> out;
  const std::pair<double, double> points[] = {{0.0, 0.0}, {1.0, -1.0}, {1.0, 2.0}, {-0.5, 0.7}, {1.5, 1.0}};

  double partial = 0.0;
  for (Complex r : {Complex(0.9, 0.0), Complex(-0.9, 0.0), std::polar(0.9, kPi / 3.0), Complex(0.0, 0.9)}) {
    for (auto [x, y] : points) {
      partial = std::max(partial, std::abs(mehler_partial_sum(x, y, r, 200) - mehler_closed_form(x, y, r)));
    }
  }
  out.push_back(bound_check("c07.partial_sum_N200", 7, partial, 1e-8, "|r| = 0.9"));

  // Deep enough that e^{-N eps} truncation is negligible next to the eps bias.
  const int N = 30000;
  const double eps = 1e-3;
  double abel = 0.0, rich = 0.0, limit = 0.0;
  for (double l : {0.0, 0.6}) {
    const OscillatorBasis basis = OscillatorBasis::shifted(1.0, l);
    const CoefficientSet shifted = builtin_model(ModelKind::Shifted, 1.0, l);
    // The eps bias grows like eps / sin^2(wt), so stay a quarter period away
    // from the focal points.
    for (double phase : {kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0}) {
      const double t = phase / basis.omega;
      const KernelParams kp = kernel_closed_form(shifted, t);
      for (auto [x, y] : points) {
        const Complex exact = green_function(kp, x, y);
        const Complex k = expansion_kernel(basis, x, y, t, N, eps);
        abel = std::max(abel, std::abs(k - exact));
        rich = std::max(rich, std::abs(expansion_kernel_richardson(basis, x, y, t, N, eps) - exact));
        limit = std::max(limit, std::abs(k - expansion_kernel_limit(basis, x, y, t, eps)));
      }
    }
  }
  out.push_back(bound_check("c07.abel_kernel_eps1e-3", 7, abel, 5e-3, "N = 30000, wt in [pi/4, 3pi/4]"));
  out.push_back(bound_check("c07.richardson_over_abel", 7, rich / abel, 0.5,
                            "Richardson error " + format_double(rich)));
  out.push_back(bound_check("c07.series_vs_mehler_at_eps", 7, limit, 1e-10));
  return out;
}

// 8. Model1 -> Shifted -> harmonic by the two gauge maps.
std::vector<CheckResult> gauge(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 4096});
  const double w0 = 1.0, l = 0.6, t = 1.0, delta = 1e-3;
  const CoefficientSet model1 = builtin_model(ModelKind::Model1, w0, l);
  const WaveGrid chi = initial_gaussian({0.5, 0.3, 1.0}, grid);
  std::vector<WaveGrid> psi;
  for (double s : {t - delta, t, t + delta}) psi.push_back(propagate(kernel_closed_form(model1, s), chi));

  const GaugePhase damping = GaugePhase::uniform_damping(l);
  const GaugePhase chirp = GaugePhase::quadratic_chirp(l, w0);
  const CoefficientSet shifted = gauge_target(GaugeLabel::UniformDamping, model1);
  const CoefficientSet harmonic = gauge_target(GaugeLabel::QuadraticChirp, shifted);
  std::vector<WaveGrid> mid, fin;
  for (const WaveGrid& w : psi) {
    mid.push_back(gauge_apply(damping, w));
    fin.push_back(gauge_apply(chirp, mid.back()));
  }
  out.push_back(bound_check("c08.model1_residual", 8, pde_residual(model1, psi[0], psi[1], psi[2]), 1e-4));
  out.push_back(bound_check("c08.after_damping_gauge_shifted_residual", 8, pde_residual(shifted, mid[0], mid[1], mid[2]), 1e-4));
  out.push_back(bound_check("c08.after_chirp_gauge_harmonic_residual", 8, pde_residual(harmonic, fin[0], fin[1], fin[2]), 1e-4));
  return out;
}

// 9. Momentum representation of Model1.
std::vector<CheckResult> duality(const VerifyOptions& opt) {
  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 4096});
  const WaveGrid chi = initial_gaussian({0.5, 0.3, 1.0}, grid);
  return {bound_check("c09.fourier_duality", 9, fourier_duality_check(1.0, 0.6, 1.0, chi), 1e-5)};
}

// 10. Frequency identity, semigroup law and the t -> 0 limit.
std::vector<CheckResult> structural(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(opt.seed + 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double freq = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double w0 = 0.1 + 4.9 * unit(rng);
    const double l = w0 * unit(rng);
    freq = std::max(freq, frequency_identity_residual(w0, l, 20.0 * unit(rng)));
  }
  out.push_back(bound_check("c10.frequency_identity", 10, freq, 1e-12, "1000 draws"));

  const GridSpec grid = grid_or(opt, {-20.0, 20.0, 2048});
  const WaveGrid chi = initial_gaussian({0.5, 0.3, 1.0}, grid);
  for (ModelKind kind : {ModelKind::Model1, ModelKind::Model2, ModelKind::Shifted}) {
    out.push_back(bound_check("c10." + name_of(kind) + ".composition", 10,
                              composition_check(builtin_model(kind, 1.0, 0.6), 0.7, 0.9, chi), 1e-5,
                              "t1 = 0.7, t2 = 0.9"));
  }

  const GaussianSpec g{0.0, 0.0, 1.0};
  const KernelParams kp = kernel_closed_form(builtin_model(ModelKind::Model1, 1.0, 0.6), 1e-3);
  const WaveGrid psi = propagate_gaussian_analytic(kp, g).sample(grid);
  out.push_back(bound_check("c10.delta_limit_t1e-3", 10, sup_distance(psi.values, initial_gaussian(g, grid).values),
                            1e-3, "analytic Gaussian integral"));
  return out;
}

using CriterionFn = std::vector<CheckResult> (*)(const VerifyOptions&);
constexpr CriterionFn kRunners[kCriterionCount] = {kernel_oracle, norm_laws, moment_dynamics, wave_ode, ehrenfest,
                                                   spectrum,      mehler,    gauge,           duality,  structural};

}  // namespace

std::string criterion_title(int criterion) {
  if (criterion < 1 || criterion > kCriterionCount) throw InvalidArgument("no such criterion");
  return kCriteria[criterion - 1].title;
}

double criterion_budget(int criterion) {
  if (criterion < 1 || criterion > kCriterionCount) throw InvalidArgument("no such criterion");
  return kCriteria[criterion - 1].budget_s;
}

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options) {
  if (criterion < 1 || criterion > kCriterionCount) throw InvalidArgument("no such criterion");
  const auto start = std::chrono::steady_clock::now();
  std::vector<CheckResult> checks;
  try {
    checks = kRunners[criterion - 1](options);
  } catch (const std::exception& e) {
    CheckResult c;
    char prefix[8];
    std::snprintf(prefix, sizeof prefix, "c%02d", criterion);
    c.name = std::string(prefix) + ".error";
    c.criterion = criterion;
    c.measured = std::nan("");
    c.pass = false;
    c.detail = e.what();
    checks = {c};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (auto& c : checks) c.runtime_ms = ms;
  return checks;
}

VerificationReport run_verify(const VerifyOptions& options) {
  VerificationReport report;
  report.seed = options.seed;
  for (int k = 1; k <= kCriterionCount; ++k) {
    auto checks = run_criterion(k, options);
    report.checks.insert(report.checks.end(), checks.begin(), checks.end());
  }
  return report;
}

}  // namespace dqo
