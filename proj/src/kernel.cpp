#include "dqo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dqo/errors.hpp"

namespace dqo {

namespace {

using numerics::State;

constexpr double kPi = std::numbers::pi;

// Relative distance to a focal time below which the kernel is refused.
constexpr double kCausticRelDistance = 1e-9;
// |mu| below this fraction of max|mu| is a caustic regardless of distance.
constexpr double kCausticRelMagnitude = 1e-12;

State<3> mu_rhs(const CoefficientSet& coeffs, double t, const State<3>& y) {
  const TauSigma ts = tau_sigma(coeffs, t);
  const PdeCoefficients v = coeffs.at(t);
  // y = (mu, mu', h)
  return {y[1], ts.tau * y[1] - 4.0 * ts.sigma * y[0], -(v.c - 2.0 * v.d) * y[2]};
}

void check_caustic(double t, double mu, double mu_prime, double mu_scale) {
  const bool tiny = std::abs(mu) <= kCausticRelMagnitude * mu_scale;
  const bool near_zero = std::abs(mu) <= kCausticRelDistance * std::abs(mu_prime) * t;
  if (tiny || near_zero || !std::isfinite(mu)) {
    throw CausticError("kernel is singular at t=" + std::to_string(t) +
                       " (mu(t) = " + std::to_string(mu) + " is a focal point)");
  }
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

// ---------------------------------------------------------------------------
// mu

MuSolution solve_mu_numeric(const CoefficientSet& coeffs, double t_end, int steps) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw InvalidArgument("solve_mu_numeric: t_end must be > 0");
  }
  if (steps < 100) throw InvalidArgument("solve_mu_numeric: steps must be >= 100");
  const double a0 = coeffs.at(0.0).a;
  if (a0 == 0.0) throw InvalidArgument("solve_mu_numeric: a(0) must not vanish");

  auto rhs = [&](double t, const State<3>& y) { return mu_rhs(coeffs, t, y); };
  const auto states = numerics::rk4_integrate<3>(rhs, {0.0, 2.0 * a0, 1.0}, 0.0, t_end, steps);

  MuSolution sol{.t_grid = {}, .mu = {}, .mu_prime = {}, .h = {}, .source = MuSource::RungeKutta, .coeffs = coeffs};
  const double h = t_end / steps;
  sol.t_grid.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    sol.t_grid.push_back(k == states.size() - 1 ? t_end : static_cast<double>(k) * h);
    sol.mu.push_back(states[k][0]);
    sol.mu_prime.push_back(states[k][1]);
    sol.h.push_back(states[k][2]);
  }
  return sol;
}

MuSolution solve_mu_numeric_auto(const CoefficientSet& coeffs, double t_end, double max_step) {
  const int steps = std::max(100, static_cast<int>(std::ceil(t_end / max_step)));
  return solve_mu_numeric(coeffs, t_end, steps);
}

MuSolution::Sample MuSolution::at(double t) const {
  const double dt = step();
  const double slack = 1e-12 * std::max(1.0, t_end());
  if (!(t >= -slack && t <= t_end() + slack)) {
    throw InvalidArgument("MuSolution::at: t=" + std::to_string(t) + " outside [0, " +
                          std::to_string(t_end()) + "]");
  }
  const auto last = t_grid.size() - 1;
  auto k = static_cast<std::size_t>(std::clamp(std::floor(t / dt), 0.0, static_cast<double>(last)));
  if (k == last && k > 0) --k;
  const double tk = t_grid[k];
  const double partial = t - tk;
  if (partial == 0.0) return {mu[k], mu_prime[k], h[k]};
  auto rhs = [&](double s, const State<3>& y) { return mu_rhs(coeffs, s, y); };
  const State<3> y = numerics::rk4_step<3>(rhs, tk, {mu[k], mu_prime[k], h[k]}, partial);
  return {y[0], y[1], y[2]};
}

std::vector<double> MuSolution::zeros() const {
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < mu.size(); ++k) {
    if (mu[k] == 0.0 || (mu[k] > 0.0) != (mu[k + 1] > 0.0)) {
      // Newton on the dense output, starting from the secant estimate.
      double z = t_grid[k] - mu[k] * (t_grid[k + 1] - t_grid[k]) / (mu[k + 1] - mu[k]);
      for (int it = 0; it < 4; ++it) {
        const Sample s = at(std::clamp(z, t_grid[k], t_grid[k + 1]));
        if (s.mu_prime == 0.0) break;
        z -= s.mu / s.mu_prime;
      }
      out.push_back(std::clamp(z, t_grid[k], t_grid[k + 1]));
    }
  }
  return out;
}

MuValue mu_closed_form(const CoefficientSet& coeffs, double t) {
  if (!coeffs.is_builtin()) throw InvalidArgument("mu_closed_form: custom coefficients have no closed form");
  const double w0 = coeffs.omega0();
  const double l = coeffs.lambda();
  const DampingRegime reg = coeffs.regime();

  // mu = w0 E(t) s(t), mu' = w0 E(t) (c(t) + eps s(t)), E = e^{eps t}.
  double s = 0.0;
  double c = 0.0;
  switch (reg.regime) {
    case Regime::Underdamped:
      s = std::sin(reg.omega * t) / reg.omega;
      c = std::cos(reg.omega * t);
      break;
    case Regime::Critical:
      s = t;
      c = 1.0;
      break;
    case Regime::Overdamped:
      s = std::sinh(reg.omega * t) / reg.omega;
      c = std::cosh(reg.omega * t);
      break;
  }
  double eps = 0.0;
  switch (coeffs.kind()) {
    case ModelKind::Model1:
    case ModelKind::Model3: eps = -l; break;
    case ModelKind::Model2: eps = l; break;
    default: eps = 0.0; break;
  }
  const double e = std::exp(eps * t);
  return {w0 * e * s, w0 * e * (c + eps * s)};
}

// ---------------------------------------------------------------------------
// prefactor

Complex tracked_prefactor(double mu, int crossings, double a0_sign) {
  const double s = sign_of(a0_sign);
  const double arg_mu = (s < 0.0 ? -kPi : 0.0) + s * kPi * crossings;
  const double modulus = 1.0 / std::sqrt(2.0 * kPi * std::abs(mu));
  return std::polar(modulus, -0.5 * (0.5 * kPi + arg_mu));
}

Complex green_function(const KernelParams& kp, double x, double y) {
  const double phase = kp.alpha * x * x + kp.beta * x * y + kp.gamma * y * y;
  return kp.prefactor * std::polar(1.0, phase);
}

// ---------------------------------------------------------------------------
// numeric kernel

namespace {

struct GammaSample {
  double t;
  MuSolution::Sample s;
  PdeCoefficients v;
  TauSigma ts;
};

GammaSample gamma_sample(const MuSolution& sol, double t, const MuSolution::Sample& s) {
  return {t, s, sol.coeffs.at(t), tau_sigma(sol.coeffs, t)};
}

// Integrands of the two representations.
double integrand_near_mu_zero(const GammaSample& g) {
  return g.v.a * g.ts.sigma * g.s.h * g.s.h / (g.s.mu_prime * g.s.mu_prime);
}
double integrand_away_from_mu_zero(const GammaSample& g) {
  return g.v.a * g.s.h * g.s.h / (g.s.mu * g.s.mu);
}
double explicit_term(const GammaSample& g) {
  return g.v.a * g.s.h * g.s.h / (g.s.mu * g.s.mu_prime);
}

// Fraction of the local "phase" carried by mu': 1 at zeros of mu, 0 at zeros
// of mu'.
double mu_prime_weight(const GammaSample& g) {
  double nu2 = std::abs(4.0 * g.ts.sigma) + 0.25 * g.ts.tau * g.ts.tau;
  if (!(nu2 > 0.0)) nu2 = 1e-300;
  const double mp2 = g.s.mu_prime * g.s.mu_prime;
  return mp2 / (mp2 + nu2 * g.s.mu * g.s.mu);
}

double evaluate_gamma(const MuSolution& sol, double t, GammaRoute route) {
  const auto& tg = sol.t_grid;
  const PdeCoefficients v0 = sol.coeffs.at(0.0);

  enum class Rep { NearMuZero, AwayFromMuZero };
  Rep rep = Rep::NearMuZero;
  double constant = v0.d / (2.0 * v0.a);
  numerics::CompensatedSum integral;

  auto gamma_in = [&](Rep r, const GammaSample& g) {
    return r == Rep::NearMuZero ? explicit_term(g) + constant - 4.0 * integral.value()
                                : constant - integral.value();
  };
  auto integrand = [&](Rep r, const GammaSample& g) {
    return r == Rep::NearMuZero ? integrand_near_mu_zero(g) : integrand_away_from_mu_zero(g);
  };
  auto simpson = [&](Rep r, const GammaSample& lo, const GammaSample& mid, const GammaSample& hi) {
    return (hi.t - lo.t) / 6.0 * (integrand(r, lo) + 4.0 * integrand(r, mid) + integrand(r, hi));
  };

  GammaSample lo = gamma_sample(sol, 0.0, {sol.mu[0], sol.mu_prime[0], sol.h[0]});
  std::size_t k = 0;
  while (k + 1 < tg.size() && tg[k + 1] <= t) {
    const GammaSample hi = gamma_sample(sol, tg[k + 1], {sol.mu[k + 1], sol.mu_prime[k + 1], sol.h[k + 1]});
    if (route == GammaRoute::Literal && (hi.s.mu_prime == 0.0 || sign_of(hi.s.mu_prime) != sign_of(lo.s.mu_prime))) {
      throw DerivativeZeroError("gamma: mu' vanishes near t=" + std::to_string(hi.t) +
                                " inside the quadrature range (0, " + std::to_string(t) + ")");
    }
    const double tm = 0.5 * (lo.t + hi.t);
    const GammaSample mid = gamma_sample(sol, tm, sol.at(tm));
    integral.add(simpson(rep, lo, mid, hi));
    if (route == GammaRoute::Matched) {
      const double w = mu_prime_weight(hi);
      if (rep == Rep::NearMuZero && w < 0.5) {
        constant = gamma_in(rep, hi);
        integral = {};
        rep = Rep::AwayFromMuZero;
      } else if (rep == Rep::AwayFromMuZero && w > 0.5) {
        constant = gamma_in(rep, hi) - explicit_term(hi);
        integral = {};
        rep = Rep::NearMuZero;
      }
    }
    lo = hi;
    ++k;
  }
  if (t > lo.t) {
    const GammaSample hi = gamma_sample(sol, t, sol.at(t));
    if (route == GammaRoute::Literal && (hi.s.mu_prime == 0.0 || sign_of(hi.s.mu_prime) != sign_of(lo.s.mu_prime))) {
      throw DerivativeZeroError("gamma: mu' vanishes near t=" + std::to_string(t));
    }
    const double tm = 0.5 * (lo.t + t);
    const GammaSample mid = gamma_sample(sol, tm, sol.at(tm));
    integral.add(simpson(rep, lo, mid, hi));
    lo = hi;
  }
  return gamma_in(rep, lo);
}

}  // namespace

KernelParams kernel_params_numeric(const CoefficientSet& coeffs, const MuSolution& mu, double t,
                                   const KernelOptions& options) {
  if (!(t > 0.0) || t > mu.t_end() * (1.0 + 1e-12)) {
    throw InvalidArgument("kernel_params_numeric: need 0 < t <= " + std::to_string(mu.t_end()));
  }
  if (mu.coeffs.kind() != coeffs.kind()) {
    throw InvalidArgument("kernel_params_numeric: MuSolution was computed for another model");
  }
  t = std::min(t, mu.t_end());
  double mu_scale = 0.0;
  for (double m : mu.mu) mu_scale = std::max(mu_scale, std::abs(m));

  const MuSolution::Sample s = mu.at(t);
  check_caustic(t, s.mu, s.mu_prime, mu_scale);

  int crossings = 0;
  for (double z : mu.zeros()) {
    if (std::abs(t - z) <= kCausticRelDistance * t) {
      throw CausticError("kernel is singular at t=" + std::to_string(t) + " (focal time " +
                         std::to_string(z) + ")");
    }
    if (z < t) ++crossings;
  }
  if (crossings > 0 && !options.allow_past_caustics) {
    throw CausticError("t=" + std::to_string(t) +
                       " lies past the first focal time; pass allow_past_caustics to use the "
                       "branch-tracking rule");
  }

  const PdeCoefficients v = coeffs.at(t);
  if (v.a == 0.0) throw InvalidArgument("kernel_params_numeric: a(t) vanishes");

  KernelParams kp;
  kp.t = t;
  kp.h = s.h;
  kp.alpha = s.mu_prime / (4.0 * v.a * s.mu) - v.d / (2.0 * v.a);
  kp.beta = -s.h / s.mu;
  kp.gamma = evaluate_gamma(mu, t, options.gamma_route);
  kp.prefactor = tracked_prefactor(s.mu, crossings, coeffs.at(0.0).a);
  return kp;
}

// ---------------------------------------------------------------------------
// closed-form kernel

KernelParams kernel_closed_form(const CoefficientSet& coeffs, double t, const KernelOptions& options) {
  if (!coeffs.is_builtin()) throw InvalidArgument("kernel_closed_form: custom coefficients have no closed form");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("kernel_closed_form: need t > 0");
  const double w0 = coeffs.omega0();
  const double l = coeffs.lambda();
  const DampingRegime reg = coeffs.regime();

  const MuValue m = mu_closed_form(coeffs, t);
  check_caustic(t, m.mu, m.mu_prime, std::abs(m.mu_prime) * t);

  int crossings = 0;
  if (reg.regime == Regime::Underdamped) {
    crossings = static_cast<int>(std::floor(reg.omega * t / kPi));
  }
  if (crossings > 0 && !options.allow_past_caustics) {
    throw CausticError("t=" + std::to_string(t) +
                       " lies past the first focal time pi/omega; pass allow_past_caustics to use "
                       "the branch-tracking rule");
  }

  // w cot wt and w / sin wt, continued to the critical and overdamped regimes.
  double cot_term = 0.0;
  double csc_term = 0.0;
  switch (reg.regime) {
    case Regime::Underdamped:
      cot_term = reg.omega * std::cos(reg.omega * t) / std::sin(reg.omega * t);
      csc_term = reg.omega / std::sin(reg.omega * t);
      break;
    case Regime::Critical:
      cot_term = 1.0 / t;
      csc_term = 1.0 / t;
      break;
    case Regime::Overdamped:
      cot_term = reg.omega * std::cosh(reg.omega * t) / std::sinh(reg.omega * t);
      csc_term = reg.omega / std::sinh(reg.omega * t);
      break;
  }

  KernelParams kp;
  kp.t = t;
  kp.h = h_factor(coeffs, t);
  switch (coeffs.kind()) {
    case ModelKind::Model1:
    case ModelKind::Model2:
    case ModelKind::Shifted:
      kp.alpha = (cot_term + l) / (2.0 * w0);
      kp.beta = -csc_term / w0;
      kp.gamma = (cot_term - l) / (2.0 * w0);
      break;
    case ModelKind::Model3:
      kp.alpha = (cot_term - l) / (2.0 * w0) * std::exp(2.0 * l * t);
      kp.beta = -csc_term / w0 * std::exp(l * t);
      kp.gamma = (cot_term + l) / (2.0 * w0);
      break;
    case ModelKind::HarmonicReduced:
      kp.alpha = cot_term / (2.0 * w0);
      kp.beta = -csc_term / w0;
      kp.gamma = kp.alpha;
      break;
    case ModelKind::Custom: break;
  }
  kp.prefactor = tracked_prefactor(m.mu, crossings, 1.0);
  return kp;
}

// ---------------------------------------------------------------------------

double frequency_identity_residual(double omega0, double lambda, double t) {
  const DampingRegime reg = classify_damping(omega0, lambda);
  if (reg.regime != Regime::Underdamped) {
    throw InvalidArgument("frequency_identity_residual: requires omega0^2 > lambda^2");
  }
  const double w = reg.omega;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  return std::abs(w * w - omega0 * omega0 * s * s - w * w * c * c + lambda * lambda * s * s);
}

double inverse_square_trig_antiderivative(double A, double B, double t) {
  if (A == 0.0) throw InvalidArgument("inverse_square_trig_antiderivative: A must be nonzero");
  const double denom = A * std::cos(t) + B * std::sin(t);
  if (std::abs(denom) <= 1e-14 * (std::abs(A) + std::abs(B))) {
    throw InvalidArgument("inverse_square_trig_antiderivative: pole at t=" + std::to_string(t));
  }
  return std::sin(t) / (A * denom);
}

}  // namespace dqo
