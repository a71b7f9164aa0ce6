#include "dqo/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dqo/errors.hpp"
#include "dqo/numerics.hpp"

namespace dqo {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double trapezoid_weight(std::size_t i, std::size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

void require_same_grid(const WaveGrid& a, const WaveGrid& b, const char* context) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    throw InvalidArgument(std::string(context) + ": snapshots live on different grids");
  }
}

}  // namespace

void GridSpec::validate() const {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw InvalidArgument("grid: need finite x_min < x_max");
  }
  if (n < 128 || !std::has_single_bit(n)) {
    throw InvalidArgument("grid: n must be a power of two >= 128 (got " + std::to_string(n) + ")");
  }
}

WaveGrid WaveGrid::zeros(const GridSpec& grid, double t) {
  grid.validate();
  return WaveGrid{grid, std::vector<Complex>(grid.n), t};
}

double WaveGrid::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  return m;
}

bool WaveGrid::truncation_safe() const {
  if (values.empty()) return false;
  const double limit = kEdgeDecay * max_abs();
  return std::abs(values.front()) <= limit && std::abs(values.back()) <= limit;
}

void WaveGrid::require_truncation_safe(const char* context) const {
  if (!truncation_safe()) {
    std::ostringstream msg;
    msg << context << ": wavefunction does not decay at the grid edges (|psi| = "
        << std::abs(values.front()) << ", " << std::abs(values.back()) << " vs max " << max_abs()
        << "); enlarge [" << grid.x_min << ", " << grid.x_max << "]";
    throw TruncationError(msg.str());
  }
}

GaussianSpec parse_gaussian_spec(const std::string& text) {
  const std::string prefix = "gaussian:";
  if (text.rfind(prefix, 0) != 0) {
    throw InvalidArgument("initial condition must look like gaussian:x0=..,p0=..,s=.. (got '" + text + "')");
  }
  GaussianSpec g;
  std::istringstream in(text.substr(prefix.size()));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("initial condition: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != val.size() || !std::isfinite(v)) {
      throw InvalidArgument("initial condition: malformed number '" + val + "' for " + key);
    }
    if (key == "x0") {
      g.x0 = v;
    } else if (key == "p0") {
      g.p0 = v;
    } else if (key == "s") {
      g.s = v;
    } else {
      throw InvalidArgument("initial condition: unknown key '" + key + "'");
    }
  }
  if (!(g.s > 0.0)) throw InvalidArgument("initial condition: s must be > 0");
  return g;
}

Complex gaussian_value(const GaussianSpec& g, double x) {
  const double norm = std::pow(kPi * g.s * g.s, -0.25);
  const double u = (x - g.x0) / g.s;
  return norm * std::exp(Complex(-0.5 * u * u, g.p0 * x));
}

WaveGrid initial_gaussian(const GaussianSpec& g, const GridSpec& grid) {
  if (!(g.s > 0.0)) throw InvalidArgument("initial_gaussian: s must be > 0");
  WaveGrid w = WaveGrid::zeros(grid, 0.0);
  for (std::size_t i = 0; i < grid.n; ++i) w.values[i] = gaussian_value(g, grid.x(i));
  w.require_truncation_safe("initial_gaussian");
  return w;
}

WaveGrid propagate(const KernelParams& kp, const WaveGrid& chi, const PropagateOptions& options) {
  chi.grid.validate();
  chi.require_truncation_safe("propagate (input)");
  if (!(kp.t > 0.0)) throw InvalidArgument("propagate: kernel time must be > 0");
  const GridSpec& g = chi.grid;
  const std::size_t n = g.n;
  const double dx = g.dx();

  // Weighted input with the y^2 chirp folded in.
  std::vector<Complex> f(n);
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) {
    xs[j] = g.x(j);
    f[j] = trapezoid_weight(j, n) * chi.values[j] * std::polar(1.0, kp.gamma * xs[j] * xs[j]);
  }

  WaveGrid out{g, std::vector<Complex>(n), chi.t + kp.t};
  for (std::size_t i = 0; i < n; ++i) {
    const double bx = kp.beta * xs[i];
    numerics::ComplexCompensatedSum sum;
    for (std::size_t j = 0; j < n; ++j) {
      sum.add(f[j] * std::polar(1.0, bx * xs[j]));
    }
    out.values[i] = kp.prefactor * std::polar(1.0, kp.alpha * xs[i] * xs[i]) * sum.value() * dx;
  }
  if (options.require_truncation_safe_output) out.require_truncation_safe("propagate (output)");
  return out;
}

GaussianPacket propagate_gaussian_analytic(const KernelParams& kp, const GaussianSpec& g) {
  if (!(g.s > 0.0)) throw InvalidArgument("propagate_gaussian_analytic: s must be > 0");
  const double s2 = g.s * g.s;
  const Complex A = 1.0 / (2.0 * s2) - kI * kp.gamma;
  const Complex B0 = g.x0 / s2 + kI * g.p0;
  const double norm = std::pow(kPi * s2, -0.25);

  GaussianPacket out;
  out.t = kp.t;
  out.q2 = kI * kp.alpha - kp.beta * kp.beta / (4.0 * A);
  out.q1 = kI * kp.beta * B0 / (2.0 * A);
  out.q0 = std::log(kp.prefactor * norm * std::sqrt(kPi / A)) + B0 * B0 / (4.0 * A) -
           g.x0 * g.x0 / (2.0 * s2);
  return out;
}

WaveGrid GaussianPacket::sample(const GridSpec& grid) const {
  WaveGrid w = WaveGrid::zeros(grid, t);
  for (std::size_t i = 0; i < grid.n; ++i) w.values[i] = (*this)(grid.x(i));
  return w;
}

double squared_norm(const WaveGrid& w) {
  std::vector<double> dens(w.values.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = std::norm(w.values[i]);
  return numerics::trapezoid<double>(dens, w.grid.dx());
}

std::vector<Complex> apply_hamiltonian(const PdeCoefficients& c, const WaveGrid& w) {
  const double dx = w.grid.dx();
  const auto d1 = numerics::first_derivative<Complex>(w.values, dx);
  const auto d2 = numerics::second_derivative<Complex>(w.values, dx);
  std::vector<Complex> out(w.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = w.grid.x(i);
    out[i] = -c.a * d2[i] + c.b * x * x * w.values[i] - kI * (c.c * x * d1[i] + c.d * w.values[i]);
  }
  return out;
}

double pde_residual(const CoefficientSet& coeffs, const WaveGrid& before, const WaveGrid& at,
                    const WaveGrid& after) {
  require_same_grid(before, at, "pde_residual");
  require_same_grid(at, after, "pde_residual");
  const double delta = 0.5 * (after.t - before.t);
  if (!(delta > 0.0)) throw InvalidArgument("pde_residual: snapshots must be ordered in time");
  const auto hpsi = apply_hamiltonian(coeffs.at(at.t), at);
  const double scale = at.max_abs();
  if (!(scale > 0.0)) throw InvalidArgument("pde_residual: zero wavefunction");
  double worst = 0.0;
  const std::size_t n = at.values.size();
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Complex dt = (after.values[i] - before.values[i]) / (2.0 * delta);
    worst = std::max(worst, std::abs(kI * dt - hpsi[i]));
  }
  return worst / scale;
}

GaugePhase GaugePhase::uniform_damping(double lambda) {
  GaugePhase g;
  g.label = GaugeLabel::UniformDamping;
  g.lambda = lambda;
  g.f = [lambda](double, double t) { return Complex(0.0, 0.5 * lambda * t); };
  return g;
}

GaugePhase GaugePhase::quadratic_chirp(double lambda, double omega0) {
  GaugePhase g;
  g.label = GaugeLabel::QuadraticChirp;
  g.lambda = lambda;
  g.omega0 = omega0;
  g.f = [lambda, omega0](double x, double) { return Complex(-lambda * x * x / (2.0 * omega0), 0.0); };
  return g;
}

WaveGrid gauge_apply(const GaugePhase& phase, const WaveGrid& w) {
  if (!phase.f) throw InvalidArgument("gauge_apply: empty phase function");
  WaveGrid out = w;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    out.values[i] = std::exp(kI * phase.f(w.grid.x(i), w.t)) * w.values[i];
  }
  return out;
}

CoefficientSet gauge_target(GaugeLabel label, const CoefficientSet& source) {
  if (label == GaugeLabel::UniformDamping && source.kind() == ModelKind::Model1) {
    return builtin_model(ModelKind::Shifted, source.omega0(), source.lambda());
  }
  if (label == GaugeLabel::QuadraticChirp && source.kind() == ModelKind::Shifted) {
    return builtin_model(ModelKind::HarmonicReduced, source.omega0(), source.lambda());
  }
  throw InvalidArgument("gauge_target: no built-in image for this gauge/model pair");
}

WaveGrid fourier_transform(const WaveGrid& w, const GridSpec& k_grid) {
  k_grid.validate();
  const std::size_t n = w.values.size();
  const double dx = w.grid.dx();
  std::vector<Complex> f(n);
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) {
    xs[j] = w.grid.x(j);
    f[j] = trapezoid_weight(j, n) * w.values[j];
  }
  WaveGrid out = WaveGrid::zeros(k_grid, w.t);
  const double norm = dx / std::sqrt(2.0 * kPi);
  for (std::size_t m = 0; m < k_grid.n; ++m) {
    const double k = k_grid.x(m);
    numerics::ComplexCompensatedSum sum;
    for (std::size_t j = 0; j < n; ++j) sum.add(f[j] * std::polar(1.0, -k * xs[j]));
    out.values[m] = norm * sum.value();
  }
  return out;
}

double sup_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw InvalidArgument("sup_distance: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double fourier_duality_check(double omega0, double lambda, double t, const WaveGrid& chi) {
  chi.require_truncation_safe("fourier_duality_check");
  const GridSpec k_grid = chi.grid;
  const WaveGrid chi_k = fourier_transform(chi, k_grid);
  const double edge = std::max(std::abs(chi_k.values.front()), std::abs(chi_k.values.back()));
  if (edge > 1e-8 * chi_k.max_abs()) {
    throw AliasingError("fourier_duality_check: momentum-space tails exceed 1e-8 of the peak");
  }
  if (t == 0.0) return 0.0;

  const CoefficientSet model1 = builtin_model(ModelKind::Model1, omega0, lambda);
  const WaveGrid lhs = fourier_transform(propagate(kernel_closed_form(model1, t), chi), k_grid);
  const WaveGrid rhs = propagate(kernel_closed_form(momentum_dual(model1), t), chi_k);
  return sup_distance(lhs.values, rhs.values);
}

double composition_check(const CoefficientSet& coeffs, double t1, double t2, const WaveGrid& chi) {
  if (!coeffs.is_builtin() || !coeffs.autonomous()) {
    throw InvalidArgument("composition_check: needs an autonomous built-in model (not model3/custom)");
  }
  if (t1 < 0.0 || t2 < 0.0) throw InvalidArgument("composition_check: times must be >= 0");
  auto evolve = [&](double t, const WaveGrid& w) {
    return t == 0.0 ? w : propagate(kernel_closed_form(coeffs, t), w);
  };
  const WaveGrid direct = evolve(t1 + t2, chi);
  const WaveGrid stepped = evolve(t2, evolve(t1, chi));
  return sup_distance(direct.values, stepped.values);
}

}  // namespace dqo
