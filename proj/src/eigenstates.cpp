#include "dqo/eigenstates.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dqo/errors.hpp"

namespace dqo {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};
constexpr int kMaxHermiteDegree = 400;
constexpr int kRescaleBits = 512;

void require_degree(int n, const char* context) {
  if (n < 0) throw InvalidArgument(std::string(context) + ": degree must be >= 0");
}

// Un-weighted normalized polynomials g_k = H_k / sqrt(2^k k!), k = 0..n:
// g_{k+1} = sqrt(2/(k+1)) xi g_k - sqrt(k/(k+1)) g_{k-1}.
std::vector<double> normalized_polynomials(int n, double xi) {
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  g[0] = 1.0;
  if (n >= 1) g[1] = std::sqrt(2.0) * xi;
  for (int k = 1; k < n; ++k) {
    g[k + 1] = std::sqrt(2.0 / (k + 1)) * xi * g[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * g[k - 1];
  }
  return g;
}

// Shared by the partial sum and the kernels: sum_{k<=N} h_k(xi) h_k(eta) r^k
// where r^k = e^{-k eps} e^{-i k theta}.
Complex hermite_function_series(double xi, double eta, double theta, double eps, int N) {
  const auto hx = hermite_functions(N, xi);
  const auto hy = hermite_functions(N, eta);
  numerics::ComplexCompensatedSum sum;
  for (int k = 0; k <= N; ++k) {
    const double term = hx[k] * hy[k];
    if (term == 0.0) continue;
    sum.add(term * std::exp(-k * eps) * std::polar(1.0, -k * theta));
  }
  return sum.value();
}

// log of the right side of Mehler's formula, minus (x^2 + y^2)/2.
Complex log_weighted_mehler(double x, double y, Complex r) {
  const Complex one_minus = 1.0 - r * r;
  const Complex q = (2.0 * x * y * r - (x * x + y * y) * r * r) / one_minus;
  return q - 0.5 * (x * x + y * y) - 0.5 * std::log(one_minus);
}

Complex kernel_prefactor(const OscillatorBasis& b, double x, double y, double t) {
  return std::sqrt(b.omega / b.omega0) * std::polar(1.0, b.lambda * (x * x - y * y) / (2.0 * b.omega0)) *
         std::polar(1.0, -0.5 * b.omega * t);
}

WaveGrid apply_ladder_unchecked(const LadderOperators& op, bool lower, const WaveGrid& w) {
  const auto d1 = numerics::first_derivative<Complex>(w.values, w.grid.dx());
  const Complex ax = lower ? op.ax_lower : op.ax_raise;
  const double ad = lower ? op.ad_lower : op.ad_raise;
  WaveGrid out = w;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    out.values[i] = ax * w.grid.x(i) * w.values[i] + ad * d1[i];
  }
  return out;
}

}  // namespace

HermiteEval HermiteEval::compute(int n, double xi) {
  require_degree(n, "hermite");
  if (n > kMaxHermiteDegree) {
    throw InvalidArgument("hermite: degree " + std::to_string(n) + " exceeds " + std::to_string(kMaxHermiteDegree));
  }
  HermiteEval h;
  h.n = n;
  h.xi = xi;
  h.mantissa.resize(static_cast<std::size_t>(n) + 1);
  h.exponent.resize(static_cast<std::size_t>(n) + 1);
  int scale = 0;
  auto store = [&](int k, double v) {
    int e = 0;
    h.mantissa[k] = std::frexp(v, &e);
    h.exponent[k] = v == 0.0 ? 0 : e + scale;
  };
  double prev = 1.0;
  double cur = 2.0 * xi;
  store(0, prev);
  if (n >= 1) store(1, cur);
  for (int k = 1; k < n; ++k) {
    double next = 2.0 * xi * cur - 2.0 * k * prev;
    if (std::abs(next) > std::ldexp(1.0, kRescaleBits)) {
      next = std::ldexp(next, -kRescaleBits);
      cur = std::ldexp(cur, -kRescaleBits);
      scale += kRescaleBits;
    }
    prev = cur;
    cur = next;
    store(k + 1, cur);
  }
  return h;
}

double HermiteEval::value(int k) const {
  if (k < 0 || k > n) throw InvalidArgument("HermiteEval::value: degree out of range");
  const double v = std::ldexp(mantissa[k], exponent[k]);
  if (!std::isfinite(v)) {
    throw InvalidArgument("hermite: H_" + std::to_string(k) + "(" + std::to_string(xi) +
                          ") overflows a double; use hermite_functions");
  }
  return v;
}

double hermite(int n, double xi) { return HermiteEval::compute(n, xi).value(n); }

std::vector<double> hermite_functions(int n, double xi) {
  require_degree(n, "hermite_functions");
  // The Gaussian weight is carried as a separate log scale so that tails far
  // beyond the turning point neither underflow early nor overflow later.
  std::vector<double> h(static_cast<std::size_t>(n) + 1);
  double log_scale = -0.5 * xi * xi;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  h[0] = cur * std::exp(log_scale);
  for (int k = 0; k < n; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e100) {
      cur *= 1e-100;
      prev *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    }
    h[k + 1] = cur * std::exp(log_scale);
  }
  return h;
}

OscillatorBasis OscillatorBasis::shifted(double omega0, double lambda) {
  if (!(omega0 > 0.0) || !(lambda >= 0.0) || !(lambda < omega0) || !std::isfinite(omega0)) {
    throw InvalidArgument("shifted oscillator basis needs omega0 > lambda >= 0");
  }
  return {omega0, std::sqrt((omega0 - lambda) * (omega0 + lambda)), lambda};
}

void OscillatorBasis::validate() const {
  if (!(omega0 > 0.0) || !(omega > 0.0) || !std::isfinite(omega0) || !std::isfinite(omega) ||
      !std::isfinite(lambda)) {
    throw InvalidArgument("oscillator basis needs finite omega0 > 0, omega > 0");
  }
}

Complex eigenstate_value(const ShiftedEigenstate& state, double x) {
  require_degree(state.n, "eigenstate_value");
  const OscillatorBasis& b = state.basis;
  b.validate();
  const double xi = x * std::sqrt(b.omega / b.omega0);
  const double h = hermite_functions(state.n, xi)[state.n];
  return std::pow(b.omega / b.omega0, 0.25) * h * std::polar(1.0, b.lambda * x * x / (2.0 * b.omega0));
}

std::vector<WaveGrid> eigenstate_table(const OscillatorBasis& b, int n_max, const GridSpec& grid) {
  require_degree(n_max, "eigenstate_table");
  b.validate();
  grid.validate();
  std::vector<WaveGrid> table(static_cast<std::size_t>(n_max) + 1, WaveGrid::zeros(grid));
  const double norm = std::pow(b.omega / b.omega0, 0.25);
  const double scale = std::sqrt(b.omega / b.omega0);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const auto h = hermite_functions(n_max, x * scale);
    const Complex chirp = norm * std::polar(1.0, b.lambda * x * x / (2.0 * b.omega0));
    for (int k = 0; k <= n_max; ++k) table[k].values[i] = chirp * h[k];
  }
  return table;
}

double energy(int n, double omega) {
  require_degree(n, "energy");
  return omega * (n + 0.5);
}

Complex inner_product(const WaveGrid& u, const WaveGrid& v) {
  if (!(u.grid == v.grid)) throw InvalidArgument("inner_product: grids differ");
  std::vector<Complex> f(u.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::conj(u.values[i]) * v.values[i];
  return numerics::trapezoid<Complex>(f, u.grid.dx());
}

Expansion expansion_coefficients(const OscillatorBasis& b, const WaveGrid& chi, int n_max) {
  chi.require_truncation_safe("expansion_coefficients");
  const auto table = eigenstate_table(b, n_max, chi.grid);
  Expansion out;
  numerics::CompensatedSum power;
  for (const WaveGrid& phi : table) {
    out.coefficients.push_back(inner_product(phi, chi));
    power.add(std::norm(out.coefficients.back()));
  }
  out.parseval_defect = std::abs(power.value() - squared_norm(chi));
  if (out.parseval_defect > kParsevalTolerance) {
    throw InsufficientBasisError("expansion_coefficients: Parseval defect " + std::to_string(out.parseval_defect) +
                                     " with n_max = " + std::to_string(n_max),
                                 out.parseval_defect);
  }
  return out;
}

WaveGrid reconstruct(const OscillatorBasis& b, const std::vector<Complex>& coefficients, const GridSpec& grid,
                     double t) {
  if (coefficients.empty()) throw InvalidArgument("reconstruct: no coefficients");
  const int n_max = static_cast<int>(coefficients.size()) - 1;
  const auto table = eigenstate_table(b, n_max, grid);
  WaveGrid out = WaveGrid::zeros(grid, t);
  for (int k = 0; k <= n_max; ++k) {
    const Complex c = coefficients[k] * std::polar(1.0, -b.omega * (k + 0.5) * t);
    for (std::size_t i = 0; i < grid.n; ++i) out.values[i] += c * table[k].values[i];
  }
  return out;
}

Complex mehler_partial_sum(double x, double y, Complex r, int N) {
  require_degree(N, "mehler_partial_sum");
  if (!(std::abs(r) < 1.0)) throw InvalidArgument("mehler_partial_sum: needs |r| < 1");
  const auto gx = normalized_polynomials(N, x);
  const auto gy = normalized_polynomials(N, y);
  numerics::ComplexCompensatedSum sum;
  Complex rk = 1.0;
  for (int k = 0; k <= N; ++k) {
    sum.add(gx[k] * gy[k] * rk);
    rk *= r;
  }
  return sum.value();
}

Complex mehler_closed_form(double x, double y, Complex r) {
  if (!(std::abs(r) < 1.0)) throw InvalidArgument("mehler_closed_form: needs |r| < 1");
  return std::exp(log_weighted_mehler(x, y, r) + 0.5 * (x * x + y * y));
}

Complex expansion_kernel(const OscillatorBasis& b, double x, double y, double t, int N, double eps) {
  require_degree(N, "expansion_kernel");
  b.validate();
  if (!(eps > 0.0)) throw InvalidArgument("expansion_kernel: eps must be > 0 (the series is only Abel-summable)");
  const double s = std::sqrt(b.omega / b.omega0);
  return kernel_prefactor(b, x, y, t) * hermite_function_series(x * s, y * s, b.omega * t, eps, N);
}

Complex expansion_kernel_limit(const OscillatorBasis& b, double x, double y, double t, double eps) {
  b.validate();
  if (!(eps > 0.0)) throw InvalidArgument("expansion_kernel_limit: eps must be > 0");
  const double s = std::sqrt(b.omega / b.omega0);
  const Complex r = std::exp(Complex(-eps, -b.omega * t));
  return kernel_prefactor(b, x, y, t) * std::exp(log_weighted_mehler(x * s, y * s, r)) / std::sqrt(kPi);
}

Complex expansion_kernel_richardson(const OscillatorBasis& b, double x, double y, double t, int N, double eps) {
  return 2.0 * expansion_kernel(b, x, y, t, N, eps) - expansion_kernel(b, x, y, t, N, 2.0 * eps);
}

LadderOperators LadderOperators::for_basis(const OscillatorBasis& b) {
  b.validate();
  const double s = std::sqrt(b.omega / b.omega0);
  const double k = b.lambda / std::sqrt(b.omega0 * b.omega);
  const double r2 = std::numbers::sqrt2;
  LadderOperators op;
  op.ax_lower = Complex(s, -k) / r2;
  op.ad_lower = 1.0 / (s * r2);
  op.ax_raise = Complex(s, k) / r2;
  op.ad_raise = -1.0 / (s * r2);
  op.omega = b.omega;
  return op;
}

WaveGrid ladder_apply(const LadderOperators& op, bool lower, const WaveGrid& w) {
  w.require_truncation_safe("ladder_apply");
  return apply_ladder_unchecked(op, lower, w);
}

double commutator_defect(const LadderOperators& op, const WaveGrid& psi) {
  psi.require_truncation_safe("commutator_defect");
  const WaveGrid a_ad = apply_ladder_unchecked(op, true, apply_ladder_unchecked(op, false, psi));
  const WaveGrid ad_a = apply_ladder_unchecked(op, false, apply_ladder_unchecked(op, true, psi));
  double worst = 0.0;
  const std::size_t n = psi.values.size();
  // The outermost points see the zero padding of two nested stencils.
  for (std::size_t i = 4; i + 4 < n; ++i) {
    worst = std::max(worst, std::abs(a_ad.values[i] - ad_a.values[i] - psi.values[i]));
  }
  return worst / psi.max_abs();
}

Complex ladder_rayleigh_quotient(const LadderOperators& op, const WaveGrid& w) {
  w.require_truncation_safe("ladder_rayleigh_quotient");
  const WaveGrid a_ad = apply_ladder_unchecked(op, true, apply_ladder_unchecked(op, false, w));
  const WaveGrid ad_a = apply_ladder_unchecked(op, false, apply_ladder_unchecked(op, true, w));
  WaveGrid hw = w;
  for (std::size_t i = 0; i < w.values.size(); ++i) hw.values[i] = 0.5 * op.omega * (a_ad.values[i] + ad_a.values[i]);
  return inner_product(w, hw) / inner_product(w, w);
}

Complex rayleigh_quotient(const PdeCoefficients& c, const WaveGrid& w) {
  w.require_truncation_safe("rayleigh_quotient");
  WaveGrid hw = w;
  hw.values = apply_hamiltonian(c, w);
  return inner_product(w, hw) / inner_product(w, w);
}

}  // namespace dqo
