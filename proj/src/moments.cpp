#include "dqo/moments.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "dqo/errors.hpp"
#include "dqo/numerics.hpp"

namespace dqo {

namespace {

const Complex kI{0.0, 1.0};

double require_underdamped(double omega0, double lambda, const char* context) {
  if (!(omega0 > 0.0) || !(lambda >= 0.0) || !std::isfinite(omega0) || !std::isfinite(lambda)) {
    throw InvalidArgument(std::string(context) + ": needs omega0 > 0, lambda >= 0");
  }
  if (!(lambda < omega0)) {
    throw InvalidArgument(std::string(context) + ": closed form needs the underdamped regime lambda < omega0");
  }
  return std::sqrt((omega0 - lambda) * (omega0 + lambda));
}

// Quadratic part only; omega0 may be negative (used by the Model2 map).
void model1_quadratic(double w0, double l, double w, const MomentState& s0, double t, MomentState& out) {
  const double e = std::exp(l * t);
  const double c = std::cos(2.0 * w * t);
  const double s = std::sin(2.0 * w * t);
  const double k0 = (w0 * (s0.p2 + s0.x2) - l * s0.sym) / (2.0 * w * w);
  const double k1 = (l / w0 * s0.sym + (w * w - l * l) / (w0 * w0) * s0.x2 - s0.p2) / (2.0 * w * w);
  const double k2 = (s0.sym - 2.0 * l / w0 * s0.x2) / (2.0 * w0 * w);
  out.p2 = e * (k0 * w0 + k1 * ((l * l - w * w) * c - 2.0 * l * w * s) + k2 * (2.0 * l * w * c + (l * l - w * w) * s));
  out.x2 = e * (k0 * w0 + k1 * w0 * w0 * c + k2 * w0 * w0 * s);
  out.sym = e * (k0 * 2.0 * l + k1 * (2.0 * l * w0 * c - 2.0 * w0 * w * s) + k2 * (2.0 * w0 * w * c + 2.0 * l * w0 * s));
}

struct Oscillation {
  double x = 0.0;
  double dx = 0.0;
};

// e^{g t}(x0 cos wt + B sin wt) with B fixed by x'(0) = v0.
Oscillation damped_oscillation(double g, double w, double x0, double v0, double t) {
  const double B = (v0 - g * x0) / w;
  const double e = std::exp(g * t);
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  return {e * (x0 * c + B * s), e * ((g * x0 + w * B) * c + (g * B - w * x0) * s)};
}

}  // namespace

MomentRates moment_rhs_general(const OperatorCoefficients& op, const MomentState& s) {
  const double a = op.a, b = op.b, c = op.c, d = op.d;
  MomentRates r;
  r.p2 = -(3.0 * c + d) * s.p2 - 2.0 * b * s.sym;
  r.x2 = (c + 3.0 * d) * s.x2 + 2.0 * a * s.sym;
  r.sym = 4.0 * a * s.p2 - 4.0 * b * s.x2 + (d - c) * s.sym;
  r.x1 = 2.0 * a * s.p1 + 2.0 * d * s.x1;
  r.p1 = -2.0 * b * s.x1 - 2.0 * c * s.p1;
  r.one = (d - c) * s.one;
  return r;
}

std::vector<MomentState> integrate_moments(const CoefficientSet& coeffs, const MomentState& s0, double t_end,
                                           int steps) {
  if (steps < 100) throw InvalidArgument("integrate_moments: steps must be >= 100");
  using S = numerics::State<6>;
  auto rhs = [&](double t, const S& y) {
    const MomentState m{y[0], y[1], y[2], y[3], y[4], y[5], t};
    const MomentRates r = moment_rhs_general(coeffs.operator_form(t), m);
    return S{r.p2, r.x2, r.sym, r.x1, r.p1, r.one};
  };
  const S y0{s0.p2, s0.x2, s0.sym, s0.x1, s0.p1, s0.one};
  const auto ys = numerics::rk4_integrate<6>(rhs, y0, s0.t, t_end, steps);
  std::vector<MomentState> out;
  out.reserve(ys.size());
  const double h = (t_end - s0.t) / steps;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double t = k + 1 == ys.size() ? t_end : s0.t + static_cast<double>(k) * h;
    out.push_back({ys[k][0], ys[k][1], ys[k][2], ys[k][3], ys[k][4], ys[k][5], t});
  }
  return out;
}

MomentState closed_form_model1(double omega0, double lambda, const MomentState& s0, double t) {
  const double w = require_underdamped(omega0, lambda, "closed_form_model1");
  const double tau = t - s0.t;
  MomentState out;
  out.t = t;
  model1_quadratic(omega0, lambda, w, s0, tau, out);
  // x' = w0 p, p' = -w0 x + 2l p.
  const Oscillation o = damped_oscillation(lambda, w, s0.x1, omega0 * s0.p1, tau);
  out.x1 = o.x;
  out.p1 = o.dx / omega0;
  out.one = s0.one * std::exp(lambda * tau);
  return out;
}

MomentState closed_form_model2(double omega0, double lambda, const MomentState& s0, double t) {
  const double w = require_underdamped(omega0, lambda, "closed_form_model2");
  const double tau = t - s0.t;
  MomentState swapped = s0;
  std::swap(swapped.p2, swapped.x2);
  MomentState image;
  model1_quadratic(-omega0, -lambda, w, swapped, tau, image);
  MomentState out;
  out.t = t;
  out.p2 = image.x2;
  out.x2 = image.p2;
  out.sym = image.sym;
  // x' = w0 p - 2l x, p' = -w0 x.
  const Oscillation o = damped_oscillation(-lambda, w, s0.x1, omega0 * s0.p1 - 2.0 * lambda * s0.x1, tau);
  out.x1 = o.x;
  out.p1 = (o.dx + 2.0 * lambda * o.x) / omega0;
  out.one = s0.one * std::exp(-lambda * tau);
  return out;
}

Matrix3 system_matrix(const OperatorCoefficients& op) {
  const double a = op.a, b = op.b, c = op.c, d = op.d;
  return {{{-(3.0 * c + d), 0.0, -2.0 * b}, {0.0, c + 3.0 * d, 2.0 * a}, {4.0 * a, -4.0 * b, d - c}}};
}

EigenStructure eigen_structure_model1(double omega0, double lambda) {
  const double w = require_underdamped(omega0, lambda, "eigen_structure_model1");
  EigenStructure es;
  const Complex lp(lambda, w), lm(lambda, -w);
  es.r0 = lambda;
  es.r_plus = Complex(lambda, 2.0 * w);
  es.r_minus = Complex(lambda, -2.0 * w);
  es.v0 = {omega0, omega0, 2.0 * lambda};
  es.v_plus = {lp * lp, omega0 * omega0, 2.0 * omega0 * lp};
  es.v_minus = {lm * lm, omega0 * omega0, 2.0 * omega0 * lm};
  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = es.v0[i];
    m(i, 1) = es.v_plus[i];
    m(i, 2) = es.v_minus[i];
  }
  es.det = m.determinant();
  return es;
}

Complex hamiltonian_expectation(const OperatorCoefficients& op, const MomentState& s) {
  return mechanical_energy(op, s) + kI * (0.5 * (op.d - op.c) * s.one);
}

double mechanical_energy(const OperatorCoefficients& op, const MomentState& s) {
  return op.a * s.p2 + op.b * s.x2 + 0.5 * (op.c + op.d) * s.sym;
}

double ehrenfest_position(ModelKind kind, double omega0, double lambda, double x0, double p0, double t) {
  const double w = require_underdamped(omega0, lambda, "ehrenfest_position");
  switch (kind) {
    case ModelKind::Model1:
      return damped_oscillation(lambda, w, x0, omega0 * p0, t).x;
    case ModelKind::Model2:
      return damped_oscillation(-lambda, w, x0, omega0 * p0 - 2.0 * lambda * x0, t).x;
    case ModelKind::Shifted:
      return damped_oscillation(0.0, w, x0, omega0 * p0 - lambda * x0, t).x;
    default:
      throw InvalidArgument("ehrenfest_position: Model1, Model2 or Shifted only");
  }
}

double ehrenfest_residual(ModelKind kind, double omega0, double lambda, double x_minus, double x_mid,
                          double x_plus, double h) {
  if (!(h > 0.0)) throw InvalidArgument("ehrenfest_residual: h must be > 0");
  double k1 = 0.0, k0 = omega0 * omega0;
  switch (kind) {
    case ModelKind::Model1:
      k1 = -2.0 * lambda;
      break;
    case ModelKind::Model2:
      k1 = 2.0 * lambda;
      break;
    case ModelKind::Shifted:
      k0 = omega0 * omega0 - lambda * lambda;
      break;
    default:
      throw InvalidArgument("ehrenfest_residual: Model1, Model2 or Shifted only");
  }
  const double xpp = (x_plus - 2.0 * x_mid + x_minus) / (h * h);
  const double xp = (x_plus - x_minus) / (2.0 * h);
  return xpp + k1 * xp + k0 * x_mid;
}

MomentState gaussian_moments(const GaussianSpec& g) {
  if (!(g.s > 0.0)) throw InvalidArgument("gaussian_moments: s must be > 0");
  MomentState s;
  s.x1 = g.x0;
  s.p1 = g.p0;
  s.x2 = g.x0 * g.x0 + 0.5 * g.s * g.s;
  s.p2 = g.p0 * g.p0 + 0.5 / (g.s * g.s);
  s.sym = 2.0 * g.x0 * g.p0;
  return s;
}

MomentState moments_from_wave(const WaveGrid& w) {
  w.require_truncation_safe("moments_from_wave");
  const double dx = w.grid.dx();
  // Sixth order: fourth order leaves ~1e-7 in <p> for p0 = 2 at the default grid.
  const auto d1 = numerics::first_derivative6<Complex>(w.values, dx);
  const auto d2 = numerics::second_derivative6<Complex>(w.values, dx);
  const std::size_t n = w.values.size();
  std::vector<Complex> f1(n), fx(n), fx2(n), fp(n), fp2(n), fsym(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = w.grid.x(i);
    const Complex c = std::conj(w.values[i]);
    const Complex psi = w.values[i];
    f1[i] = c * psi;
    fx[i] = c * x * psi;
    fx2[i] = c * x * x * psi;
    fp[i] = c * (-kI * d1[i]);
    fp2[i] = c * (-d2[i]);
    fsym[i] = c * (-kI * (2.0 * x * d1[i] + psi));
  }
  auto q = [dx](const std::vector<Complex>& f) { return numerics::trapezoid<Complex>(f, dx).real(); };
  MomentState s;
  s.one = q(f1);
  s.x1 = q(fx);
  s.x2 = q(fx2);
  s.p1 = q(fp);
  s.p2 = q(fp2);
  s.sym = q(fsym);
  s.t = w.t;
  return s;
}

}  // namespace dqo
