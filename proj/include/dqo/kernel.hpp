#pragma once

// Gaussian propagators of quadratic Hamiltonians:
//
//   G(x, y, t) = exp(i(alpha x^2 + beta xy + gamma y^2)) / sqrt(2 pi i mu)
//
// mu solves mu'' - tau mu' + 4 sigma mu = 0, mu(0) = 0, mu'(0) = 2 a(0), and
//
//   alpha = mu'/(4 a mu) - d/(2a),   beta = -h/mu,
//   gamma = a h^2/(mu mu') + d(0)/(2 a(0)) - 4 int_0^t a sigma h^2/(mu')^2.
//
// Two independent routes are provided: a numeric one (RK4 for mu, quadrature
// for gamma) that works for any coefficient set, and closed forms for the
// built-in models.

#include <complex>
#include <vector>

#include "dqo/models.hpp"
#include "dqo/numerics.hpp"

namespace dqo {

enum class MuSource { ClosedForm, RungeKutta };

// Characteristic-function samples on a uniform grid starting at t = 0.
// h(t) is integrated alongside mu so the numeric route needs no closed forms.
struct MuSolution {
  std::vector<double> t_grid;
  std::vector<double> mu;
  std::vector<double> mu_prime;
  std::vector<double> h;
  MuSource source = MuSource::RungeKutta;
  CoefficientSet coeffs;

  double step() const { return t_grid[1] - t_grid[0]; }
  double t_end() const { return t_grid.back(); }

  struct Sample {
    double mu = 0.0;
    double mu_prime = 0.0;
    double h = 1.0;
  };
  // Dense output: a partial RK4 step from the grid node below t.
  Sample at(double t) const;

  // Sign changes of mu after t = 0, located by linear interpolation.
  std::vector<double> zeros() const;
};

MuSolution solve_mu_numeric(const CoefficientSet& coeffs, double t_end, int steps);

// Convenience: grid step <= max_step (default 1e-3), at least 100 steps.
MuSolution solve_mu_numeric_auto(const CoefficientSet& coeffs, double t_end,
                                 double max_step = 1e-3);

struct MuValue {
  double mu = 0.0;
  double mu_prime = 0.0;
};

// Built-in models only. Underdamped: (w0/w) e^{-+lt} sin wt; critical:
// w0 t e^{-+lt}; overdamped: (w0/k) e^{-+lt} sinh kt.
MuValue mu_closed_form(const CoefficientSet& coeffs, double t);

struct KernelParams {
  double t = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  Complex prefactor;  // 1/sqrt(2 pi i mu) on the tracked branch
  double h = 1.0;
};

enum class GammaRoute {
  // The integral formula for gamma as written; refuses ranges where mu'
  // vanishes.
  Literal,
  // The integral formula near zeros of mu, switched to gamma' = -a beta^2
  // where mu' is small. Both representations are matched at the switch
  // nodes, so the result is defined up to the next focal time.
  Matched,
};

struct KernelOptions {
  // By default only t in (0, first zero of mu) is served.
  bool allow_past_caustics = false;
  GammaRoute gamma_route = GammaRoute::Matched;
};

KernelParams kernel_params_numeric(const CoefficientSet& coeffs, const MuSolution& mu,
                                   double t, const KernelOptions& options = {});

// Built-in models only; same branch convention as the numeric route.
KernelParams kernel_closed_form(const CoefficientSet& coeffs, double t,
                                const KernelOptions& options = {});

Complex green_function(const KernelParams& kp, double x, double y);

// 1/sqrt(2 pi i mu) with the branch fixed at t -> 0+ by 1/sqrt(2 pi i 2a(0) t),
// sqrt(i) = e^{i pi/4}, and continued through `crossings` zeros of mu, each of
// which advances arg(mu) by pi * sign(a(0)).
Complex tracked_prefactor(double mu, int crossings, double a0_sign);

// |w^2 - w0^2 sin^2 wt - w^2 cos^2 wt + l^2 sin^2 wt| with w^2 = w0^2 - l^2.
double frequency_identity_residual(double omega0, double lambda, double t);

// sin t / (A (A cos t + B sin t)), an antiderivative of 1/(A cos t + B sin t)^2.
double inverse_square_trig_antiderivative(double A, double B, double t);

}  // namespace dqo
