#pragma once

// Wave-packet propagation through the Gaussian kernel, norms, PDE residuals,
// gauge maps and the momentum-representation duality.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dqo/kernel.hpp"
#include "dqo/models.hpp"

namespace dqo {

struct GridSpec {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n = 2048;

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  // n a power of two >= 128, x_max > x_min.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// |psi| at both edge points must stay below this fraction of max|psi|.
inline constexpr double kEdgeDecay = 1e-10;

// Samples of psi(x, t) on a uniform grid (end points included).
struct WaveGrid {
  GridSpec grid;
  std::vector<Complex> values;
  double t = 0.0;

  static WaveGrid zeros(const GridSpec& grid, double t = 0.0);

  double max_abs() const;
  bool truncation_safe() const;
  void require_truncation_safe(const char* context) const;
};

struct GaussianSpec {
  double x0 = 0.0;
  double p0 = 0.0;
  double s = 1.0;
};

// Parses "gaussian:x0=..,p0=..,s=..". Missing keys keep their defaults.
GaussianSpec parse_gaussian_spec(const std::string& text);

// (pi s^2)^{-1/4} exp(-(x - x0)^2/(2 s^2) + i p0 x).
Complex gaussian_value(const GaussianSpec& g, double x);

// Throws TruncationError when the packet does not decay at the grid edges.
WaveGrid initial_gaussian(const GaussianSpec& g, const GridSpec& grid);

struct PropagateOptions {
  // Refuse outputs that do not decay at the grid edges.
  bool require_truncation_safe_output = true;
};

// psi(x, t) = sum_y G(x, y, t) chi(y) dy (trapezoid, compensated summation,
// fixed left-to-right order). The output lives on the input grid.
WaveGrid propagate(const KernelParams& kp, const WaveGrid& chi, const PropagateOptions& options = {});

// psi(x) = exp(q2 x^2 + q1 x + q0).
struct GaussianPacket {
  Complex q2;
  Complex q1;
  Complex q0;
  double t = 0.0;

  Complex operator()(double x) const { return std::exp((q2 * x + q1) * x + q0); }
  // Center and rms width of |psi|^2.
  double center() const { return -q1.real() / (2.0 * q2.real()); }
  double width() const { return std::sqrt(-1.0 / (4.0 * q2.real())); }
  WaveGrid sample(const GridSpec& grid) const;
};

// Exact Gaussian integral of the kernel against a Gaussian initial packet.
GaussianPacket propagate_gaussian_analytic(const KernelParams& kp, const GaussianSpec& g);

double squared_norm(const WaveGrid& w);

// H psi = -a psi_xx + b x^2 psi - i (c x psi_x + d psi), fourth-order
// central differences.
std::vector<Complex> apply_hamiltonian(const PdeCoefficients& coeffs, const WaveGrid& w);

// sup over interior points of |i psi_t - H psi| / max|psi|, with psi_t from
// the centered difference of the outer snapshots (at t - delta, t + delta).
double pde_residual(const CoefficientSet& coeffs, const WaveGrid& before, const WaveGrid& at,
                    const WaveGrid& after);

enum class GaugeLabel { UniformDamping, QuadraticChirp, Custom };

// psi' = e^{i f(x, t)} psi. The forward map; the inverse is psi = e^{-if} psi'.
struct GaugePhase {
  GaugeLabel label = GaugeLabel::Custom;
  std::function<Complex(double x, double t)> f;
  double lambda = 0.0;
  double omega0 = 1.0;

  // f = i lambda t / 2: psi' = e^{-lambda t/2} psi, maps Model1 to Shifted.
  static GaugePhase uniform_damping(double lambda);
  // f = -lambda x^2 / (2 omega0): psi' = e^{-i lambda x^2/(2 omega0)} psi,
  // maps Shifted to HarmonicReduced.
  static GaugePhase quadratic_chirp(double lambda, double omega0);
};

WaveGrid gauge_apply(const GaugePhase& phase, const WaveGrid& w);

// The model whose solutions are the images of `source` solutions.
CoefficientSet gauge_target(GaugeLabel label, const CoefficientSet& source);

// Continuous transform F[psi](k) = (2 pi)^{-1/2} int e^{-ikx} psi(x) dx,
// evaluated by trapezoid quadrature onto the momentum grid `k_grid`.
WaveGrid fourier_transform(const WaveGrid& w, const GridSpec& k_grid);

// sup_k |F[U1(t) chi] - U2'(t) F[chi]| where U1 is Model1 and U2' is Model2
// with lambda -> -lambda. Throws AliasingError when |F[chi]| at the momentum
// grid edges exceeds 1e-8 max|F[chi]|.
double fourier_duality_check(double omega0, double lambda, double t, const WaveGrid& chi);

// sup_x |U(t1 + t2) chi - U(t2) U(t1) chi| for an autonomous built-in model.
double composition_check(const CoefficientSet& coeffs, double t1, double t2, const WaveGrid& chi);

double sup_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace dqo
