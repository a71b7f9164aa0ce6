#pragma once

// Stationary states of the shifted oscillator
//
//   H = (w0/2)(-d^2/dx^2 + x^2) + i (l/2)(2x d/dx + 1),   w = sqrt(w0^2 - l^2),
//
// its ladder operators, and the eigenfunction-expansion kernel resummed with
// Mehler's formula.

#include <complex>
#include <vector>

#include "dqo/dynamics.hpp"
#include "dqo/numerics.hpp"

namespace dqo {

// H_0..H_n at one point. Values are kept as mantissa * 2^exponent so the
// recurrence H_{k+1} = 2 xi H_k - 2k H_{k-1} never overflows.
struct HermiteEval {
  int n = 0;
  double xi = 0.0;
  std::vector<double> mantissa;
  std::vector<int> exponent;

  static HermiteEval compute(int n, double xi);
  // Throws InvalidArgument when H_k(xi) is not representable as a double.
  double value(int k) const;
};

// H_n(xi). n <= 400.
double hermite(int n, double xi);

// Normalized Hermite functions h_k(xi) = e^{-xi^2/2} H_k(xi) / sqrt(sqrt(pi) 2^k k!)
// for k = 0..n, by the stable recurrence.
std::vector<double> hermite_functions(int n, double xi);

// omega0, omega and the chirp rate lambda of e^{i lambda x^2/(2 omega0)}.
// shifted() ties them by w^2 = w0^2 - l^2; the chirp may also be set to zero
// at the same omega (the harmonic basis the chirp is gauged away from).
struct OscillatorBasis {
  double omega0 = 1.0;
  double omega = 1.0;
  double lambda = 0.0;

  static OscillatorBasis shifted(double omega0, double lambda);
  void validate() const;
};

struct ShiftedEigenstate {
  int n = 0;
  OscillatorBasis basis;
};

// C_n e^{i l x^2/(2 w0)} e^{-xi^2/2} H_n(xi), xi = x sqrt(w/w0), C_n > 0.
Complex eigenstate_value(const ShiftedEigenstate& state, double x);

// phi_0..phi_{n_max} sampled on `grid`.
std::vector<WaveGrid> eigenstate_table(const OscillatorBasis& basis, int n_max, const GridSpec& grid);

// w (n + 1/2).
double energy(int n, double omega);

struct Expansion {
  std::vector<Complex> coefficients;
  // |sum |c_n|^2 - ||chi||^2|
  double parseval_defect = 0.0;
};

inline constexpr double kParsevalTolerance = 1e-6;

// c_n = int phi_n^* chi dy. Throws InsufficientBasisError when the Parseval
// defect exceeds kParsevalTolerance.
Expansion expansion_coefficients(const OscillatorBasis& basis, const WaveGrid& chi, int n_max);

// sum_n c_n e^{-i w (n + 1/2) t} phi_n on `grid`.
WaveGrid reconstruct(const OscillatorBasis& basis, const std::vector<Complex>& coefficients,
                     const GridSpec& grid, double t = 0.0);

// sum_{n<=N} H_n(x) H_n(y) r^n / (2^n n!). |r| < 1.
Complex mehler_partial_sum(double x, double y, Complex r, int N);

// (1 - r^2)^{-1/2} exp((2xyr - (x^2 + y^2) r^2)/(1 - r^2)). |r| < 1.
Complex mehler_closed_form(double x, double y, Complex r);

// sum_{n<=N} e^{-i w (n + 1/2) t} e^{-n eps} phi_n(x) phi_n^*(y). eps > 0.
Complex expansion_kernel(const OscillatorBasis& basis, double x, double y, double t, int N, double eps);

// The N -> infinity limit of expansion_kernel at fixed eps, via Mehler.
Complex expansion_kernel_limit(const OscillatorBasis& basis, double x, double y, double t, double eps);

// 2 K(eps) - K(2 eps), removing the O(eps) term of the Abel limit.
Complex expansion_kernel_richardson(const OscillatorBasis& basis, double x, double y, double t,
                                    int N, double eps);

// a = ax_lower x + ad_lower d/dx, a^dagger = ax_raise x + ad_raise d/dx.
struct LadderOperators {
  Complex ax_lower;
  double ad_lower = 0.0;
  Complex ax_raise;
  double ad_raise = 0.0;
  double omega = 1.0;

  static LadderOperators for_basis(const OscillatorBasis& basis);
};

// a w (lower) or a^dagger w (raise); fourth-order central differences.
WaveGrid ladder_apply(const LadderOperators& op, bool lower, const WaveGrid& w);

// sup |(a a^dagger - a^dagger a) psi - psi| / max|psi|.
double commutator_defect(const LadderOperators& op, const WaveGrid& psi);

// <w, H w> / <w, w> for H = (w/2)(a a^dagger + a^dagger a).
Complex ladder_rayleigh_quotient(const LadderOperators& op, const WaveGrid& w);

// <w, H w> / <w, w> for the PDE-form Hamiltonian with coefficients `c`.
Complex rayleigh_quotient(const PdeCoefficients& c, const WaveGrid& w);

// <u, v> by trapezoid.
Complex inner_product(const WaveGrid& u, const WaveGrid& v);

}  // namespace dqo
