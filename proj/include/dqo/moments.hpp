#pragma once

// Expectation values <A> = int psi^* A psi dx (not renormalized by the norm)
// and their evolution under H = a p^2 + b x^2 + c px + d xp, where H may be
// non-self-adjoint: d<A>/dt = i <H^dagger A - A H>.

#include <array>
#include <complex>
#include <vector>

#include "dqo/dynamics.hpp"
#include "dqo/models.hpp"

namespace dqo {

struct MomentState {
  double p2 = 0.0;   // <p^2>
  double x2 = 0.0;   // <x^2>
  double sym = 0.0;  // <px + xp>
  double x1 = 0.0;   // <x>
  double p1 = 0.0;   // <p>
  double one = 1.0;  // <1> = ||psi||^2
  double t = 0.0;
};

struct MomentRates {
  double p2 = 0.0;
  double x2 = 0.0;
  double sym = 0.0;
  double x1 = 0.0;
  double p1 = 0.0;
  double one = 0.0;
};

// Operator-form coefficients:
//   p2'  = -(3c + d) p2 - 2b sym        x1' = 2a p1 + 2d x1
//   x2'  = (c + 3d) x2 + 2a sym         p1' = -2b x1 - 2c p1
//   sym' = 4a p2 - 4b x2 + (d - c) sym  one' = (d - c) one
MomentRates moment_rhs_general(const OperatorCoefficients& op, const MomentState& s);

// RK4 on a uniform grid of `steps` intervals, steps >= 100. Returns the
// states at every node.
std::vector<MomentState> integrate_moments(const CoefficientSet& coeffs, const MomentState& s0, double t_end,
                                           int steps);

// Model1, underdamped: the quadratic part in closed form, plus
// one = one0 e^{lt} and the damped-oscillator first moments.
MomentState closed_form_model1(double omega0, double lambda, const MomentState& s0, double t);

// Model2, from the Model1 form under p <-> x, l -> -l, w0 -> -w0.
MomentState closed_form_model2(double omega0, double lambda, const MomentState& s0, double t);

// The 3x3 matrices of (p2, x2, sym)' = A (p2, x2, sym) for Models 1 and 2.
using Matrix3 = std::array<std::array<double, 3>, 3>;
Matrix3 system_matrix(const OperatorCoefficients& op);

struct EigenStructure {
  Complex r0, r_plus, r_minus;
  std::array<Complex, 3> v0, v_plus, v_minus;
  // det [v0 v_plus v_minus]
  Complex det;
};

// r0 = l, r+- = l +- 2iw, v0 = (w0, w0, 2l),
// v+- = ((l +- iw)^2, w0^2, 2 w0 (l +- iw)). Underdamped only.
EigenStructure eigen_structure_model1(double omega0, double lambda);

// a p2 + b x2 + (c + d)/2 sym + i (d - c)/2 one.
Complex hamiltonian_expectation(const OperatorCoefficients& op, const MomentState& s);

// The self-adjoint part: a p2 + b x2 + (c + d)/2 sym.
double mechanical_energy(const OperatorCoefficients& op, const MomentState& s);

// <x>(t) solving x'' - 2l x' + w0^2 x = 0 (Model1), x'' + 2l x' + w0^2 x = 0
// (Model2) or x'' + w^2 x = 0 (Shifted), with x'(0) from the first-order
// system. Underdamped, built-in Model1/Model2/Shifted only.
double ehrenfest_position(ModelKind kind, double omega0, double lambda, double x0, double p0, double t);

// Second-order residual x'' + k1 x' + k0 x of the model's Ehrenfest equation
// from three equally spaced samples.
double ehrenfest_residual(ModelKind kind, double omega0, double lambda, double x_minus, double x_mid,
                          double x_plus, double h);

// Exact moments of the normalized Gaussian initial state.
MomentState gaussian_moments(const GaussianSpec& g);

// p, p^2 and px + xp applied with sixth-order central differences.
MomentState moments_from_wave(const WaveGrid& w);

}  // namespace dqo
