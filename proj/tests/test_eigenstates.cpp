#include <cmath>
#include <numbers>

#include <doctest.h>

#include "dqo/eigenstates.hpp"
#include "dqo/errors.hpp"
#include "dqo/kernel.hpp"
#include "oracles.hpp"

using namespace dqo;
using doctest::Approx;
constexpr double kPi = std::numbers::pi;

namespace {
const GridSpec kGrid4k{-20.0, 20.0, 4096};
const OscillatorBasis kBasis = OscillatorBasis::shifted(1.0, 0.6);
}  // namespace

TEST_CASE("hermite polynomials") {
  CHECK(hermite(0, 0.7) == 1.0);
  CHECK(hermite(1, 0.7) == Approx(1.4));
  CHECK(hermite(2, 1.0) == 2.0);
  CHECK(hermite(3, 1.0) == -4.0);
  CHECK(hermite(6, 0.0) == -120.0);
  for (int n = 0; n <= 20; ++n) {
    for (double x : {-2.3, -0.4, 0.0, 0.9, 3.1}) {
      CAPTURE(n);
      CHECK(hermite(n, x) == Approx(oracle::hermite_explicit(n, x)).epsilon(1e-11));
    }
  }
  // Large degree stays finite in the scaled representation.
  const HermiteEval big = HermiteEval::compute(400, 3.0);
  CHECK(big.exponent[400] > 1000);
  CHECK_THROWS_AS(big.value(400), InvalidArgument);
  CHECK_THROWS_AS(hermite(401, 0.0), InvalidArgument);
  // Hermite functions of high order remain O(1).
  const auto h = hermite_functions(400, 10.0);
  for (double v : h) REQUIRE(std::abs(v) < 1.0);
}

TEST_CASE("eigenstates and spectrum") {
  const OscillatorBasis sho = OscillatorBasis::shifted(1.0, 0.0);
  for (double x : {-1.5, 0.0, 0.4}) {
    CHECK(std::abs(eigenstate_value({0, sho}, x) - std::pow(kPi, -0.25) * std::exp(-0.5 * x * x)) < 1e-15);
  }
  const OscillatorBasis flat{1.0, 0.8, 0.0};
  for (int n : {0, 3, 7}) {
    for (double x : {-2.0, 0.3, 1.1}) {
      CHECK(std::abs(eigenstate_value({n, kBasis}, x)) == Approx(std::abs(eigenstate_value({n, flat}, x))));
    }
  }
  const auto phi = eigenstate_table(kBasis, 5, kGrid4k);
  CHECK(squared_norm(phi[5]) == Approx(1.0).epsilon(1e-8));

  CHECK(energy(0, 0.8) == Approx(0.4));
  CHECK(energy(1, 1.0) == Approx(1.5));
  for (int n = 0; n < 10; ++n) CHECK(energy(n + 1, 0.8) - energy(n, 0.8) == Approx(0.8));
  CHECK_THROWS_AS(OscillatorBasis::shifted(1.0, 1.0), InvalidArgument);
}

TEST_CASE("orthonormality and Rayleigh quotients") {
  const auto phi = eigenstate_table(kBasis, 10, kGrid4k);
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; m <= 10; ++m) {
      REQUIRE(std::abs(inner_product(phi[n], phi[m]) - (n == m ? 1.0 : 0.0)) <= 1e-7);
    }
  }
  const PdeCoefficients h = builtin_model(ModelKind::Shifted, 1.0, 0.6).at(0.0);
  for (int n = 0; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(std::abs(rayleigh_quotient(h, phi[n]) - energy(n, 0.8)) <= 1e-6);
  }
}

TEST_CASE("expansion coefficients and reconstruction") {
  const auto phi = eigenstate_table(kBasis, 4, kGrid4k);
  const Expansion e3 = expansion_coefficients(kBasis, phi[3], 10);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(e3.coefficients[n] - (n == 3 ? 1.0 : 0.0)) <= 1e-8);

  WaveGrid mix = phi[0];
  for (std::size_t i = 0; i < mix.values.size(); ++i) mix.values[i] = (phi[0].values[i] + phi[1].values[i]) / std::sqrt(2.0);
  const Expansion em = expansion_coefficients(kBasis, mix, 6);
  CHECK(std::abs(em.coefficients[0] - 1.0 / std::sqrt(2.0)) <= 1e-8);
  CHECK(std::abs(em.coefficients[1] - 1.0 / std::sqrt(2.0)) <= 1e-8);

  const WaveGrid chi = initial_gaussian({0, 0, 1.4}, kGrid4k);
  const Expansion ec = expansion_coefficients(kBasis, chi, 64);
  CHECK(ec.parseval_defect <= kParsevalTolerance);
  CHECK(sup_distance(reconstruct(kBasis, ec.coefficients, kGrid4k).values, chi.values) <= 1e-6);
  CHECK_THROWS_AS(expansion_coefficients(kBasis, initial_gaussian({3, 2, 0.3}, kGrid4k), 4), InsufficientBasisError);
}

TEST_CASE("reconstruction at t > 0 follows the propagator") {
  const WaveGrid chi = initial_gaussian({0.4, 0.2, 1.1}, kGrid4k);
  const Expansion ec = expansion_coefficients(kBasis, chi, 80);
  const WaveGrid evolved = reconstruct(kBasis, ec.coefficients, kGrid4k, 1.0);
  const auto sh = builtin_model(ModelKind::Shifted, 1.0, 0.6);
  const WaveGrid direct = propagate(kernel_closed_form(sh, 1.0), chi);
  CHECK(sup_distance(evolved.values, direct.values) <= 1e-6);
}

TEST_CASE("Mehler formula") {
  CHECK(std::abs(mehler_partial_sum(0.3, -0.8, 0.0, 50) - 1.0) < 1e-15);
  CHECK(std::abs(mehler_partial_sum(0, 0, 0.5, 200) - 2.0 / std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(mehler_closed_form(0, 0, 0.5) - 2.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(mehler_partial_sum(1, -1, 0.9, 200) - mehler_closed_form(1, -1, 0.9)) < 1e-8);
  const Complex rc = std::polar(0.85, 0.7);
  CHECK(std::abs(mehler_partial_sum(0.4, 1.2, rc, 400) - mehler_closed_form(0.4, 1.2, rc)) < 1e-10);
  CHECK_THROWS_AS(mehler_partial_sum(0, 0, 1.0, 10), InvalidArgument);

  // Error decreases with N past 50 for |r| <= 0.9.
  const std::pair<double, double> pts[] = {{0, 0}, {1, -1}, {0.5, 0.2}, {-1.2, 0.7}, {2, 1.5}};
  double prev = 1e300;
  for (int N = 60; N <= 300; N += 20) {
    double err = 0.0;
    for (auto [x, y] : pts) err = std::max(err, std::abs(mehler_partial_sum(x, y, 0.9, N) - mehler_closed_form(x, y, 0.9)));
    REQUIRE(err < prev);
    prev = err;
  }
}

TEST_CASE("expansion kernel") {
  const OscillatorBasis sho = OscillatorBasis::shifted(1.0, 0.0);
  const KernelParams kp = kernel_closed_form(builtin_model(ModelKind::Shifted, 1.0, 0.0), kPi / 2);
  const Complex exact = green_function(kp, 0, 0);
  // N=400 leaves a truncated alternating tail of a few 1e-3; many more
  // terms are needed to see the Abel limit.
  const double e400 = std::abs(expansion_kernel(sho, 0, 0, kPi / 2, 400, 1e-3) - exact);
  CHECK(e400 < 1e-2);
  CHECK(std::abs(expansion_kernel(sho, 0, 0, kPi / 2, 30000, 1e-3) - exact) <= 5e-3);
  // The resummed series equals the closed form at the same eps.
  CHECK(std::abs(expansion_kernel(sho, 0.5, -0.3, 1.0, 4000, 1e-2) - expansion_kernel_limit(sho, 0.5, -0.3, 1.0, 1e-2)) <
        1e-10);

  const OscillatorBasis flat{1.0, 0.8, 0.0};
  const Complex ratio = expansion_kernel(kBasis, 1, 2, 1.0, 2000, 1e-2) / expansion_kernel(flat, 1, 2, 1.0, 2000, 1e-2);
  CHECK(std::abs(ratio - std::polar(1.0, 0.6 * (1.0 - 4.0) / 2.0)) <= 1e-6);

  for (double t : {1e-3, 1e-2, 0.1}) CHECK(std::isfinite(std::abs(expansion_kernel(sho, 0.2, 0.1, t, 500, 1e-2))));
  CHECK_THROWS_AS(expansion_kernel(sho, 0, 0, 1.0, 10, 0.0), InvalidArgument);

  const KernelParams k1 = kernel_closed_form(builtin_model(ModelKind::Shifted, 1.0, 0.6), 3 * kPi / 8);
  const Complex target = green_function(k1, 0.7, -0.4);
  const double abel = std::abs(expansion_kernel_limit(kBasis, 0.7, -0.4, 3 * kPi / 8, 1e-3) - target);
  const double rich = std::abs(expansion_kernel_richardson(kBasis, 0.7, -0.4, 3 * kPi / 8, 30000, 1e-3) - target);
  CAPTURE(abel);
  CAPTURE(rich);
  CHECK(rich < 0.5 * abel);
}

TEST_CASE("ladder operators") {
  const LadderOperators op = LadderOperators::for_basis(kBasis);
  const double s = std::sqrt(0.8), k = 0.6 / std::sqrt(0.8);
  {
    // a = (al + i be) x + ga d/dx must satisfy the factorization constraints.
    const OscillatorBasis b = OscillatorBasis::shifted(1.3, 0.5);
    const LadderOperators o = LadderOperators::for_basis(b);
    const double al = o.ax_lower.real(), be = o.ax_lower.imag(), ga = o.ad_lower;
    CHECK(2 * al * ga == Approx(1.0).epsilon(1e-14));
    CHECK(b.omega * (al * al + be * be) == Approx(b.omega0 / 2).epsilon(1e-14));
    CHECK(b.omega * ga * ga == Approx(b.omega0 / 2).epsilon(1e-14));
    CHECK(b.omega * be * ga == Approx(-b.lambda / 2).epsilon(1e-14));
  }
  CHECK(std::abs(op.ax_lower * std::sqrt(2.0) - Complex(s, -k)) < 1e-15);
  CHECK(op.ad_lower * std::sqrt(2.0) == Approx(1.0 / s));
  CHECK(std::abs(op.ax_raise * std::sqrt(2.0) - Complex(s, k)) < 1e-15);

  const auto phi = eigenstate_table(kBasis, 6, kGrid4k);
  CHECK(ladder_apply(op, true, phi[0]).max_abs() <= 1e-6);
  for (int n = 1; n <= 5; ++n) {
    const WaveGrid lowered = ladder_apply(op, true, phi[n]);
    CHECK(std::abs(std::abs(inner_product(phi[n - 1], lowered)) - std::sqrt(n)) <= 1e-6);
    const WaveGrid raised = ladder_apply(op, false, phi[n]);
    CHECK(std::abs(std::abs(inner_product(phi[n + 1], raised)) - std::sqrt(n + 1)) <= 1e-6);
    CHECK(std::abs(ladder_rayleigh_quotient(op, phi[n]) - energy(n, 0.8)) <= 1e-6);
  }

  WaveGrid smooth = WaveGrid::zeros(kGrid4k);
  for (std::size_t i = 0; i < smooth.values.size(); ++i) {
    const double x = kGrid4k.x(i);
    smooth.values[i] = std::exp(-0.3 * (x - 1) * (x - 1)) * Complex(std::cos(2 * x), 0.4 * std::sin(x)) +
                       0.5 * std::exp(-(x + 2) * (x + 2));
  }
  CHECK(commutator_defect(op, smooth) <= 1e-5);
}
