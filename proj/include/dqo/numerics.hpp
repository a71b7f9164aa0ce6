#pragma once

// Small numerical building blocks shared by the physics modules: a classic
// RK4 integrator with a step-doubling error guard, compensated summation and
// fourth-order finite-difference stencils.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dqo/errors.hpp"

namespace dqo {

using Complex = std::complex<double>;

namespace numerics {

// Neumaier's variant of Kahan summation. Accumulation order is the call order.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(Complex value) {
    re_.add(value.real());
    im_.add(value.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

template <class T>
using Accumulator = std::conditional_t<std::is_same_v<T, Complex>,
                                       ComplexCompensatedSum, CompensatedSum>;

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& k) {
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

// One classic fourth-order Runge-Kutta step. rhs(t, y) -> dy/dt.
template <std::size_t N, class Rhs>
State<N> rk4_step(const Rhs& rhs, double t, const State<N>& y, double h) {
  const State<N> k1 = rhs(t, y);
  const State<N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State<N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State<N> k4 = rhs(t + h, axpy(y, h, k3));
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Default bound on the step-doubling error estimate, per unit time and
// relative to max(1, |y|).
inline constexpr double kDefaultErrorRate = 1e-8;

// Integrates on the uniform grid t0 + k*h, k = 0..steps, with classic RK4.
// Every step is repeated as two half steps; the difference (divided by 15)
// estimates the local error of the full step. Throws StepSizeError when the
// estimate per unit time exceeds max_error_rate.
template <std::size_t N, class Rhs>
std::vector<State<N>> rk4_integrate(const Rhs& rhs, const State<N>& y0,
                                    double t0, double t_end, int steps,
                                    double max_error_rate = kDefaultErrorRate) {
  if (steps < 1 || !(t_end > t0)) {
    throw InvalidArgument("rk4_integrate: need t_end > t0 and steps >= 1");
  }
  const double h = (t_end - t0) / steps;
  std::vector<State<N>> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(y0);
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const State<N>& y = out.back();
    State<N> full = rk4_step<N>(rhs, t, y, h);
    const State<N> half = rk4_step<N>(rhs, t + 0.5 * h,
                                      rk4_step<N>(rhs, t, y, 0.5 * h), 0.5 * h);
    double diff = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      diff = std::max(diff, std::abs(full[i] - half[i]));
      scale = std::max(scale, std::abs(half[i]));
    }
    const double rate = diff / 15.0 / scale / h;
    if (!(rate <= max_error_rate)) {
      throw StepSizeError("RK4 step size too large: error estimate " +
                              std::to_string(rate) + " per unit time at t=" +
                              std::to_string(t),
                          rate);
    }
    out.push_back(full);
  }
  return out;
}

// Fourth-order central differences; samples outside [0, n) are taken as 0,
// which is exact to the boundary-decay tolerance of a truncation-safe grid.
template <class T>
std::vector<T> first_derivative(std::span<const T> f, double dx) {
  const std::size_t n = f.size();
  auto at = [&](std::ptrdiff_t i) -> T {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? T{} : f[i];
  };
  std::vector<T> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::ptrdiff_t>(j);
    d[j] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) /
           (12.0 * dx);
  }
  return d;
}

template <class T>
std::vector<T> second_derivative(std::span<const T> f, double dx) {
  const std::size_t n = f.size();
  auto at = [&](std::ptrdiff_t i) -> T {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? T{} : f[i];
  };
  std::vector<T> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::ptrdiff_t>(j);
    d[j] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) -
            at(i - 2)) /
           (12.0 * dx * dx);
  }
  return d;
}

// Sixth-order variants, same zero padding.
template <class T>
std::vector<T> first_derivative6(std::span<const T> f, double dx) {
  const std::size_t n = f.size();
  auto at = [&](std::ptrdiff_t i) -> T {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? T{} : f[i];
  };
  std::vector<T> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::ptrdiff_t>(j);
    d[j] = (at(i + 3) - 9.0 * at(i + 2) + 45.0 * at(i + 1) - 45.0 * at(i - 1) + 9.0 * at(i - 2) - at(i - 3)) /
           (60.0 * dx);
  }
  return d;
}

template <class T>
std::vector<T> second_derivative6(std::span<const T> f, double dx) {
  const std::size_t n = f.size();
  auto at = [&](std::ptrdiff_t i) -> T {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? T{} : f[i];
  };
  std::vector<T> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::ptrdiff_t>(j);
    d[j] = (2.0 * (at(i + 3) + at(i - 3)) - 27.0 * (at(i + 2) + at(i - 2)) + 270.0 * (at(i + 1) + at(i - 1)) -
            490.0 * at(i)) /
           (180.0 * dx * dx);
  }
  return d;
}

// Trapezoid rule on a uniform grid.
template <class T>
T trapezoid(std::span<const T> f, double dx) {
  if (f.empty()) return T{};
  Accumulator<T> s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
    s.add(w * f[i]);
  }
  return s.value() * dx;
}

// printf("%.17g"): round-trip safe text for a double.
std::string format_double(double v);

}  // namespace numerics
}  // namespace dqo
