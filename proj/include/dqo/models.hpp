#pragma once

// Quadratic Hamiltonian models as time-dependent coefficient sets.
//
// Canonical (PDE) form, with hbar = m = 1:
//
//   i psi_t = -a psi_xx + b x^2 psi - i (c x psi_x + d psi)
//
// Operator form:
//
//   H = a p^2 + b x^2 + c px + d xp,   p = -i d/dx
//
// Since px = -i(1 + x d/dx) and xp = -i x d/dx, the two are related by
// c_pde = c_op + d_op and d_pde = c_op.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dqo {

enum class ModelKind { Model1, Model2, Shifted, Model3, HarmonicReduced, Custom };

std::string_view model_name(ModelKind kind);

struct PdeCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

// Coefficients of p^2, x^2, px and xp.
struct OperatorCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

PdeCoefficients to_pde_form(const OperatorCoefficients& op);
OperatorCoefficients to_operator_form(const PdeCoefficients& pde);

enum class Regime { Underdamped, Critical, Overdamped };

// omega = sqrt(omega0^2 - lambda^2) when underdamped,
// kappa = sqrt(lambda^2 - omega0^2) when overdamped, 0 when critical.
struct DampingRegime {
  Regime regime = Regime::Underdamped;
  double omega = 0.0;
};

DampingRegime classify_damping(double omega0, double lambda);

// Uniformly sampled coefficients t, a, b, c, d. Evaluated through cubic
// B-spline interpolants; derivatives come from the interpolants as well.
class CoefficientTable {
 public:
  CoefficientTable(double t0, double dt, std::vector<double> a,
                   std::vector<double> b, std::vector<double> c,
                   std::vector<double> d);

  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + dt_ * static_cast<double>(size() - 1); }
  double step() const { return dt_; }
  std::size_t size() const { return samples_[0].size(); }

  PdeCoefficients value(double t) const;
  PdeCoefficients derivative(double t) const;

 private:
  struct Splines;
  double t0_;
  double dt_;
  std::vector<double> samples_[4];
  std::shared_ptr<const Splines> splines_;
};

// CSV with header `t,a,b,c,d` and a uniform t column.
CoefficientTable parse_coefficient_csv(std::string_view text);
CoefficientTable load_coefficient_csv(const std::string& path);

// Immutable; cheap to copy (a custom table is shared).
class CoefficientSet {
 public:
  static CoefficientSet custom(CoefficientTable table);

  ModelKind kind() const { return kind_; }
  // Meaningful for built-in models only; 0 for custom tables.
  double omega0() const { return omega0_; }
  double lambda() const { return lambda_; }

  PdeCoefficients at(double t) const;
  PdeCoefficients derivative_at(double t) const;
  OperatorCoefficients operator_form(double t) const { return to_operator_form(at(t)); }

  // Built-in models only.
  DampingRegime regime() const;
  bool is_builtin() const { return kind_ != ModelKind::Custom; }
  // Coefficients independent of t.
  bool autonomous() const;

  const CoefficientTable* table() const { return table_.get(); }

 private:
  friend CoefficientSet builtin_model(ModelKind, double, double);
  friend CoefficientSet momentum_dual(const CoefficientSet&);
  CoefficientSet(ModelKind kind, double omega0, double lambda)
      : kind_(kind), omega0_(omega0), lambda_(lambda) {}

  ModelKind kind_;
  double omega0_;
  double lambda_;
  std::shared_ptr<const CoefficientTable> table_;
};

// Model1: a=b=w0/2, c=d=-l.    Model2: a=b=w0/2, c=-l, d=0.
// Shifted: a=b=w0/2, c=-l, d=-l/2.
// Model3: a=(w0/2)e^{-2lt}, b=(w0/2)e^{2lt}, c=d=0.
// HarmonicReduced: a=w0/2, b=w^2/(2 w0), c=d=0 with w^2 = w0^2 - l^2.
//
// Requires omega0 > 0, lambda >= 0, both finite.
CoefficientSet builtin_model(ModelKind kind, double omega0, double lambda);

// Model1 <-> Model2 with lambda -> -lambda: the form the Hamiltonian takes
// in the momentum representation. The result carries a negative lambda.
CoefficientSet momentum_dual(const CoefficientSet& coeffs);

// Accepts model1 | model2 | shifted | model3 | harmonic | custom:<path>.
ModelKind parse_model_kind(std::string_view name);

struct TauSigma {
  double tau = 0.0;
  double sigma = 0.0;
};

// tau = a'/a - 2c + 4d,
// sigma = ab - cd + d^2 + (d a'/a - d')/2   (the d'/d form expanded).
TauSigma tau_sigma(const CoefficientSet& coeffs, double t);

// h(t) = exp(-int_0^t (c - 2d)). Closed form for built-in models; for custom
// tables, Gauss-Legendre per knot interval (exact on the cubic interpolant).
double h_factor(const CoefficientSet& coeffs, double t);

}  // namespace dqo
