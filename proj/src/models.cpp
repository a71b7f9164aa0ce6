#include "dqo/models.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "dqo/errors.hpp"

namespace dqo {

namespace {

bool finite(double v) { return std::isfinite(v); }

void require_finite(double v, const char* what) {
  if (!finite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Model1: return "model1";
    case ModelKind::Model2: return "model2";
    case ModelKind::Shifted: return "shifted";
    case ModelKind::Model3: return "model3";
    case ModelKind::HarmonicReduced: return "harmonic";
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "model1") return ModelKind::Model1;
  if (name == "model2") return ModelKind::Model2;
  if (name == "shifted") return ModelKind::Shifted;
  if (name == "model3") return ModelKind::Model3;
  if (name == "harmonic") return ModelKind::HarmonicReduced;
  if (name.starts_with("custom:") && name.size() > 7) return ModelKind::Custom;
  throw InvalidArgument("unknown model '" + std::string(name) +
                        "' (expected model1|model2|shifted|model3|harmonic|custom:<path>)");
}

PdeCoefficients to_pde_form(const OperatorCoefficients& op) {
  require_finite(op.a, "a");
  require_finite(op.b, "b");
  require_finite(op.c, "c");
  require_finite(op.d, "d");
  return {op.a, op.b, op.c + op.d, op.c};
}

OperatorCoefficients to_operator_form(const PdeCoefficients& pde) {
  return {pde.a, pde.b, pde.d, pde.c - pde.d};
}

DampingRegime classify_damping(double omega0, double lambda) {
  const double disc = omega0 * omega0 - lambda * lambda;
  if (disc > 0.0) return {Regime::Underdamped, std::sqrt(disc)};
  if (disc < 0.0) return {Regime::Overdamped, std::sqrt(-disc)};
  return {Regime::Critical, 0.0};
}

// ---------------------------------------------------------------------------
// CoefficientTable

struct CoefficientTable::Splines {
  std::array<boost::math::interpolators::cardinal_cubic_b_spline<double>, 4> s;
};

CoefficientTable::CoefficientTable(double t0, double dt, std::vector<double> a,
                                   std::vector<double> b, std::vector<double> c,
                                   std::vector<double> d)
    : t0_(t0), dt_(dt), samples_{std::move(a), std::move(b), std::move(c), std::move(d)} {
  require_finite(t0, "t0");
  if (!(dt > 0.0) || !finite(dt)) throw InvalidArgument("table step must be positive");
  const std::size_t n = samples_[0].size();
  if (n < 5) throw InvalidArgument("coefficient table needs at least 5 rows");
  for (const auto& col : samples_) {
    if (col.size() != n) throw InvalidArgument("coefficient columns differ in length");
    for (double v : col) require_finite(v, "coefficient sample");
  }
  for (double v : samples_[0]) {
    if (v == 0.0) throw InvalidArgument("coefficient a must not vanish");
  }
  auto splines = std::make_shared<Splines>();
  for (int k = 0; k < 4; ++k) {
    // Boost's default end slopes are low order; one-sided fourth-order
    // differences keep the ends as accurate as the interior.
    const auto& f = samples_[k];
    const double left = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * dt_);
    const double right = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / (12 * dt_);
    splines->s[k] = boost::math::interpolators::cardinal_cubic_b_spline<double>(f.data(), n, t0_, dt_, left, right);
  }
  splines_ = std::move(splines);
}

namespace {

void check_table_range(const CoefficientTable& table, double t) {
  const double slack = 1e-12 * std::max(1.0, std::abs(table.t_end()));
  if (!(t >= table.t_begin() - slack && t <= table.t_end() + slack)) {
    throw InvalidArgument("t=" + std::to_string(t) + " outside the coefficient table [" +
                          std::to_string(table.t_begin()) + ", " +
                          std::to_string(table.t_end()) + "]");
  }
}

}  // namespace

PdeCoefficients CoefficientTable::value(double t) const {
  check_table_range(*this, t);
  const auto& s = splines_->s;
  return {s[0](t), s[1](t), s[2](t), s[3](t)};
}

PdeCoefficients CoefficientTable::derivative(double t) const {
  check_table_range(*this, t);
  const auto& s = splines_->s;
  return {s[0].prime(t), s[1].prime(t), s[2].prime(t), s[3].prime(t)};
}

CoefficientTable parse_coefficient_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<double> cols[5];
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char ch : line) {
        if (ch != ' ' && ch != '\t') compact += ch;
      }
      if (compact != "t,a,b,c,d") {
        throw InvalidArgument("coefficient CSV: expected header 't,a,b,c,d', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    int k = 0;
    while (std::getline(row, cell, ',')) {
      if (k >= 5) throw InvalidArgument("coefficient CSV line " + std::to_string(line_no) + ": too many columns");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
      if (used == 0 || used != cell.size()) {
        throw InvalidArgument("coefficient CSV line " + std::to_string(line_no) +
                              ": malformed number '" + cell + "'");
      }
      cols[k++].push_back(v);
    }
    if (k != 5) throw InvalidArgument("coefficient CSV line " + std::to_string(line_no) + ": expected 5 columns");
  }
  if (!header_seen) throw InvalidArgument("coefficient CSV: empty input");
  const auto& t = cols[0];
  if (t.size() < 5) throw InvalidArgument("coefficient CSV: need at least 5 rows");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw InvalidArgument("coefficient CSV: t column is not uniform at row " + std::to_string(i + 1));
    }
  }
  return CoefficientTable(t.front(), dt, cols[1], cols[2], cols[3], cols[4]);
}

CoefficientTable load_coefficient_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open coefficient table '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_coefficient_csv(ss.str());
}

// ---------------------------------------------------------------------------
// CoefficientSet

CoefficientSet builtin_model(ModelKind kind, double omega0, double lambda) {
  if (kind == ModelKind::Custom) {
    throw InvalidArgument("builtin_model: custom coefficients need a table");
  }
  require_finite(omega0, "omega0");
  require_finite(lambda, "lambda");
  if (!(omega0 > 0.0)) throw InvalidArgument("omega0 must be > 0");
  if (lambda < 0.0) throw InvalidArgument("lambda must be >= 0");
  return CoefficientSet(kind, omega0, lambda);
}

CoefficientSet momentum_dual(const CoefficientSet& coeffs) {
  switch (coeffs.kind()) {
    case ModelKind::Model1:
      return CoefficientSet(ModelKind::Model2, coeffs.omega0(), -coeffs.lambda());
    case ModelKind::Model2:
      return CoefficientSet(ModelKind::Model1, coeffs.omega0(), -coeffs.lambda());
    default:
      throw InvalidArgument("momentum_dual: defined for model1 and model2 only");
  }
}

CoefficientSet CoefficientSet::custom(CoefficientTable table) {
  CoefficientSet set(ModelKind::Custom, 0.0, 0.0);
  set.table_ = std::make_shared<const CoefficientTable>(std::move(table));
  return set;
}

PdeCoefficients CoefficientSet::at(double t) const {
  const double w0 = omega0_;
  const double l = lambda_;
  switch (kind_) {
    case ModelKind::Model1: return {w0 / 2, w0 / 2, -l, -l};
    case ModelKind::Model2: return {w0 / 2, w0 / 2, -l, 0.0};
    case ModelKind::Shifted: return {w0 / 2, w0 / 2, -l, -l / 2};
    case ModelKind::Model3:
      return {w0 / 2 * std::exp(-2 * l * t), w0 / 2 * std::exp(2 * l * t), 0.0, 0.0};
    case ModelKind::HarmonicReduced:
      return {w0 / 2, (w0 * w0 - l * l) / (2 * w0), 0.0, 0.0};
    case ModelKind::Custom: return table_->value(t);
  }
  return {};
}

PdeCoefficients CoefficientSet::derivative_at(double t) const {
  switch (kind_) {
    case ModelKind::Model3: {
      const PdeCoefficients v = at(t);
      return {-2 * lambda_ * v.a, 2 * lambda_ * v.b, 0.0, 0.0};
    }
    case ModelKind::Custom: return table_->derivative(t);
    default: return {};
  }
}

DampingRegime CoefficientSet::regime() const {
  if (kind_ == ModelKind::Custom) {
    throw InvalidArgument("damping regime is defined for built-in models only");
  }
  return classify_damping(omega0_, lambda_);
}

bool CoefficientSet::autonomous() const {
  return kind_ != ModelKind::Model3 && kind_ != ModelKind::Custom;
}

TauSigma tau_sigma(const CoefficientSet& coeffs, double t) {
  const PdeCoefficients v = coeffs.at(t);
  const PdeCoefficients dv = coeffs.derivative_at(t);
  if (v.a == 0.0 || !finite(v.a)) throw InvalidArgument("tau_sigma: a(t) vanishes");
  const double log_da = dv.a / v.a;
  TauSigma ts;
  ts.tau = log_da - 2 * v.c + 4 * v.d;
  ts.sigma = v.a * v.b - v.c * v.d + v.d * v.d + 0.5 * (v.d * log_da - dv.d);
  if (!finite(ts.tau) || !finite(ts.sigma)) {
    throw InvalidArgument("tau_sigma: coefficients not differentiable at t=" + std::to_string(t));
  }
  return ts;
}

double h_factor(const CoefficientSet& coeffs, double t) {
  if (!(t >= 0.0) || !finite(t)) throw InvalidArgument("h_factor: need finite t >= 0");
  const double l = coeffs.lambda();
  switch (coeffs.kind()) {
    case ModelKind::Model1: return std::exp(-l * t);  // c - 2d = l
    case ModelKind::Model2: return std::exp(l * t);   // c - 2d = -l
    case ModelKind::Shifted:
    case ModelKind::Model3:
    case ModelKind::HarmonicReduced: return 1.0;
    case ModelKind::Custom: break;
  }
  // The interpolant is a cubic between knots, so 4-point Gauss-Legendre per
  // knot interval is exact. (Kronrod error estimates on these pieces are
  // pessimistic and made the adaptive rule crawl.)
  const CoefficientTable& table = *coeffs.table();
  const double t0 = table.t_begin();
  if (t0 > 0.0) throw InvalidArgument("h_factor: coefficient table must start at t <= 0");
  check_table_range(table, t);
  auto integrand = [&](double s) {
    const PdeCoefficients v = table.value(s);
    return v.c - 2 * v.d;
  };
  using Rule = boost::math::quadrature::gauss<double, 4>;
  double total = 0.0;
  double lo = 0.0;
  auto k = static_cast<long>(std::floor((lo - t0) / table.step())) + 1;
  while (lo < t) {
    const double hi = std::min(t, t0 + static_cast<double>(k) * table.step());
    if (hi > lo) total += Rule::integrate(integrand, lo, hi);
    lo = std::max(lo, hi);
    ++k;
  }
  return std::exp(-total);
}

}  // namespace dqo
