#include <cmath>
#include <sstream>

#include <doctest.h>

#include "dqo/errors.hpp"
#include "dqo/models.hpp"
#include "oracles.hpp"

using namespace dqo;
using doctest::Approx;

namespace {

// Samples f on [0, t_end] into CSV text.
std::string table_csv(double t_end, double dt, const std::function<PdeCoefficients(double)>& f) {
  std::ostringstream out;
  out.precision(17);
  out << "t,a,b,c,d\n";
  const int n = static_cast<int>(std::lround(t_end / dt));
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    const auto v = f(t);
    out << t << "," << v.a << "," << v.b << "," << v.c << "," << v.d << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("operator and PDE forms convert both ways") {
  const OperatorCoefficients op{0.5, 0.5, -0.6, 0.0};
  const PdeCoefficients pde = to_pde_form(op);
  CHECK(pde.c == -0.6);
  CHECK(pde.d == -0.6);
  const OperatorCoefficients back = to_operator_form(pde);
  CHECK(back.c == op.c);
  CHECK(back.d == op.d);

  const auto m2 = builtin_model(ModelKind::Model2, 1.0, 0.6).operator_form(0.0);
  CHECK(m2.c == 0.0);
  CHECK(m2.d == Approx(-0.6));
}

TEST_CASE("built-in coefficient sets") {
  const double w0 = 1.3, l = 0.4;
  auto at = [&](ModelKind k, double t) { return builtin_model(k, w0, l).at(t); };
  CHECK(at(ModelKind::Model1, 2.0).c == Approx(-l));
  CHECK(at(ModelKind::Model1, 2.0).d == Approx(-l));
  CHECK(at(ModelKind::Model2, 2.0).d == 0.0);
  CHECK(at(ModelKind::Shifted, 2.0).d == Approx(-l / 2));
  CHECK(at(ModelKind::Model3, 0.7).a == Approx(0.5 * w0 * std::exp(-2 * l * 0.7)));
  CHECK(at(ModelKind::Model3, 0.7).b == Approx(0.5 * w0 * std::exp(2 * l * 0.7)));
  CHECK(at(ModelKind::HarmonicReduced, 0.0).b == Approx((w0 * w0 - l * l) / (2 * w0)));

  CHECK(builtin_model(ModelKind::Model1, w0, l).autonomous());
  CHECK_FALSE(builtin_model(ModelKind::Model3, w0, l).autonomous());

  CHECK_THROWS_AS(builtin_model(ModelKind::Model1, 0.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(builtin_model(ModelKind::Model1, 1.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(builtin_model(ModelKind::Model1, NAN, 0.1), InvalidArgument);
}

TEST_CASE("damping regimes") {
  CHECK(classify_damping(1.0, 0.6).regime == Regime::Underdamped);
  CHECK(classify_damping(1.0, 0.6).omega == Approx(0.8));
  CHECK(classify_damping(1.0, 1.0).regime == Regime::Critical);
  CHECK(classify_damping(0.6, 1.0).regime == Regime::Overdamped);
  CHECK(classify_damping(0.6, 1.0).omega == Approx(0.8));
}

TEST_CASE("model names parse") {
  CHECK(parse_model_kind("model1") == ModelKind::Model1);
  CHECK(parse_model_kind("shifted") == ModelKind::Shifted);
  CHECK(parse_model_kind("harmonic") == ModelKind::HarmonicReduced);
  CHECK(parse_model_kind("custom:/tmp/x.csv") == ModelKind::Custom);
  CHECK_THROWS_AS(parse_model_kind("model9"), InvalidArgument);
}

TEST_CASE("momentum dual swaps model1 and model2 with lambda reversed") {
  const auto dual = momentum_dual(builtin_model(ModelKind::Model1, 1.0, 0.6));
  CHECK(dual.kind() == ModelKind::Model2);
  CHECK(dual.lambda() == Approx(-0.6));
  CHECK(dual.at(0.0).c == Approx(0.6));
  CHECK_THROWS_AS(momentum_dual(builtin_model(ModelKind::Shifted, 1.0, 0.6)), InvalidArgument);
}

TEST_CASE("tau and sigma agree with finite differences of the coefficients") {
  for (ModelKind k : {ModelKind::Model1, ModelKind::Model2, ModelKind::Shifted, ModelKind::Model3}) {
    const auto c = builtin_model(k, 1.1, 0.45);
    for (double t : {0.1, 0.8, 2.5}) {
      const auto ts = tau_sigma(c, t);
      const auto ref = oracle::tau_sigma_fd(c, t);
      CHECK(ts.tau == Approx(ref[0]).epsilon(1e-8));
      CHECK(ts.sigma == Approx(ref[1]).epsilon(1e-8));
    }
  }
  // Model3: tau = -2l, sigma = ab = w0^2/4.
  const auto m3 = tau_sigma(builtin_model(ModelKind::Model3, 2.0, 0.3), 1.7);
  CHECK(m3.tau == Approx(-0.6));
  CHECK(m3.sigma == Approx(1.0));
}

TEST_CASE("h factor: closed forms and tabulated coefficients") {
  CHECK(h_factor(builtin_model(ModelKind::Model1, 1.0, 0.6), 2.0) == Approx(std::exp(-1.2)));
  CHECK(h_factor(builtin_model(ModelKind::Model2, 1.0, 0.6), 2.0) == Approx(std::exp(1.2)));
  CHECK(h_factor(builtin_model(ModelKind::Shifted, 1.0, 0.6), 2.0) == Approx(1.0));

  // c = sin t, d = 0.3 cos t: h = exp(cos t - 1 + 0.6 sin t).
  const auto table = parse_coefficient_csv(
      table_csv(4.0, 0.01, [](double t) { return PdeCoefficients{1.0, 1.0, std::sin(t), 0.3 * std::cos(t)}; }));
  const auto c = CoefficientSet::custom(table);
  for (double t : {0.0, 0.37, 1.5, 3.99}) {
    CHECK(h_factor(c, t) == Approx(std::exp(std::cos(t) - 1.0 + 0.6 * std::sin(t))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(h_factor(c, 4.5), InvalidArgument);
}

TEST_CASE("coefficient tables interpolate smooth data") {
  const auto table = parse_coefficient_csv(table_csv(
      3.0, 0.01, [](double t) { return PdeCoefficients{0.5 * std::exp(-0.4 * t), 0.5 * std::exp(0.4 * t), 0.0, 0.0}; }));
  CHECK(table.size() == 301);
  CHECK(table.value(1.234).a == Approx(0.5 * std::exp(-0.4 * 1.234)).epsilon(1e-10));
  CHECK(table.derivative(1.234).b == Approx(0.2 * std::exp(0.4 * 1.234)).epsilon(1e-7));
}

TEST_CASE("coefficient CSV errors") {
  CHECK_THROWS_AS(parse_coefficient_csv(""), InvalidArgument);
  CHECK_THROWS_AS(parse_coefficient_csv("t,a,b,c\n0,1,1,0\n"), InvalidArgument);
  const std::string rows = "t,a,b,c,d\n0,1,1,0,0\n0.1,1,1,0,0\n0.2,1,1,0,0\n0.3,1,1,0,0\n";
  CHECK_THROWS_AS(parse_coefficient_csv(rows), InvalidArgument);  // 4 rows
  CHECK_NOTHROW(parse_coefficient_csv(rows + "0.4,1,1,0,0\n"));
  CHECK_THROWS_AS(parse_coefficient_csv(rows + "0.45,1,1,0,0\n"), InvalidArgument);  // non-uniform
  try {
    parse_coefficient_csv(rows + "0.4,1,x,0,0\n");
    FAIL("expected a parse error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_coefficient_csv("t,a,b,c,d\n0,0,1,0,0\n0.1,1,1,0,0\n0.2,1,1,0,0\n0.3,1,1,0,0\n0.4,1,1,0,0\n"),
                  InvalidArgument);  // a = 0
}
