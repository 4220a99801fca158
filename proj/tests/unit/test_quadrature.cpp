#include <cmath>

#include "qell/quadrature.hpp"
#include "test_support.hpp"

using namespace qell;
using qtest::rel_err;

TEST_CASE("gauss-legendre panels are exact up to degree 29") {
  const GaussRule& rule = gauss_legendre_rule(15);
  for (long d = 0; d <= 29; ++d) {
    Real s(0);
    for (int i = 0; i < 15; ++i) s += rule.weights[i] * pow(rule.nodes[i], d);
    Real want = d % 2 == 1 ? Real(0) : Real(2) / Real(d + 1);
    CHECK(abs(s - want).to_double() < 1e-30);
  }
}

TEST_CASE("polynomial and log-kernel integrals") {
  QuadratureSpec spec;
  spec.tol = 1e-20;
  EvalResult a = integrate([](const Real& u) { return Complex(u); }, spec);
  CHECK(a.ok());
  CHECK(rel_err(a.value, Complex(0.5)) < 1e-25);

  // int_0^1 (-ln u) u^2 du = 1/9
  auto kernel = [](const Real& u) { return Complex(-log(u) * u * u); };
  EvalResult b = integrate(kernel, spec);
  CHECK(b.ok());
  CHECK(rel_err(b.value, Complex(Real(1) / 9)) < 1e-19);

  QuadratureSpec de = spec;
  de.rule = Rule::double_exponential;
  EvalResult c = integrate(kernel, de);
  CHECK(c.ok());
  CHECK(rel_err(c.value, Complex(Real(1) / 9)) < 1e-19);

  // (-ln u)^2 / 2 weight: int u^{j-1} ... = j^{-3}, j = 2
  EvalResult d = integrate([](const Real& u) { Real l = log(u); return Complex(l * l / 2 * u); }, de);
  CHECK(rel_err(d.value, Complex(Real(1) / 8)) < 1e-19);
}

TEST_CASE("removable singularity uses the limit supplier") {
  QuadratureSpec spec;
  spec.tol = 1e-15;
  Subtraction s;
  s.location = Complex(0.5);
  s.coefficient = Complex(0);
  int limit_calls = 0;
  s.limit = [&] {
    ++limit_calls;
    return Complex(1.0);
  };
  spec.subtractions.push_back(s);
  spec.breakpoints.push_back(Real(0.5));
  spec.parallel = false;
  // (u^2 - 1/4)/(u - 1/2) = u + 1/2, integral 1
  auto f = [](const Real& u) { return Complex((u * u - Real(0.25)) / (u - Real(0.5))); };
  EvalResult r = integrate(f, spec);
  CHECK(r.ok());
  CHECK(rel_err(r.value, Complex(1)) < 1e-20);

  // An abscissa inside the 10 tol window returns the limit, not a quotient.
  Integrand probe = [](const Real& u) { return Complex(exp(u) - exp(Real(0.5))) / (u - Real(0.5)); };
  Complex slope = (exp(Real(0.5) + Real(1e-6)) - exp(Real(0.5) - Real(1e-6))) / Real(2e-6);
  Complex supplied = exp(Complex(0.5));
  CHECK(rel_err(supplied, slope) < 1e-3);
  QuadratureSpec near;
  near.tol = 1e-3;
  Subtraction t;
  t.location = Complex(0.5);
  t.coefficient = Complex(0);
  t.limit = [&] {
    ++limit_calls;
    return supplied;
  };
  near.subtractions.push_back(t);
  near.breakpoints.push_back(Real(0.5));
  near.parallel = false;
  int before = limit_calls;
  EvalResult e = integrate(probe, near);
  CHECK(e.ok());
  CHECK(limit_calls > before);
  CHECK(rel_err(e.value, Complex(0)) < 10);  // finite
}

TEST_CASE("pole subtraction with side") {
  QuadratureSpec spec;
  spec.tol = 1e-20;
  Subtraction s;
  s.location = Complex(0.5);
  s.coefficient = Complex(0.25);
  s.side = Side::below;
  spec.subtractions.push_back(s);
  // u^2/(u - 1/2) = u + 1/2 + (1/4)/(u - 1/2)
  auto f = [](const Real& u) { return Complex(u * u / (u - Real(0.5))); };
  EvalResult below = integrate(f, spec);
  Real pi = Real::pi();
  CHECK(below.ok());
  CHECK(rel_err(below.value, Complex(Real(1), -pi / 4)) < 1e-19);
  spec.subtractions[0].side = Side::above;
  EvalResult above = integrate(f, spec);
  CHECK(rel_err(above.value, Complex(Real(1), pi / 4)) < 1e-19);
  spec.subtractions[0].side = Side::none;
  CHECK(integrate(f, spec).status == Status::domain_error);

  // Off-path location: int_0^1 du / (u - (0.5 + 0.5i)) in closed form.
  QuadratureSpec off;
  off.tol = 1e-20;
  Complex u0(0.5, 0.5);
  auto g = [&](const Real& u) { return 1 / (Complex(u) - u0); };
  EvalResult plain = integrate(g, off);
  Subtraction o;
  o.location = u0;
  o.coefficient = Complex(1);
  off.subtractions.push_back(o);
  EvalResult sub = integrate(g, off);
  Complex want = log(1 - u0) - log(-u0);
  CHECK(rel_err(plain.value, want) < 1e-19);
  CHECK(rel_err(sub.value, want) < 1e-19);
}

TEST_CASE("halving tol never raises the error estimate") {
  auto f = [](const Real& u) { return Complex(sqrt(u) * cos(10 * u)); };
  double last = HUGE_VAL;
  for (double tol = 1e-4; tol > 1e-16; tol /= 2) {
    QuadratureSpec spec;
    spec.tol = tol;
    EvalResult r = integrate(f, spec);
    CHECK(r.err_estimate <= last);
    last = r.err_estimate;
  }
}

TEST_CASE("parallel and serial node evaluation agree") {
  auto f = [](const Real& u) { return Complex(sin(7 * u), log1p(u)); };
  QuadratureSpec a, b;
  a.tol = b.tol = 1e-25;
  b.parallel = false;
  EvalResult x = integrate(f, a), y = integrate(f, b);
  CHECK(x.value == y.value);
}

TEST_CASE("nested integral") {
  QuadratureSpec spec;
  spec.tol = 1e-18;
  EvalResult one = integrate_nested([](const Real&, const Real&) { return Complex(1); }, spec);
  CHECK(rel_err(one.value, Complex(1)) < 1e-18);
  EvalResult quarter = integrate_nested([](const Real& u, const Real&) { return Complex(u); }, spec);
  CHECK(rel_err(quarter.value, Complex(0.25)) < 1e-18);

  // With a pole on the inner path: f = 1/(u - a), a = 0.3, pole below.
  // The inner integral is ln(1 - v/a - i0), so the total is
  // int_0^1 dv/v ln(1 - (v/a + i0)) = -Li_2(1/a + i0).
  QuadratureSpec pole;
  pole.tol = 1e-14;
  Subtraction s;
  s.location = Complex(0.3);
  s.coefficient = Complex(1);
  s.side = Side::below;
  pole.subtractions.push_back(s);
  EvalResult r = integrate_nested([](const Real& u, const Real&) { return 1 / (Complex(u) - Real(0.3)); }, pole);
  CHECK(r.ok());
  // -Li_2(t + i0) = -(pi^2/3 - ln^2 t/2 - Li_2(1/t)) - i pi ln t,  t = 10/3
  Real pi = Real::pi();
  Real t = Real(10) / 3;
  Real lt = log(t);
  // Li_2(0.3) by its series
  Real li(0), p(1);
  for (long k = 1; k < 200; ++k) {
    p *= Real(0.3);
    li += p / Real(k * k);
  }
  Complex want(-(pi * pi / 3 - lt * lt / 2 - li), -pi * lt);
  CHECK(rel_err(r.value, want) < 1e-12);
}

TEST_CASE("contour integral of a gaussian") {
  // int_{-i inf}^{i inf} exp(s^2) ds = i sqrt(pi)
  ContourSpec spec;
  spec.origin = Complex(0);
  spec.height = Real(8);
  spec.tol = 1e-20;
  auto f = [](const Complex& s) { return exp(s * s); };
  EvalResult r = integrate_contour(f, spec);
  CHECK(r.ok());
  CHECK(rel_err(r.value, Complex(Real(0), sqrt(Real::pi()))) < 1e-20);

  ContourSpec wide = spec;
  wide.height = Real(16);
  EvalResult w = integrate_contour(f, wide);
  CHECK(magnitude(w.value - r.value) <= r.err_estimate + 1e-25);

  ContourSpec blocked = spec;
  blocked.poles.push_back(Complex(0.0, 2.0));
  CHECK(integrate_contour(f, blocked).status == Status::near_pole);
}
