#include <cmath>
#include <complex>
#include <random>

#include "qell/phi.hpp"
#include "qell/solver.hpp"
#include "test_support.hpp"

using namespace qell;
using qtest::cx;
using qtest::rel_err;
using cd = std::complex<double>;

namespace {

// Plain double summation of 2phi1 with a fixed, generous term budget.
cd phi_oracle(cd a, cd b, cd c, cd q, cd z, int terms) {
  cd sum = 1.0, term = 1.0, qn = 1.0;
  for (int n = 0; n < terms; ++n) {
    term *= (1.0 - a * qn) * (1.0 - b * qn) / ((1.0 - c * qn) * (1.0 - qn * q)) * z;
    qn *= q;
    sum += term;
  }
  return sum;
}

// sum_{j,k >= 1} x^j y^k q^{jk}
cd eli00_oracle(cd x, cd y, cd q, int n) {
  cd sum = 0.0, xj = 1.0;
  for (int j = 1; j <= n; ++j) {
    xj *= x;
    cd qj = std::pow(q, j), yk = 1.0, qjk = 1.0;
    for (int k = 1; k <= n; ++k) {
      yk *= y;
      qjk *= qj;
      sum += xj * yk * qjk;
    }
  }
  return sum;
}

PhiParams params(cd a, cd b, cd c, cd q, cd z) { return {cx(a), cx(b), cx(c), cx(q), cx(z)}; }

}  // namespace

TEST_CASE("classify") {
  CHECK(classify(params(0.3, 0.2, 0.1, 0.5, 0.5)).tag == DomainTag::series_ok);
  double y = 0.1, q = 0.9;
  PhiParams fig{cx(q), cx(y * q), cx(y * q * q), cx(q), cx(1.2 * q)};
  CHECK(classify(fig).tag == DomainTag::chm_up_ok);
  CHECK(classify(params(1.5, 2.0, 8.0, 2.0, 1e6)).tag == DomainTag::chm_down_ok);
  CHECK(classify(params(0.3, 0.2, 3.0, 0.5, 2.0)).tag == DomainTag::needs_contiguous);
  CHECK_THROWS_AS(classify(params(0.3, 0.2, 0.1, 0.0, 0.5)), DomainError);

  // |c/q| beyond the shift cap with z off the spiral region.
  cd qc = std::polar(0.9, 0.5);
  PhiParams far = params(0.3, 0.2, 1e5, qc, 3.0);
  CHECK(!spiral_ok(far.q, far.z));
  CHECK(classify(far).tag == DomainTag::spiral_violation);
  // On the spiral centre line arg(-z) = (w2/w1) ln|z|.
  double w1 = -std::log(0.9), w2 = -0.5;
  far.z = cx(-std::polar(std::exp(0.1), w2 / w1 * 0.1));
  CHECK(classify(far).tag == DomainTag::needs_continuation);
  CHECK(classify(params(0.3, 0.2, 1.0, 0.5, 0.2)).c_on_pole);
}

TEST_CASE("phi_series examples") {
  double tol = 1e-20;
  EvalResult zero = phi_series(params(0.3, 0.2, 0.1, 0.5, 0.0), tol);
  CHECK(zero.ok());
  CHECK(zero.value == Complex(1));

  // a = q, b = 1 terminates after the first term.
  double q = 0.6;
  EvalResult term = phi_series(params(q, 1.0, q * q * q, q, 0.7), tol);
  CHECK(rel_err(term.value, Complex(1)) < 1e-30);

  PhiParams p = params(0.9, 0.09, 0.081, 0.9, 0.45);
  EvalResult r = phi_series(p, 1e-14);
  CHECK(r.ok());
  cd want = phi_oracle(0.9, 0.09, 0.081, 0.9, 0.45, 10 * r.terms_used);
  CHECK(rel_err(r.value.to_std(), want) < 2e-14);

  CHECK(phi_series(params(0.3, 0.2, 0.1, 0.5, 1.5), tol).status == Status::domain_error);
  EvalResult pole = phi_series(params(0.3, 0.2, 4.0, 0.5, 0.5), tol);
  CHECK(pole.status == Status::near_pole);
}

TEST_CASE("phi_series error estimate on random draws") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    cd q = qtest::random_disc(rng, 0.05, 0.95);
    cd a = qtest::random_disc(rng, 0.0, 3.0);
    cd b = qtest::random_disc(rng, 0.0, 3.0);
    cd c = qtest::random_disc(rng, 0.0, 0.9);
    cd z = qtest::random_disc(rng, 0.0, 0.9);
    double tol = 1e-12;
    EvalResult r = phi_series(params(a, b, c, q, z), tol);
    REQUIRE(r.ok());
    CHECK(r.err_estimate <= tol * std::max(1.0, magnitude(r.value)));
    cd want = phi_oracle(a, b, c, q, z, 4000);
    CHECK(rel_err(r.value.to_std(), want) < 1e-11);
  }
}

TEST_CASE("phi_big examples") {
  double tol = 1e-20;
  for (double q : {0.3, 0.7, 0.9}) {
    for (double x : {0.5, 1.0, 1.1, 2.5}) {
      EvalResult r = phi_big(Complex(x), 1 / Complex(q), Complex(q), tol);
      CHECK(r.ok());
      CHECK(rel_err(r.value, Complex(1)) < 1e-19);
    }
  }
  CHECK(phi_big(Complex(0), Complex(0.3), Complex(0.7), tol).value == Complex(1));

  Complex y(0.3, 0.2), q(0.7);
  EvalResult one = phi_big(Complex(1), y, q, tol);
  EvalResult shifted = phi_big(q, y, q, tol);
  Complex lhs = one.value - y * q * shifted.value;
  CHECK(rel_err(lhs, (1 - y * q) / (1 - q)) < 1e-19);
}

TEST_CASE("eli00 examples") {
  double tol = 1e-14;
  EvalResult z = eli00(Complex(0), Complex(0.3), Complex(0.7), tol);
  CHECK(z.ok());
  CHECK(z.value == Complex());

  EvalResult r = eli00(Complex(0.5), Complex(0.3), Complex(0.7), tol);
  CHECK(r.ok());
  CHECK(rel_err(r.value.to_std(), eli00_oracle(0.5, 0.3, 0.7, 400)) < 2e-14);

  EvalResult s1 = eli00(Complex(0.4), Complex(0.6), Complex(0.8), tol);
  EvalResult s2 = eli00(Complex(0.6), Complex(0.4), Complex(0.8), tol);
  CHECK(rel_err(s1.value, s2.value) < 2 * tol);

  CHECK(eli00(Complex(1 / 0.7), Complex(0.3), Complex(0.7), tol).status == Status::near_pole);
  CHECK(eli00(Complex(0.3), Complex(1 / 0.49), Complex(0.7), tol).status == Status::near_pole);
}

TEST_CASE("eli00 symmetric forms agree on random series points") {
  std::mt19937_64 rng(5);
  double tol = 1e-15;
  for (int t = 0; t < 50; ++t) {
    Complex q = cx(qtest::random_disc(rng, 0.1, 0.9));
    Complex x = cx(qtest::random_disc(rng, 0.05, 0.95)) / q;
    Complex y = cx(qtest::random_disc(rng, 0.05, 0.95)) / q;
    EvalResult a = eli00(x, y, q, tol), b = eli00_symmetric(x, y, q, tol);
    if (!a.ok() || !b.ok()) continue;
    CHECK(rel_err(a.value, b.value) <= 2 * tol);
  }
}

TEST_CASE("base inversion") {
  double tol = 1e-14;
  EvalResult r = invert_base(Complex(4), Complex(5), Complex(0.5), tol);
  CHECK(r.ok());
  CHECK(rel_err(r.value.to_std(), eli00_oracle(0.25, 0.2, 0.5, 400)) < 2e-14);
  CHECK(invert_base(Complex(0), Complex(5), Complex(0.5), tol).status == Status::domain_error);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    PhiParams p{cx(qtest::random_disc(rng, 0.1, 2)), cx(qtest::random_disc(rng, 0.1, 2)),
                cx(qtest::random_disc(rng, 0.1, 0.9)), cx(qtest::random_disc(rng, 0.1, 0.9)),
                cx(qtest::random_disc(rng, 0.0, 0.9))};
    PhiParams inv = inverted(p);
    CHECK(classify(inv).tag == DomainTag::series_ok);
    EvalResult a = phi_series(p, 1e-20), b = phi_series(inv, 1e-20);
    CHECK(rel_err(a.value, b.value) < 1e-18);
    PhiParams back = inverted(inv);
    for (auto [u, v] : {std::pair{back.a, p.a}, {back.b, p.b}, {back.c, p.c}, {back.q, p.q}, {back.z, p.z}}) {
      CHECK(rel_err(u, v) < 1e-30);
    }
  }
}

TEST_CASE("mixed series for ELi_{1;0}") {
  double tol = 1e-15;
  EvalResult zero = mixed_series_eli10(Complex(0), Complex(0.3), Complex(0.7), tol);
  CHECK(zero.value == Complex(1));

  Complex x(0.5), y(0.3), q(0.7);
  EvalResult m = mixed_series_eli10(x, y, q, tol);
  CHECK(m.ok());
  cd want = 0.0;
  for (int j = 1; j < 400; ++j) {
    double yq = 0.3 * std::pow(0.7, j);
    want += std::pow(0.5, j) / j * yq / (1 - yq);
  }
  Complex eli10 = x * y * q / (1 - y * q) * m.value;
  CHECK(rel_err(eli10.to_std(), want) < 1e-15);
  CHECK(mixed_series_eli10(Complex(2), y, q, tol).status == Status::domain_error);
}

TEST_CASE("real inputs give real values on every route") {
  double tol = 1e-15;
  double q = 0.8;
  for (double x : {-3.0, -0.5, 0.4, 1.0, 1.2}) {
    for (double y : {-2.0, 0.3, 1.1}) {
      EvalResult r = eli00(Complex(x), Complex(y), Complex(q), tol);
      REQUIRE(r.ok());
      CHECK(std::abs(r.value.imag().to_double()) <= 10 * tol);
    }
  }
}

TEST_CASE("eli00 pole set outside the unit disc") {
  // For |q| > 1 the x poles move to x = q^n, n >= 0.
  double tol = 1e-14;
  CHECK(eli00(Complex(1), Complex(0.3), Complex(2), tol).status == Status::near_pole);
  CHECK(eli00(Complex(4), Complex(0.3), Complex(2), tol).status == Status::near_pole);
  CHECK(eli00(Complex(0.125), Complex(0.3), Complex(2), tol).ok());
  CHECK(eli00(Complex(0.2), Complex(0.25), Complex(2), tol).status == Status::near_pole);
}
