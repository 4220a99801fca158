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

PhiParams params(cd a, cd b, cd c, cd q, cd z) { return {cx(a), cx(b), cx(c), cx(q), cx(z)}; }

}  // namespace

TEST_CASE("chm_up") {
  double tol = 1e-20;
  EvalResult zero = chm_up(params(0.9, 0.09, 0.081, 0.9, 0.0), tol);
  CHECK(zero.ok());
  CHECK(zero.value == Complex(1));

  // a1(0) + a2(0) = 1
  PhiParams p = params(0.9, 0.09, 0.081, 0.9, 0.5);
  Complex a1, a2;
  chm_up_coefficients(p, Complex(0), &a1, &a2);
  CHECK(magnitude(a1 + a2 - 1) <= 10 * Real::epsilon().to_double());

  EvalResult up = chm_up(p, tol), ser = phi_series(p, tol);
  CHECK(up.ok());
  CHECK(up.method == Method::chm_up);
  CHECK(rel_err(up.value, ser.value) <= 2 * tol);

  // Outside the disc: against the contiguous route with forced shifts, and
  // against the continuation a little off the positive axis.
  p.z = Complex(1.05 / 0.9);
  EvalResult out = chm_up(p, tol);
  CHECK(out.ok());
  PhiOptions forced;
  forced.min_shifts = 3;
  EvalResult plan = execute_plan(contiguous_shift(p, ShiftTarget::chm, forced, tol), tol, forced);
  CHECK(plan.ok());
  CHECK(rel_err(out.value, plan.value) <= 2 * tol);
  p.z = cx(std::polar(1.05 / 0.9, 0.3));
  EvalResult rot = chm_up(p, tol), cont = analytic_continuation(p, tol);
  CHECK(rot.ok());
  CHECK(cont.ok());
  CHECK(rel_err(rot.value, cont.value) <= 2 * tol);

  CHECK(chm_up(params(0.5, 0.5, 2.0, 0.5, 2.0), tol).status == Status::domain_error);
  PhiParams at_pole = params(0.9, 0.09, 0.081, 0.9, 0.0);
  at_pole.z = 1 / (at_pole.q * at_pole.q);
  EvalResult pole = chm_up(at_pole, tol);
  CHECK(pole.status == Status::near_pole);
  PhiOptions capped;
  capped.max_iter = 3;
  CHECK(chm_up(params(0.9, 0.09, 0.081, 0.9, 3.0), tol, capped).status == Status::no_convergence);
}

TEST_CASE("chm_up reproduces the series on the overlap") {
  std::mt19937_64 rng(33);
  double tol = 1e-15;
  for (int t = 0; t < 100; ++t) {
    cd q = qtest::random_disc(rng, 0.1, 0.95);
    cd c = q * qtest::random_disc(rng, 0.0, 0.9);
    cd a = qtest::random_disc(rng, 0.0, 2.0);
    cd b = qtest::random_disc(rng, 0.0, 2.0);
    cd z = qtest::random_disc(rng, 0.0, 0.9);
    PhiParams p = params(a, b, c, q, z);
    EvalResult up = chm_up(p, tol), ser = phi_series(p, tol);
    REQUIRE(up.ok());
    REQUIRE(ser.ok());
    CHECK(rel_err(up.value, ser.value) <= 2 * tol);

    PhiOptions twice;
    twice.max_iter = 2 * std::max(up.terms_used, 10L);
    EvalResult again = chm_up(p, tol, twice);
    CHECK(magnitude(again.value - up.value) <= up.err_estimate + 1e-30);
  }
}

TEST_CASE("chm_down") {
  double tol = 1e-20;
  EvalResult zero = chm_down(params(1.5, 2.0, 8.0, 2.0, 0.0), tol);
  CHECK(zero.value == Complex(1));

  // |cq/ab| = 16/0.75 so z = 3 is inside the series domain as well.
  PhiParams p = params(cd(0.5, 0.2), 1.5, 8.0, 2.0, 3.0);
  REQUIRE(classify(p).tag == DomainTag::series_ok);
  EvalResult down = chm_down(p, tol), ser = phi_series(p, tol);
  CHECK(down.ok());
  CHECK(down.method == Method::chm_down);
  CHECK(rel_err(down.value, ser.value) <= 2 * tol);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    cd q = 1.0 / qtest::random_disc(rng, 0.2, 0.9);
    cd c = q / qtest::random_disc(rng, 0.1, 0.9);
    PhiParams r = params(qtest::random_disc(rng, 0.2, 2.0), qtest::random_disc(rng, 0.2, 2.0), c, q,
                         qtest::random_disc(rng, 0.5, 30.0));
    EvalResult d = chm_down(r, tol);
    EvalResult u = chm_up(inverted(r), tol);
    REQUIRE(d.ok());
    REQUIRE(u.ok());
    CHECK(rel_err(d.value, u.value) <= 2 * tol);
  }
  CHECK(chm_down(params(0.5, 0.5, 0.5, 0.5, 2.0), tol).status == Status::domain_error);
  // cq - ab z = 0 at the first step
  CHECK(chm_down(params(1.0, 2.0, 4.0, 2.0, 4.0), tol).status == Status::near_pole);
}

TEST_CASE("contiguous relation residual") {
  std::mt19937_64 rng(8);
  double tol = 1e-18;
  for (int t = 0; t < 100; ++t) {
    PhiParams p = params(qtest::random_disc(rng, 0.0, 2.0), qtest::random_disc(rng, 0.0, 2.0),
                         qtest::random_disc(rng, 0.0, 0.9), qtest::random_disc(rng, 0.1, 0.9),
                         qtest::random_disc(rng, 0.0, 0.9));
    ContiguousStep s = contiguous_step(p, 1e-12);
    PhiParams p1 = p, p2 = p;
    p1.c = p.c * p.q;
    p2.c = p.c * p.q * p.q;
    EvalResult f0 = phi_series(p, tol), f1 = phi_series(p1, tol), f2 = phi_series(p2, tol);
    Complex res = f0.value - s.alpha * f1.value - s.beta * f2.value;
    double scale = std::max({1.0, magnitude(f0.value), magnitude(s.alpha * f1.value), magnitude(s.beta * f2.value)});
    CHECK(magnitude(res) <= 2 * tol * scale);
  }
}

TEST_CASE("contiguous plans") {
  double tol = 1e-20;
  PhiParams in = params(0.9, 0.09, 0.081, 0.9, 2.0);
  ContiguousPlan empty = contiguous_shift(in, ShiftTarget::chm, {}, tol);
  CHECK(empty.shifts() == 0);
  CHECK(empty.status == Status::ok);
  EvalResult direct = chm_up(in, tol);
  CHECK(rel_err(execute_plan(empty, tol).value, direct.value) <= 2 * tol);

  // Phi(x, 1/q; q) at y = 1/q: a = q, b = 1 so every leaf terminates at 1.
  Complex q(0.5), x(3);
  Complex y = 1 / q;
  PhiParams probe{q, y * q, y * q * q, q, x * q};
  PhiOptions forced;
  forced.min_shifts = 4;
  ContiguousPlan plan = contiguous_shift(probe, ShiftTarget::chm, forced, tol);
  CHECK(plan.shifts() == 4);
  CHECK(rel_err(evaluate(plan.leaf0, tol).value, Complex(1)) < 1e-30);
  CHECK(rel_err(evaluate(plan.leaf1, tol).value, Complex(1)) < 1e-30);
  CHECK(rel_err(execute_plan(plan, tol).value, Complex(1)) < 1e-19);

  // cq^3 = abz makes the third link's left-hand coefficient vanish.
  PhiParams bad = params(1.0, 1.0, 32.0, 0.5, 4.0);
  ContiguousPlan broken = contiguous_shift(bad, ShiftTarget::chm, {}, tol);
  CHECK(broken.status == Status::near_pole);
  CHECK(broken.failed_step == 2);
  CHECK_THROWS_AS(contiguous_step(params(1.0, 1.0, 1.0, 0.5, 4.0), 1e-12), DomainError);

  PhiOptions tight;
  tight.max_shifts = 2;
  CHECK(contiguous_shift(params(0.3, 0.2, 1e3, 0.5, 2.0), ShiftTarget::chm, tight, tol).status ==
        Status::domain_error);

  // Shifting into the series domain (|q| > 1 needs |z| < |cq/ab|).
  PhiParams big = params(2.0, 3.0, 4.0, 2.0, 5.0);
  ContiguousPlan to_series = contiguous_shift(big, ShiftTarget::series, {}, tol);
  CHECK(to_series.status == Status::ok);
  CHECK(classify(to_series.leaf0).tag == DomainTag::series_ok);
  EvalResult via_series = execute_plan(to_series, tol);
  EvalResult via_chm = evaluate(big, tol);
  CHECK(rel_err(via_series.value, via_chm.value) <= 2 * tol);
}

TEST_CASE("analytic continuation") {
  double tol = 1e-18;
  // |cq/ab| = 0.05 so the series and the continuation overlap on |z| < 1.
  cd a = 2.0, b(0, 3.0), c = 0.5, q = 0.6;
  PhiParams p = params(a, b, c, q, cd(-0.7, 0.2));
  EvalResult cont = analytic_continuation(p, tol), ser = phi_series(p, tol);
  CHECK(cont.ok());
  CHECK(cont.method == Method::continuation);
  CHECK(rel_err(cont.value, ser.value) <= 2 * tol);

  PhiParams swapped = p;
  std::swap(swapped.a, swapped.b);
  CHECK(rel_err(analytic_continuation(swapped, tol).value, cont.value) <= 2 * tol);

  p.z = Complex(-3.0, 1.0);
  EvalResult far = analytic_continuation(p, tol), up = chm_up(p, tol);
  CHECK(far.ok());
  CHECK(up.ok());
  CHECK(rel_err(far.value, up.value) <= 2 * tol);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    PhiParams r = params(qtest::random_disc(rng, 0.5, 2.0), qtest::random_disc(rng, 0.5, 2.0),
                         qtest::random_disc(rng, 0.1, 2.0), qtest::random_disc(rng, 0.2, 0.8),
                         qtest::random_disc(rng, 2.0, 20.0));
    if (!r.q.is_real() && !spiral_ok(r.q, r.z)) continue;
    EvalResult u = analytic_continuation(r, tol);
    std::swap(r.a, r.b);
    EvalResult v = analytic_continuation(r, tol);
    if (u.status == Status::domain_error) continue;
    CHECK(rel_err(u.value, v.value) <= 2 * tol);
  }

  CHECK(analytic_continuation(params(a, b, c, q, 2.0), tol).status == Status::domain_error);
  CHECK(analytic_continuation(params(0.15, 0.25, c, q, -20.0), tol).status == Status::domain_error);
  PhiParams lattice = params(a, b, 0.0, q, -2.0);
  lattice.c = lattice.q * lattice.q;
  CHECK(analytic_continuation(lattice, tol).status == Status::domain_error);
  CHECK(analytic_continuation(params(0.0, b, c, q, -2.0), tol).status == Status::domain_error);
  CHECK(analytic_continuation(params(a, b, c, q, -0.01), tol).status == Status::domain_error);
}

TEST_CASE("barnes contour for ELi_{1;0}") {
  double tol = 1e-15;
  Complex x(0.5), y(0.3), q(0.7);
  EvalResult b = barnes_eli10(x, y, q, tol);
  CHECK(b.ok());
  CHECK(b.method == Method::barnes);
  EvalResult m = mixed_series_eli10(x, y, q, tol);
  Complex want = x * y * q / (1 - y * q) * m.value;
  CHECK(rel_err(b.value, want) <= 2 * tol);

  // Negative and complex x, complex y.
  for (auto [xx, yy] : {std::pair{cd(-1.2), cd(0.5)}, {cd(0.3, 0.9), cd(-0.4, 0.2)}, {cd(1.3), cd(0.2, 0.1)}}) {
    Complex X = cx(xx), Y = cx(yy);
    EvalResult c = barnes_eli10(X, Y, q, tol);
    CHECK(c.ok());
    EvalResult s = mixed_series_eli10(X, Y, q, tol);
    CHECK(rel_err(c.value, X * Y * q / (1 - Y * q) * s.value) <= 2 * tol);
  }

  EvalResult zero = barnes_eli10(x, Complex(0), q, tol);
  CHECK(zero.ok());
  CHECK(zero.value == Complex());
  CHECK(barnes_eli10(Complex(2), y, q, tol).status == Status::domain_error);
  CHECK(barnes_eli10(x, y, Complex(0.5, 0.1), tol).status == Status::domain_error);
}

TEST_CASE("q-shift identities of Phi") {
  double tol = 1e-18;
  ShiftResiduals r = phi_qshift_check(Complex(0.4), Complex(0.1), Complex(0.9), tol);
  CHECK(r.along_x.ok());
  CHECK(magnitude(r.along_x.value) <= 2 * tol);
  CHECK(magnitude(r.along_y.value) <= 2 * tol);

  ShiftResiduals zero = phi_qshift_check(Complex(0), Complex(0.3), Complex(0.6), tol);
  CHECK(zero.along_y.value == Complex());

  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    Complex q = cx(qtest::random_disc(rng, 0.2, 0.9));
    Complex x = cx(qtest::random_disc(rng, 0.1, 3.0));
    Complex y = cx(qtest::random_disc(rng, 0.1, 0.9));
    ShiftResiduals s = phi_qshift_check(x, y, q, tol);
    if (s.along_x.status == Status::near_pole) continue;
    CHECK(magnitude(s.along_x.value) <= 2 * tol * std::max(1.0, s.along_x.err_estimate / tol));
    CHECK(magnitude(s.along_y.value) <= 2 * tol * std::max(1.0, s.along_y.err_estimate / tol));
  }
  CHECK(phi_qshift_check(1 / Complex(0.9), Complex(0.1), Complex(0.9), tol).along_x.status == Status::near_pole);
}

TEST_CASE("dispatcher") {
  double tol = 1e-18;
  PhiParams s = params(0.3, 0.2, 0.1, 0.5, 0.5);
  EvalResult a = evaluate(s, tol), b = phi_series(s, tol);
  CHECK(a.value == b.value);
  CHECK(a.method == Method::series);

  PhiParams chm = params(0.9, 0.09, 0.081, 0.9, 3.0);
  EvalResult direct = evaluate(chm, tol);
  CHECK(direct.method == Method::chm_up);
  PhiOptions forced;
  forced.min_shifts = 2;
  EvalResult shifted = execute_plan(contiguous_shift(chm, ShiftTarget::chm, forced, tol), tol, forced);
  CHECK(rel_err(direct.value, shifted.value) <= 2 * tol);

  PhiParams needs = params(0.3, 0.2, 3.0, 0.5, 2.5);
  EvalResult c = evaluate(needs, tol);
  CHECK(c.ok());
  CHECK(c.method == Method::contiguous_chm);
  // |cq/ab| = 25, so the continuation applies beyond that radius.
  PhiParams wide = params(0.3, 0.2, 3.0, 0.5, cd(-40.0, 2.0));
  EvalResult cont = analytic_continuation(wide, tol), c2 = evaluate(wide, tol);
  CHECK(cont.ok());
  CHECK(c2.ok());
  CHECK(rel_err(c2.value, cont.value) <= 2 * tol);
  PhiOptions deep;
  deep.min_shifts = 10;
  CHECK(execute_plan(contiguous_shift(needs, ShiftTarget::chm, deep, tol), tol, deep).ok());

  CHECK(evaluate(params(0.9, 0.09, 0.081, 0.9, 1 / 0.9 * (1 + 1e-14)), 1e-10).status == Status::near_pole);
  CHECK(evaluate(params(0.3, 0.2, 0.1, 0.0, 0.5), tol).status == Status::domain_error);

  cd qc = std::polar(0.9, 0.5);
  CHECK(evaluate(params(0.3, 0.2, 1e5, qc, 3.0), tol).status == Status::domain_error);
}
