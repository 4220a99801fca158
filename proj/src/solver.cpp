#include "qell/solver.hpp"

#include <algorithm>
#include <cmath>

#include "qell/foundation.hpp"
#include "qell/quadrature.hpp"
#include "qell/series.hpp"

namespace qell {

namespace {

double eps_double() { return Real::epsilon().to_double(); }

long default_iterations(double tol, double qm, double zm) {
  // Increments shrink like |z q^n|; ten times the nominal count.
  double lq = std::abs(std::log(qm));
  double n = std::log(std::max(tol, 1e-300) / std::max(1.0, zm)) / -lq;
  return 10 * static_cast<long>(std::ceil(std::max(n, 1.0)));
}

PhiParams with_c(const PhiParams& p, const Complex& c) {
  PhiParams r = p;
  r.c = c;
  return r;
}

// w = q^n for some integer n, within `guard`.
bool on_q_lattice(const Complex& w, const Complex& q, double guard) {
  if (w.is_zero()) return false;
  return pole_distance(1 / w, q, 0) < guard || pole_distance(w, q, 1) < guard;
}

// Both CHM directions share this loop; `step` supplies (a1, a2) at the
// argument reached after n + 1 shifts.
template <class Coeffs>
EvalResult chm_run(const Complex& z, const Complex& shift, double tol, long max_iter, double guard,
                   Method method, Coeffs coeffs) {
  EvalResult r;
  r.method = method;
  if (z.is_zero()) {
    r.value = Complex(1);
    return r;
  }
  Complex a1, a2;
  double den = 0.0;
  coeffs(z, &a1, &a2, &den);
  if (den < guard) {
    r.status = Status::near_pole;
    r.diagnostic = "argument on a pole of the difference equation";
    if (!a1.is_finite() || !a2.is_finite()) return finalize(r, tol);
  }
  ChmState st{a1, a2, 0, z};
  Complex sum = st.A1 + st.A2;
  SeriesSum settle(tol);
  settle.add(sum);
  double peak = std::max(magnitude(st.A1), magnitude(st.A2));
  bool done = false;
  for (; st.n < max_iter; ++st.n) {
    st.z_current *= shift;
    coeffs(st.z_current, &a1, &a2, &den);
    if (den < guard) {
      r.status = Status::near_pole;
      r.diagnostic = "argument on a pole of the difference equation";
    }
    Complex next1 = a1 * st.A1 + st.A2;
    st.A2 = a2 * st.A1;
    st.A1 = std::move(next1);
    Complex next = st.A1 + st.A2;
    peak = std::max(peak, std::max(magnitude(st.A1), magnitude(st.A2)));
    bool settled = settle.add(next - sum);
    sum = std::move(next);
    if (settled) {
      done = true;
      break;
    }
  }
  r.value = sum;
  r.terms_used = st.n + 1;
  r.err_estimate = settle.last_increment() + 10 * peak * eps_double();
  if (!done && r.status == Status::ok) {
    r.status = Status::no_convergence;
    r.diagnostic = "iteration cap reached";
  }
  return finalize(r, tol);
}

EvalResult evaluate_leaf(const PhiParams& p, double tol, const PhiOptions& opt) {
  DomainClass d = classify(p);
  if (d.tag == DomainTag::series_ok) return phi_series(p, tol, opt);
  if (magnitude(p.q) < 1.0) return chm_up(p, tol, opt);
  return chm_down(p, tol, opt);
}

}  // namespace

void chm_up_coefficients(const PhiParams& p, const Complex& z, Complex* a1, Complex* a2) {
  Complex den = p.q * (z - 1);
  *a1 = ((p.a + p.b) * p.q * z - p.c - p.q) / den;
  *a2 = (p.c - p.q * p.a * p.b * z) / den;
}

EvalResult chm_up(const PhiParams& p, double tol, const PhiOptions& opt) {
  if (!(magnitude(p.q) < 1.0) || !(magnitude(p.c / p.q) < 1.0)) {
    return make_error(Status::domain_error, Method::chm_up, "needs |q| < 1 and |c/q| < 1");
  }
  long max_iter = opt.max_iter > 0 ? opt.max_iter : default_iterations(tol, magnitude(p.q), magnitude(p.z));
  auto coeffs = [&p](const Complex& w, Complex* a1, Complex* a2, double* den) {
    *den = magnitude(w - 1);
    chm_up_coefficients(p, w, a1, a2);
  };
  return chm_run(p.z, p.q, tol, max_iter, pole_guard(opt, tol), Method::chm_up, coeffs);
}

EvalResult chm_down(const PhiParams& p, double tol, const PhiOptions& opt) {
  if (!(magnitude(p.q) > 1.0) || p.c.is_zero() || !(magnitude(p.q / p.c) < 1.0)) {
    return make_error(Status::domain_error, Method::chm_down, "needs |q| > 1 and |q/c| < 1");
  }
  long max_iter = opt.max_iter > 0 ? opt.max_iter : default_iterations(tol, magnitude(p.q), magnitude(p.z));
  Complex cq = p.c * p.q;
  Complex ab = p.a * p.b;
  Complex top = (p.c + p.q) * p.q;
  Complex apb = p.a + p.b;
  Complex qq = p.q * p.q;
  double scale = std::max(1.0, magnitude(cq));
  auto coeffs = [&](const Complex& w, Complex* a1, Complex* a2, double* den) {
    Complex d = cq - ab * w;
    *den = magnitude(d) / scale;
    *a1 = (top - apb * w) / d;
    *a2 = (w - qq) / d;
  };
  return chm_run(p.z, 1 / p.q, tol, max_iter, pole_guard(opt, tol), Method::chm_down, coeffs);
}

ContiguousStep contiguous_step(const PhiParams& p, double guard) {
  const Complex &a = p.a, &b = p.b, &c = p.c, &q = p.q, &z = p.z;
  Complex cq = c * q;
  Complex ab = a * b;
  Complex f1 = 1 - cq, f2 = 1 - c, f3 = cq - ab * z;
  if (magnitude(f1) < guard || magnitude(f2) < guard || magnitude(f3) < guard * std::max(1.0, magnitude(cq))) {
    throw DomainError("contiguous relation coefficient vanishes");
  }
  Complex d = q * f1 * f2 * f3;
  ContiguousStep s;
  s.c = c;
  s.alpha = f1 * (q * q * c * f2 + (cq * (a + b) - (1 + q) * ab) * z) / d;
  s.beta = (cq - a) * (cq - b) * z / d;
  return s;
}

ContiguousPlan contiguous_shift(const PhiParams& p, ShiftTarget target, const PhiOptions& opt, double tol) {
  ContiguousPlan plan;
  bool inside = magnitude(p.q) < 1.0;
  auto good = [&](const Complex& c) {
    if (target == ShiftTarget::series) return classify(with_c(p, c)).tag == DomainTag::series_ok;
    if (inside) return magnitude(c / p.q) < 1.0;
    return !c.is_zero() && magnitude(p.q / c) < 1.0;
  };
  std::vector<Complex> chain{p.c};
  long n = 0;
  for (;; ++n) {
    while (static_cast<long>(chain.size()) < n + 2) chain.push_back(chain.back() * p.q);
    if (n >= opt.min_shifts && good(chain[n]) && good(chain[n + 1])) break;
    if (n >= opt.max_shifts) {
      plan.status = Status::domain_error;
      plan.diagnostic = "contiguous shift cap reached";
      return plan;
    }
  }
  double guard = pole_guard(opt, tol);
  for (long k = 0; k < n; ++k) {
    try {
      plan.steps.push_back(contiguous_step(with_c(p, chain[k]), guard));
    } catch (const DomainError& e) {
      plan.status = Status::near_pole;
      plan.failed_step = k;
      plan.diagnostic = std::string(e.what()) + " at shift " + std::to_string(k);
      return plan;
    }
  }
  plan.leaf0 = with_c(p, chain[n]);
  plan.leaf1 = with_c(p, chain[n + 1]);
  return plan;
}

EvalResult execute_plan(const ContiguousPlan& plan, double tol, const PhiOptions& opt) {
  if (plan.status != Status::ok) return make_error(plan.status, Method::contiguous_chm, plan.diagnostic);
  if (plan.steps.empty()) return finalize(evaluate_leaf(plan.leaf0, tol, opt), tol);
  double eps = eps_double();
  auto run = [&](double leaf_tol) {
    EvalResult v0 = evaluate_leaf(plan.leaf0, leaf_tol, opt);
    EvalResult v1 = evaluate_leaf(plan.leaf1, leaf_tol, opt);
    Status st = worst(v0.status, v1.status);
    if (st == Status::domain_error) return make_error(st, Method::contiguous_chm, "leaf evaluation failed");
    // Walk back from the leaves: v_k = alpha_k v_{k+1} + beta_k v_{k+2}.
    Complex next = v0.value, after = v1.value;
    double e_next = v0.err_estimate, e_after = v1.err_estimate;
    for (long k = plan.shifts() - 1; k >= 0; --k) {
      const ContiguousStep& s = plan.steps[k];
      Complex ta = s.alpha * next, tb = s.beta * after;
      Complex v = ta + tb;
      double e = magnitude(s.alpha) * e_next + magnitude(s.beta) * e_after +
                 10 * eps * (magnitude(ta) + magnitude(tb));
      after = std::move(next);
      e_after = e_next;
      next = std::move(v);
      e_next = e;
    }
    EvalResult r;
    r.method = Method::contiguous_chm;
    r.value = next;
    r.err_estimate = e_next;
    r.terms_used = v0.terms_used + v1.terms_used + plan.shifts();
    r.status = st;
    return r;
  };
  double leaf_tol = tol * 1e-2;
  EvalResult r = run(leaf_tol);
  // The chain can amplify leaf errors; tighten the leaves by the observed
  // factor while the working precision allows it.
  for (int retry = 0; retry < 3 && r.status == Status::ok; ++retry) {
    double allowed = tol * std::max(1.0, magnitude(r.value));
    if (r.err_estimate <= allowed) break;
    double next_tol = leaf_tol * 0.5 * allowed / r.err_estimate;
    if (next_tol < 100 * eps) break;
    leaf_tol = next_tol;
    r = run(leaf_tol);
  }
  return finalize(r, tol);
}

EvalResult analytic_continuation(const PhiParams& p, double tol) {
  const Complex &a = p.a, &b = p.b, &c = p.c, &q = p.q, &z = p.z;
  auto fail = [](std::string why) { return make_error(Status::domain_error, Method::continuation, std::move(why)); };
  if (!(magnitude(q) < 1.0)) return fail("continuation needs |q| < 1");
  if (a.is_zero() || b.is_zero() || z.is_zero()) return fail("a, b and z must be nonzero");
  if (z.is_real() && z.real().sign() > 0) return fail("z on the positive real axis");
  if (!spiral_ok(q, z)) return fail("spiral condition violated");
  double guard = 10 * tol;
  if (on_q_lattice(a / b, q, guard)) return fail("a/b is an integer power of q");
  if (on_q_lattice(c, q, guard)) return fail("c is an integer power of q");
  if (!(abs(z) > abs(c * q / (a * b)))) return fail("|z| below the continuation radius");

  double sub = tol * 1e-2;
  auto qp = [&](const Complex& w) { return qpoch_infinite(w, q, sub); };
  Complex w = c * q / (a * b * z);
  EvalResult pc = qp(c), pz = qp(z), pqz = qp(q / z);
  auto term = [&](const Complex& u, const Complex& v) {
    // u plays the role of a, v of b.
    EvalResult n1 = qp(v), n2 = qp(c / u), n3 = qp(u * z), n4 = qp(q / (u * z)), d2 = qp(v / u);
    EvalResult series = phi_series(PhiParams{u, u * q / c, u * q / v, q, w}, sub);
    EvalResult all[] = {n1, n2, n3, n4, d2, pc, pz, pqz, series};
    EvalResult r;
    r.method = Method::continuation;
    Complex num = n1.value * n2.value * n3.value * n4.value;
    Complex den = pc.value * d2.value * pz.value * pqz.value;
    r.value = num / den * series.value;
    double rel = 0.0;
    for (const auto& x : all) {
      r.status = worst(r.status, x.status);
      rel += x.err_estimate / std::max(magnitude(x.value), 1e-300);
      r.terms_used += x.terms_used;
    }
    r.err_estimate = rel * magnitude(r.value);
    return r;
  };
  EvalResult r = sum(term(a, b), term(b, a));
  r.method = Method::continuation;
  return finalize(r, tol);
}

EvalResult barnes_eli10(const Complex& x, const Complex& y, const Complex& q, double tol) {
  auto fail = [](Status s, std::string why) { return make_error(s, Method::barnes, std::move(why)); };
  if (!q.is_real() || !(q.real() > Real(0)) || !(q.real() < Real(1))) return fail(Status::domain_error, "needs 0 < q < 1");
  Complex xq = x * q;
  if (!(magnitude(xq) < 1.0)) return fail(Status::domain_error, "needs |xq| < 1");
  if (y.is_zero() || x.is_zero()) {
    EvalResult zero;
    zero.method = Method::barnes;
    return zero;
  }
  Real omega = -log(q.real());
  Complex lx = log(-xq);  // arg in (-pi, pi]; a positive x sits at +pi
  double theta = lx.imag().to_double();
  double L = -lx.real().to_double();
  // Poles of 1/(1 - y q^{s+1}) sit at Re s = -1 + ln|y|/omega, left of the
  // path; the path starts halfway between the rightmost of them and s = 0.
  double y_re = -1.0 + std::log(magnitude(y)) / omega.to_double();
  double left = std::max(-1.0, y_re);
  if (!(left < 0.0)) return fail(Status::domain_error, "pole of the y factor right of s = 0");
  double origin = left / 2;
  // Tilt the rays into Re s > origin so that |xq|^s supplies the decay the
  // sine factor cannot give when arg(-xq) is close to pi.
  double kappa = std::min(50.0, std::max(0.0, 1.0 - (M_PI - std::abs(theta))) / L);
  double rate = std::min(M_PI - std::abs(theta) + kappa * L, M_PI + std::abs(theta) + kappa * L);
  double height = (std::log(1.0 / tol) + 10.0) / rate;

  ContourSpec spec;
  spec.origin = Complex(origin);
  spec.tilt = Real(kappa);
  spec.height = Real(height);
  spec.tol = tol * 0.1 / std::max(1.0, magnitude(x * y * q));
  spec.poles = {Complex(0), Complex(-1)};
  Real two_pi = 2 * Real::pi();
  Real ly = log(abs(y)) / omega;
  Real ay = arg(y) / omega;
  for (long m = -20; m <= 20; ++m) spec.poles.push_back(Complex(-1 + ly, ay + m * two_pi / omega));
  Real pi = Real::pi();
  Complex lq(log(q.real()));
  auto f = [&](const Complex& s) {
    Complex sine = sin(pi * s);
    return pi / sine * exp(s * lx) / (s + 1) / (1 - y * exp((s + 1) * lq));
  };
  EvalResult r = integrate_contour(f, spec);
  r.method = Method::barnes;
  if (r.status == Status::domain_error) return r;
  // -xyq/(2 pi i) = xyq i / (2 pi)
  Complex pre = x * y * q * Complex::i() / two_pi;
  return finalize(scaled(r, pre), tol);
}

ShiftResiduals phi_qshift_check(const Complex& x, const Complex& y, const Complex& q, double tol) {
  ShiftResiduals out;
  double sub = tol * 0.1;
  double guard = 10 * tol;
  Complex d1 = 1 - q * x;
  Complex d2 = 1 - q * q * y;
  EvalResult f = phi_big(x, y, q, sub);
  EvalResult fx1 = phi_big(x * q, y, q, sub);
  EvalResult fx2 = phi_big(x * q * q, y, q, sub);
  EvalResult fy = phi_big(x, y * q, q, sub);
  if (magnitude(d1) < guard) {
    out.along_x = make_error(Status::near_pole, Method::series, "1 - qx vanishes");
  } else {
    Complex ratio = (1 - q * q * x) / d1;
    EvalResult r = sum(f, scaled(fx1, -(ratio + q * y)));
    r = sum(r, scaled(fx2, q * y * ratio));
    out.along_x = r;
  }
  if (magnitude(d2) < guard) {
    out.along_y = make_error(Status::near_pole, Method::series, "1 - q^2 y vanishes");
  } else {
    EvalResult r = sum(f, scaled(fy, -(x * q * (1 - q * y) / d2)));
    r.value -= Complex(1);
    out.along_y = r;
  }
  return out;
}

EvalResult evaluate(const PhiParams& p, double tol, const PhiOptions& opt) {
  DomainClass d;
  try {
    d = classify(p);
  } catch (const DomainError& e) {
    return make_error(Status::domain_error, Method::series, e.what());
  }
  double guard = pole_guard(opt, tol);
  bool inside = magnitude(p.q) < 1.0;
  // Simple poles of the continuation at z = q^-n (n >= 0), and the mirrored
  // set for |q| > 1.
  double dist = HUGE_VAL;
  if (inside) {
    dist = pole_distance(p.z, p.q, 0);
  } else if (!(p.a * p.b).is_zero() && !p.c.is_zero()) {
    dist = pole_distance(p.z * p.a * p.b / (p.c * p.q), 1 / p.q, 0);
  }
  bool near = dist < guard || d.c_on_pole;

  EvalResult r;
  switch (d.tag) {
    case DomainTag::series_ok:
      // Close to |z| = 1 the series needs ~1/(1-|z|) terms while the upward
      // iteration still converges like |q|^n.
      if (inside && magnitude(p.z) > std::max(0.75, magnitude(p.q)) && magnitude(p.c / p.q) < 1.0) {
        r = chm_up(p, tol, opt);
      } else {
        r = phi_series(p, tol, opt);
      }
      break;
    case DomainTag::chm_up_ok:
      r = chm_up(p, tol, opt);
      break;
    case DomainTag::chm_down_ok:
      r = chm_down(p, tol, opt);
      break;
    case DomainTag::needs_contiguous: {
      ContiguousPlan plan = contiguous_shift(p, ShiftTarget::chm, opt, tol);
      r = execute_plan(plan, tol, opt);
      if (r.status == Status::domain_error || (plan.status != Status::ok && !near)) {
        EvalResult alt = analytic_continuation(p, tol);
        if (alt.status != Status::domain_error) {
          r = alt;
        } else {
          r.diagnostic += "; continuation: " + alt.diagnostic;
        }
      }
      break;
    }
    case DomainTag::needs_continuation:
      r = analytic_continuation(p, tol);
      break;
    case DomainTag::spiral_violation:
      r = make_error(Status::domain_error, Method::continuation, "spiral condition violated");
      break;
  }
  if (near && r.status != Status::domain_error) {
    r.status = Status::near_pole;
    if (r.diagnostic.empty()) r.diagnostic = "z within the pole guard of q^-n";
  }
  if (near && r.status == Status::domain_error) {
    r.status = Status::near_pole;
  }
  return finalize(r, tol);
}

}  // namespace qell
