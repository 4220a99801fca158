#include "qell/phi.hpp"

#include <algorithm>
#include <cmath>

#include "qell/series.hpp"
#include "qell/solver.hpp"

namespace qell {

namespace {

double eps_double() { return Real::epsilon().to_double(); }

long term_cap(double tol, double ratio) {
  ratio = std::clamp(ratio, 1e-300, 0.999999);
  double n = std::log(std::max(tol, 1e-300) * 1e-3) / std::log(ratio);
  return static_cast<long>(std::min(4.0e6, std::max(400.0, 4.0 * n + 400.0)));
}

}  // namespace

std::string_view to_string(DomainTag t) {
  switch (t) {
    case DomainTag::series_ok: return "series_ok";
    case DomainTag::chm_up_ok: return "chm_up_ok";
    case DomainTag::chm_down_ok: return "chm_down_ok";
    case DomainTag::needs_contiguous: return "needs_contiguous";
    case DomainTag::needs_continuation: return "needs_continuation";
    case DomainTag::spiral_violation: return "spiral_violation";
  }
  return "?";
}

double pole_guard(const PhiOptions& opt, double tol) {
  return opt.pole_guard > 0.0 ? opt.pole_guard : 10.0 * tol;
}

double pole_distance(const Complex& w, const Complex& q, long n_min) {
  double wm = magnitude(w), qm = magnitude(q);
  if (wm == 0.0 || qm == 0.0) return HUGE_VAL;
  double best = HUGE_VAL;
  auto probe = [&](long n) {
    if (n < n_min) return;
    best = std::min(best, magnitude(1 - w * pow(q, n)));
  };
  double lq = std::log(qm);
  if (std::abs(lq) < 1e-300) {
    probe(n_min);
    return best;
  }
  double center = -std::log(wm) / lq;
  if (!(std::abs(center) < 1e9)) return best;
  long c = static_cast<long>(std::llround(center));
  for (long n = c - 1; n <= c + 1; ++n) probe(n);
  if (c < n_min) probe(n_min);
  return best;
}

bool spiral_ok(const Complex& q, const Complex& z) {
  if (z.is_zero()) return true;
  Complex lq = log(q);
  Real w1 = -lq.real();
  Real w2 = -lq.imag();
  Real lhs = abs(arg(-z) - w2 / w1 * log(abs(z)));
  return lhs < Real::pi();
}

DomainClass classify(const PhiParams& p) {
  if (p.q.is_zero()) throw DomainError("q = 0");
  Real qm = abs(p.q);
  if (qm == Real(1)) throw DomainError("|q| = 1 is outside the supported domain");
  DomainClass d;
  bool inside = qm < Real(1);
  d.c_on_pole = pole_distance(p.c, p.q, 0) == 0.0;
  if (inside) {
    if (abs(p.z) < Real(1)) return d;
    if (abs(p.c / p.q) < Real(1)) {
      d.tag = DomainTag::chm_up_ok;
      return d;
    }
    // Shifts needed to bring |c q^n / q| below 1; past the cap only the
    // continuation is left, and that needs the spiral condition.
    double need = std::log(magnitude(p.c / p.q)) / -std::log(qm.to_double());
    if (need + 1 <= PhiOptions{}.max_shifts) {
      d.tag = DomainTag::needs_contiguous;
    } else {
      d.tag = spiral_ok(p.q, p.z) ? DomainTag::needs_continuation : DomainTag::spiral_violation;
    }
    return d;
  }
  Complex ab = p.a * p.b;
  if (ab.is_zero() || (!p.c.is_zero() && abs(p.z) < abs(p.c * p.q / ab))) return d;
  if (!p.c.is_zero() && abs(p.q / p.c) < Real(1)) {
    d.tag = DomainTag::chm_down_ok;
    return d;
  }
  if (!p.c.is_zero()) {
    d.tag = DomainTag::needs_contiguous;
    return d;
  }
  d.tag = DomainTag::needs_continuation;
  return d;
}

EvalResult phi_series(const PhiParams& p, double tol, const PhiOptions& opt) {
  DomainClass d;
  try {
    d = classify(p);
  } catch (const DomainError& e) {
    return make_error(Status::domain_error, Method::series, e.what());
  }
  if (d.tag != DomainTag::series_ok) {
    return make_error(Status::domain_error, Method::series, "outside the series domain");
  }
  EvalResult r;
  r.method = Method::series;
  double guard = pole_guard(opt, tol);
  bool inside = magnitude(p.q) < 1.0;
  double ratio;
  if (inside) {
    ratio = magnitude(p.z);
  } else {
    Complex cq = p.c * p.q;
    ratio = cq.is_zero() ? 0.0 : magnitude(p.a * p.b * p.z / cq);
  }
  SeriesSum s(tol);
  Complex term(1);
  Complex qn(1);
  double peak = 1.0;
  s.add(term);
  long cap = term_cap(tol, ratio);
  bool done = false;
  for (long n = 0; n < cap; ++n) {
    Complex den = 1 - p.c * qn;
    if (magnitude(den) < guard) {
      r.status = Status::near_pole;
      r.diagnostic = "series denominator (c;q)_n vanishes";
      if (den.is_zero()) {
        r.value = Complex(Real(NAN));
        return finalize(r, tol);
      }
    }
    Complex qn1 = qn * p.q;
    term = term * (1 - p.a * qn) * (1 - p.b * qn) / (den * (1 - qn1)) * p.z;
    qn = std::move(qn1);
    peak = std::max(peak, magnitude(term));
    if (s.add(term)) {
      done = true;
      break;
    }
  }
  r.value = s.value();
  r.terms_used = s.terms();
  r.err_estimate = s.last_increment() + 10 * peak * eps_double();
  if (!done && r.status == Status::ok) {
    r.status = Status::no_convergence;
    r.diagnostic = "series term cap reached";
  }
  return finalize(r, tol);
}

PhiParams inverted(const PhiParams& p) {
  if (p.a.is_zero() || p.b.is_zero() || p.c.is_zero() || p.q.is_zero()) {
    throw DomainError("inversion needs nonzero a, b, c, q");
  }
  return {1 / p.a, 1 / p.b, 1 / p.c, 1 / p.q, p.a * p.b * p.z / (p.c * p.q)};
}

EvalResult phi_big(const Complex& x, const Complex& y, const Complex& q, double tol, const PhiOptions& opt) {
  PhiParams p{q, y * q, y * q * q, q, x * q};
  return evaluate(p, tol, opt);
}

EvalResult eli00(const Complex& x, const Complex& y, const Complex& q, double tol, const PhiOptions& opt) {
  if (x.is_zero() || y.is_zero()) {
    EvalResult r;
    return r;
  }
  double guard = pole_guard(opt, tol);
  // Poles in x: x = q^-n (n >= 1) inside the unit disc, x = q^n (n >= 0)
  // outside it. Poles in y sit at y = q^-n (n >= 1) either way.
  double dx = magnitude(q) < 1.0 ? pole_distance(x, q, 1) : pole_distance(x, 1 / q, 0);
  bool near = dx < guard || pole_distance(y, q, 1) < guard;
  Complex den = 1 - y * q;
  if (den.is_zero()) {
    return make_error(Status::near_pole, Method::series, "pole at y = 1/q");
  }
  EvalResult phi = phi_big(x, y, q, tol / 10, opt);
  EvalResult r = scaled(phi, x * y * q / den);
  if (near && r.status != Status::domain_error) {
    r.status = Status::near_pole;
    if (r.diagnostic.empty()) r.diagnostic = "argument within the pole guard of q^-n";
  }
  return finalize(r, tol);
}

EvalResult eli00_symmetric(const Complex& x, const Complex& y, const Complex& q, double tol,
                           const PhiOptions& opt) {
  if (x.is_zero() || y.is_zero()) return EvalResult{};
  Complex den = 1 - x * q;
  if (den.is_zero()) return make_error(Status::near_pole, Method::series, "pole at x = 1/q");
  PhiParams p{q, x * q, x * q * q, q, y * q};
  EvalResult phi = evaluate(p, tol / 10, opt);
  EvalResult r = scaled(phi, x * y * q / den);
  double guard = pole_guard(opt, tol);
  double dy = magnitude(q) < 1.0 ? pole_distance(y, q, 1) : pole_distance(y, 1 / q, 0);
  if ((pole_distance(x, q, 1) < guard || dy < guard) && r.status != Status::domain_error) {
    r.status = Status::near_pole;
  }
  return finalize(r, tol);
}

EvalResult invert_base(const Complex& x, const Complex& y, const Complex& q, double tol) {
  if (x.is_zero() || y.is_zero() || q.is_zero()) {
    return make_error(Status::domain_error, Method::series, "inversion needs nonzero x, y, q");
  }
  Complex p = 1 / q;
  EvalResult r = eli00(1 / (x * p), y, p, tol / 10);
  return finalize(scaled(r, -1 / y), tol);
}

EvalResult mixed_series_eli10(const Complex& x, const Complex& y, const Complex& q, double tol) {
  if (!(magnitude(q) < 1.0) || !(magnitude(x * q) < 1.0)) {
    return make_error(Status::domain_error, Method::series, "needs |q| < 1 and |xq| < 1");
  }
  EvalResult r;
  r.method = Method::series;
  Complex xq = x * q;
  Complex yq = y * q;
  // term_n = (yq;q)_n/(yq^2;q)_n (1)_n (1)_n/((2)_n n!) (xq)^n
  //        = (1 - yq)/(1 - yq^{n+1}) (xq)^n/(n+1)
  SeriesSum s(tol);
  Complex term(1);
  Complex yqn = yq;  // y q^{n+1}
  s.add(term);
  long cap = term_cap(tol, magnitude(xq));
  bool done = false;
  for (long n = 0; n < cap; ++n) {
    Complex next = yqn * q;
    Complex den = 1 - next;
    if (den.is_zero()) return make_error(Status::near_pole, Method::series, "pole in y");
    term = term * (1 - yqn) / den * Real(n + 1) / Real(n + 2) * xq;
    yqn = std::move(next);
    if (s.add(term)) {
      done = true;
      break;
    }
  }
  r.value = s.value();
  r.terms_used = s.terms();
  r.err_estimate = s.last_increment();
  if (!done) r.status = Status::no_convergence;
  return finalize(r, tol);
}

}  // namespace qell
