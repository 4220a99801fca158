#include "qell/eli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qell/foundation.hpp"
#include "qell/series.hpp"

namespace qell {

namespace {

double eps_double() { return Real::epsilon().to_double(); }

long term_cap(double tol, double ratio) {
  ratio = std::clamp(ratio, 1e-300, 0.999999);
  double n = std::log(std::max(tol, 1e-300) * 1e-3) / std::log(ratio);
  return static_cast<long>(std::min(4.0e6, std::max(400.0, 4.0 * n + 400.0)));
}

// Carries a status out of an integrand.
struct Failure : std::runtime_error {
  Status status;
  Failure(Status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

EvalResult failed(const Failure& f, Method m) { return make_error(f.status, m, f.what()); }

Side flipped(Side s) {
  if (s == Side::above) return Side::below;
  if (s == Side::below) return Side::above;
  return s;
}

// Side of w when the argument moves to x + i0 and dw/dx = d.
Side carried(Side s, const Complex& d) {
  int sign = d.real().sign();
  if (s == Side::none || sign == 0) return Side::none;
  return sign > 0 ? s : flipped(s);
}

// (-ln z)^{n-1} / (n-1)!
Complex kernel_weight(int n, const Complex& z) {
  if (n <= 1) return Complex(1);
  Complex l = -log(z);
  Complex w(1);
  for (int k = 1; k < n; ++k) w = w * l / Real(k);
  return w;
}

bool on_unit_path(const Complex& z) { return z.is_real() && z.real() > Real(0) && z.real() < Real(1); }

bool below_one(const Complex& z) { return magnitude(z) < 1.0; }

Complex q_power(const Complex& q, long k) { return pow(q, k); }

struct Args {
  int n, m;
  Complex x, y, q;
  Side side;
  double tol;
  EliRoute route;
  bool parallel;
};

EvalResult evaluate(const Args& a);

// Li_m at w; Li_0(w) = w / (1 - w).
EvalResult li(int m, const Complex& w, double tol, Side side) {
  if (m == 0) {
    EvalResult r;
    Complex den = 1 - w;
    if (magnitude(den) < 10 * tol) return make_error(Status::near_pole, Method::series, "pole of Li_0");
    r.value = w / den;
    return r;
  }
  return polylog_continued(m, w, tol, side);
}

// sum_j a^j / j^s Li_t(b q^j); needs |a q| < 1.
EvalResult lattice_sum(int s, int t, const Complex& a, const Complex& b, const Complex& q, Side side,
                       double tol) {
  EvalResult r;
  r.method = Method::series;
  SeriesSum sum(tol * 0.1);
  Complex aj(1), qj(1);
  long cap = term_cap(tol, magnitude(a * q));
  bool done = false;
  double err = 0.0;
  for (long j = 1; j <= cap; ++j) {
    aj *= a;
    qj *= q;
    EvalResult l = li(t, b * qj, tol * 0.01, carried(side, qj));
    if (!l.ok() && l.status != Status::no_convergence) {
      l.diagnostic = "term " + std::to_string(j) + ": " + l.diagnostic;
      return l;
    }
    r.status = worst(r.status, l.status);
    Complex w = aj * l.value;
    if (s > 0) w = w / pow(Real(j), static_cast<long>(s));
    err += magnitude(aj) * l.err_estimate;
    if (sum.add(w)) {
      done = true;
      break;
    }
  }
  r.value = sum.value();
  r.terms_used = sum.terms();
  r.err_estimate = sum.last_increment() + err;
  if (!done && r.status == Status::ok) {
    r.status = Status::no_convergence;
    r.diagnostic = "lattice sum did not settle";
  }
  return r;
}

using PointFn = std::function<EvalResult(const Complex&)>;
using ResidueFn = std::function<Complex(long)>;

// int_0^1 dz/z K_n(z) g(z a), where g has simple poles at a = q^-k with
// residues rho(k). Poles close to [0, 1] are subtracted; on the path they
// take their side from the side of a.
EvalResult log_kernel(int n, const Complex& a, const Complex& q, Side side, double tol, bool parallel,
                      const PointFn& g, const ResidueFn& rho) {
  QuadratureSpec spec;
  spec.tol = tol * 0.25;
  spec.parallel = parallel;
  Complex aqk = a;
  for (long k = 1; k <= 400; ++k) {
    aqk *= q;
    if (magnitude(aqk) < 0.25) break;
    Complex loc = 1 / aqk;
    if (magnitude(loc - 1) < std::max(10 * tol, 1e-25)) {
      return make_error(Status::near_pole, Method::quadrature, "argument at a branch point q^-k");
    }
    Subtraction sub;
    sub.location = loc;
    sub.coefficient = kernel_weight(n, loc) / loc * rho(k) / a;
    if (on_unit_path(loc)) {
      sub.side = carried(side, -loc / a);
      if (sub.side == Side::none) {
        return make_error(Status::domain_error, Method::quadrature,
                          "argument on the cut: pole on the integration path needs eps_side");
      }
    } else if (loc.real() > Real(0) && loc.real() < Real(1)) {
      spec.breakpoints.push_back(loc.real());
    }
    spec.subtractions.push_back(std::move(sub));
  }
  Integrand f = [&](const Real& z) {
    Complex zc(z);
    EvalResult v = g(zc * a);
    if (v.status == Status::domain_error || v.status == Status::no_convergence) {
      throw Failure(v.status, v.diagnostic);
    }
    return kernel_weight(n, zc) / zc * v.value;
  };
  try {
    EvalResult r = integrate(f, spec);
    r.method = Method::quadrature;
    return finalize(r, tol);
  } catch (const Failure& e) {
    return failed(e, Method::quadrature);
  }
}

EvalResult kernel_in_x(const Args& a) {
  Args inner = a;
  inner.n = 0;
  inner.tol = a.tol * 1e-2;
  inner.parallel = false;
  inner.route = EliRoute::automatic;
  PointFn g = [inner](const Complex& X) {
    Args b = inner;
    b.x = X;
    return evaluate(b);
  };
  ResidueFn rho = [&a](long k) {
    return -pow(a.y, k) / (pow(Real(k), static_cast<long>(a.m)) * q_power(a.q, k));
  };
  return log_kernel(a.n, a.x, a.q, a.side, a.tol, a.parallel, g, rho);
}

EvalResult kernel_in_y(const Args& a) {
  Args inner = a;
  inner.m = 0;
  inner.tol = a.tol * 1e-2;
  inner.parallel = false;
  inner.route = EliRoute::automatic;
  PointFn g = [inner](const Complex& Y) {
    Args b = inner;
    b.y = Y;
    return evaluate(b);
  };
  ResidueFn rho = [&a](long k) {
    return -pow(a.x, k) / (pow(Real(k), static_cast<long>(a.n)) * q_power(a.q, k));
  };
  return log_kernel(a.m, a.y, a.q, a.side, a.tol, a.parallel, g, rho);
}

// Direct sums that need no continuation of Li.
bool plain_series_ok(const Args& a) {
  bool xin = below_one(a.x * a.q), yin = below_one(a.y * a.q);
  return (xin && (a.m == 0 || yin)) || (yin && (a.n == 0 || xin));
}

EvalResult series_route(const Args& a) {
  // Prefer the sum whose Li factors stay inside the disc; otherwise the
  // continued Li carries the side of its argument.
  bool xin = below_one(a.x * a.q), yin = below_one(a.y * a.q);
  if (xin && (a.m == 0 || yin)) return lattice_sum(a.n, a.m, a.x, a.y, a.q, a.side, a.tol);
  if (yin) return lattice_sum(a.m, a.n, a.y, a.x, a.q, a.side, a.tol);
  if (xin) return lattice_sum(a.n, a.m, a.x, a.y, a.q, a.side, a.tol);
  return make_error(Status::domain_error, Method::series, "series route needs |xq| < 1 or |yq| < 1");
}

EvalResult evaluate(const Args& a) {
  if (a.n < 0 || a.m < 0) return make_error(Status::domain_error, Method::series, "negative index");
  if (a.x.is_zero() || a.y.is_zero()) return EvalResult{};
  if (a.n == 0 && a.m == 0) return eli00(a.x, a.y, a.q, a.tol);
  if (!(magnitude(a.q) < 1.0) || a.q.is_zero()) {
    return make_error(Status::domain_error, Method::series, "ELi_{n;m} with n + m > 0 needs 0 < |q| < 1");
  }
  double guard = 10 * a.tol;
  if (a.m == 0 && pole_distance(a.y, a.q, 1) < guard) {
    return make_error(Status::near_pole, Method::series, "y at a pole q^-k");
  }
  if (a.n == 0 && pole_distance(a.x, a.q, 1) < guard) {
    return make_error(Status::near_pole, Method::series, "x at a pole q^-k");
  }
  bool xin = below_one(a.x * a.q), yin = below_one(a.y * a.q);
  if (a.route == EliRoute::series) return series_route(a);
  if (a.route == EliRoute::automatic && plain_series_ok(a)) return series_route(a);
  if (a.n >= 1 && (a.m == 0 || yin)) return kernel_in_x(a);
  if (a.m >= 1 && (a.n == 0 || xin)) return kernel_in_y(a);
  return kernel_in_y(a);
}

Args args_of(const EliRequest& r) {
  return {r.n, r.m, r.x, r.y, r.q, r.eps_side, r.tol, r.route, r.parallel};
}

bool real_base(const Complex& q) { return q.is_real() && q.real() > Real(0) && q.real() < Real(1); }

// Phi(X, y; q) through the dispatcher.
Complex phi_value(const Complex& X, const Complex& y, const Complex& q, double tol) {
  EvalResult r = phi_big(X, y, q, tol);
  if (r.status == Status::domain_error || r.status == Status::no_convergence) {
    throw Failure(r.status, "Phi: " + r.diagnostic);
  }
  return r.value;
}

// Bracket of the first-region rest at u.
Complex first_bracket(const Complex& x, const Complex& y, const Complex& q, const Real& u, double tol) {
  Complex X = x * q * u;
  Complex p1 = phi_value(X, y, q, tol);
  Complex p2 = phi_value(X * q, y, q, tol);
  Complex yq = y * q;
  Complex f1 = (1 - X * q) * (p1 - yq * p2);
  return (f1 - (1 - yq)) / (1 - X) + yq * p1;
}

std::string check_first_region(const EliRequest& req) {
  if (!real_base(req.q)) return "needs real q in (0, 1)";
  if (!req.x.is_real()) return "needs real x";
  Real q = req.q.real(), x = req.x.real();
  if (!(x > Real(0)) || !(x * q * q < Real(1))) {
    return "x outside (0, 1/q^2); use eli10_decomposed_2 or eli_nm";
  }
  if (x * q == Real(1)) return "x = 1/q is a branch point";
  if (x * q > Real(1) && req.eps_side == Side::none) return "x on the cut needs eps_side";
  return {};
}

Decomposition decomposition_error(Status s, const std::string& why) {
  Decomposition d;
  d.rest = make_error(s, Method::quadrature, why);
  return d;
}

// Shared by the decompositions: prefactor x y q / (1 - yq).
Complex rest_prefactor(const EliRequest& req) { return req.x * req.y * req.q / (1 - req.y * req.q); }

struct SecondRegion {
  Complex x, y, q;
  double tol;
  Complex f21_at_u1, f22_at_u2;

  Complex phi_k(int k, const Real& u) const { return phi_value(x * pow(q, k) * u, y, q, tol); }

  Complex f21(const Complex& p2, const Complex& p3, const Complex& p4) const {
    Complex c2 = (1 + q * (1 + y)) * (q - 1) / q;
    Complex c3 = y * ((1 + q * (q + 1) * (1 + y)) * (q - 1) / (q + 1) + (q * q - 1));
    Complex c4 = (1 + q + q * q) * q * y * y * (q - 1) / (q + 1);
    return c2 * p2 - c3 * p3 + c4 * p4;
  }
  Complex f22(const Complex& p2, const Complex& p3) const { return y * (q - 1) * (p2 / q - y * p3); }

  void prepare() {
    Real u1 = (1 / (x * q)).real(), u2 = (1 / (x * q * q)).real();
    f21_at_u1 = f21(phi_k(2, u1), phi_k(3, u1), phi_k(4, u1));
    f22_at_u2 = f22(phi_k(2, u2), phi_k(3, u2));
  }

  Complex at(const Real& u) const {
    Complex p2 = phi_k(2, u), p3 = phi_k(3, u), p4 = phi_k(4, u);
    Complex xu = x * u;
    Complex r = (q - 1) / (q + 1) / (xu - 1 / pow(q, 3));
    Complex r2 = q * q * (1 + y) * (1 + y) * p2 - y * (r / q + 2 * pow(q, 3) * (1 + y)) * p3 +
                 y * y * (r + pow(q, 4)) * p4;
    return (f21(p2, p3, p4) - f21_at_u1) / (xu - 1 / q) + (f22(p2, p3) - f22_at_u2) / (xu - 1 / (q * q)) + r2;
  }
};

}  // namespace

EvalResult eli_nm(const EliRequest& req) { return finalize(evaluate(args_of(req)), req.tol); }

EvalResult eli_series(const EliRequest& req) {
  Args a = args_of(req);
  a.route = EliRoute::series;
  return finalize(evaluate(a), req.tol);
}

EvalResult Decomposition::total() const {
  EvalResult r = rest;
  if (r.status != Status::domain_error) r.value += cut;
  return r;
}

Decomposition eli_n0_decomposed(const EliRequest& req) {
  if (req.n < 1 || req.m != 0) return decomposition_error(Status::domain_error, "needs n >= 1, m = 0");
  std::string why = check_first_region(req);
  if (!why.empty()) return decomposition_error(Status::domain_error, why);
  Decomposition d;
  Complex xq = req.x * req.q;
  EvalResult li_n = polylog_continued(req.n, xq, req.tol * 0.1, req.eps_side);
  if (li_n.status == Status::domain_error) return decomposition_error(li_n.status, li_n.diagnostic);
  d.cut = req.n == 1 ? -req.y * log1m(xq, req.eps_side) : req.y * li_n.value;

  QuadratureSpec spec;
  spec.tol = req.tol * 0.25;
  spec.parallel = req.parallel;
  Real u0 = (1 / xq).real();
  if (u0 < Real(1)) spec.breakpoints.push_back(u0);
  double inner = req.tol * 1e-3;
  int n = req.n;
  Complex x = req.x, y = req.y, q = req.q;
  Integrand f = [=](const Real& u) { return kernel_weight(n, Complex(u)) * first_bracket(x, y, q, u, inner); };
  try {
    d.rest = scaled(integrate(f, spec), rest_prefactor(req));
  } catch (const Failure& e) {
    d.rest = failed(e, Method::quadrature);
  }
  d.rest = finalize(d.rest, req.tol);
  return d;
}

Decomposition eli10_decomposed(const EliRequest& req) {
  if (req.n != 1 || req.m != 0) return decomposition_error(Status::domain_error, "needs n = 1, m = 0");
  return eli_n0_decomposed(req);
}

Decomposition eli20_decomposed(const EliRequest& req) {
  if (req.n != 2 || req.m != 0) return decomposition_error(Status::domain_error, "needs n = 2, m = 0");
  std::string why = check_first_region(req);
  if (!why.empty()) return decomposition_error(Status::domain_error, why);
  Decomposition d;
  Complex xq = req.x * req.q;
  EvalResult li2 = dilog(xq, req.tol * 0.1, req.eps_side);
  if (li2.status == Status::domain_error) return decomposition_error(li2.status, li2.diagnostic);
  d.cut = req.y * li2.value;

  QuadratureSpec spec;
  spec.tol = req.tol * 0.25;
  spec.parallel = req.parallel;
  Real u0 = (1 / xq).real();
  if (u0 < Real(1)) {
    // Removable point of the bracket: only a panel boundary.
    Subtraction s;
    s.location = Complex(u0);
    spec.subtractions.push_back(s);
  }
  double inner = req.tol * 1e-3;
  Complex x = req.x, y = req.y, q = req.q;
  Integrand2 f = [=](const Real& u, const Real&) { return first_bracket(x, y, q, u, inner); };
  try {
    d.rest = scaled(integrate_nested(f, spec), rest_prefactor(req));
  } catch (const Failure& e) {
    d.rest = failed(e, Method::quadrature);
  }
  d.rest = finalize(d.rest, req.tol);
  return d;
}

Complex eli10_rest2_integrand(const Complex& x, const Complex& y, const Complex& q, const Real& u, double tol) {
  SecondRegion s{x, y, q, tol, {}, {}};
  s.prepare();
  return s.at(u);
}

Decomposition eli10_decomposed_2(const EliRequest& req) {
  if (req.n != 1 || req.m != 0) return decomposition_error(Status::domain_error, "needs n = 1, m = 0");
  if (!real_base(req.q) || !req.x.is_real()) return decomposition_error(Status::domain_error, "needs real x, q");
  Real q = req.q.real(), x = req.x.real();
  if (!(x * q * q > Real(1)) || !(x * q * q * q < Real(1))) {
    return decomposition_error(Status::domain_error, "x outside (1/q^2, 1/q^3); use eli10_decomposed or eli_nm");
  }
  if (req.eps_side == Side::none) return decomposition_error(Status::domain_error, "x on the cut needs eps_side");
  Decomposition d;
  d.cut = -req.y * log1m(req.x * req.q, req.eps_side) -
          req.y * req.y * log1m(req.x * req.q * req.q, req.eps_side);
  QuadratureSpec spec;
  spec.tol = req.tol * 0.25;
  spec.parallel = req.parallel;
  spec.breakpoints = {1 / (x * q), 1 / (x * q * q)};
  try {
    SecondRegion s{req.x, req.y, req.q, req.tol * 1e-3, {}, {}};
    s.prepare();
    Integrand f = [&s](const Real& u) { return s.at(u); };
    d.rest = scaled(integrate(f, spec), rest_prefactor(req));
  } catch (const Failure& e) {
    d.rest = failed(e, Method::quadrature);
  }
  d.rest = finalize(d.rest, req.tol);
  return d;
}

EvalResult eli11(const EliRequest& req) {
  if (req.n != 1 || req.m != 1) return make_error(Status::domain_error, Method::series, "needs n = m = 1");
  if (!req.x.is_zero() && !req.y.is_zero() && !below_one(req.x * req.q) && !below_one(req.y * req.q) &&
      pole_distance(req.x / req.y, req.q, -1000000) < 1e-12) {
    return make_error(Status::domain_error, Method::quadrature, "pole collision: x/y is a power of q");
  }
  return eli_nm(req);
}

Complex eli11_log_part(const EliRequest& req) { return -req.x * log1m(req.y * req.q, req.eps_side); }

Complex residue_x(int n, const Complex& y, const Complex& q, double) {
  if (n < 1) throw DomainError("residue_x needs n >= 1");
  return -pow(y / q, n);
}

EvalResult phi_at_q_power(int k, const Complex& y, const Complex& q, double tol) {
  if (k < 0 || !(magnitude(q) < 1.0)) {
    return make_error(Status::domain_error, Method::series, "needs k >= 0 and |q| < 1");
  }
  EvalResult r;
  Complex ratio = pow(q, k + 1);
  SeriesSum s(tol * 0.1);
  Complex qn(1), yqn = y * q;
  long cap = term_cap(tol, magnitude(ratio));
  bool done = false;
  for (long n = 0; n < cap; ++n) {
    Complex den = 1 - yqn;
    if (magnitude(den) < 10 * tol) return make_error(Status::near_pole, Method::series, "y at a pole");
    if (s.add(qn / den)) {
      done = true;
      break;
    }
    qn *= ratio;
    yqn *= q;
  }
  r.value = (1 - y * q) * s.value();
  r.terms_used = s.terms();
  r.err_estimate = s.last_increment() * magnitude(1 - y * q);
  if (!done) r.status = Status::no_convergence;
  return finalize(r, tol);
}

ResidueChain residue_chain(int n, const Complex& y, const Complex& q, double tol) {
  if (n < 1) throw DomainError("residue_chain needs n >= 1");
  EvalResult p0 = phi_at_q_power(0, y, q, tol * 0.1);
  EvalResult p1 = phi_at_q_power(1, y, q, tol * 0.1);
  if (!p0.ok() || !p1.ok()) throw DomainError("residue chain: " + p0.diagnostic + p1.diagnostic);
  ResidueChain c;
  c.phi_one = p0.value;
  c.phi_q = p1.value;
  // R_n = y^{n-1} [(1 - 1/q) Phi(1) + y (1 - q) Phi(q)]
  c.r = pow(y, n - 1) * ((1 - 1 / q) * c.phi_one + y * (1 - q) * c.phi_q);
  c.residue = pow(q, -static_cast<long>(n)) * y * q / (1 - y * q) * c.r;
  c.err_estimate = p0.err_estimate + p1.err_estimate;
  return c;
}

namespace {

struct DepthPole {
  Complex z;
  Complex residue;  // residue in z of the singular factor
  int factor;
  Side side;
};

struct Factor {
  int n, m;
  Complex x, y;
};

// Roots z of a (z q)^k = 1; the real positive root stays exactly real.
std::vector<Complex> lattice_roots(const Complex& a, const Complex& q, long k) {
  std::vector<Complex> out;
  if (a.is_real() && a.real() > Real(0) && real_base(q)) {
    Real r = pow(a.real(), Real(-1) / Real(k)) / q.real();
    for (long l = 0; l < k; ++l) out.push_back(polar(r, 2 * Real::pi() * Real(l) / Real(k)));
    out[0] = Complex(r);
    return out;
  }
  Complex base = exp(-log(a) / Real(k)) / q;
  for (long l = 0; l < k; ++l) out.push_back(base * e2pii(Complex(Real(l) / Real(k))));
  return out;
}

bool near_path(const Complex& z) {
  double re = z.real().to_double(), im = std::abs(z.imag().to_double());
  return re > -0.5 && re < 1.5 && im < 0.5;
}

}  // namespace

EvalResult eli_depth2(const Depth2Request& req) {
  if (req.sigma < 0 || req.n1 < 0 || req.n2 < 0 || req.m1 < 0 || req.m2 < 0) {
    return make_error(Status::domain_error, Method::quadrature, "negative index");
  }
  if (!(magnitude(req.q) < 1.0) || req.q.is_zero()) {
    return make_error(Status::domain_error, Method::quadrature, "needs 0 < |q| < 1");
  }
  if ((req.x1.is_zero() && req.x2.is_zero()) || req.x1.is_zero() || req.x2.is_zero() || req.y1.is_zero() ||
      req.y2.is_zero()) {
    return EvalResult{};
  }
  Factor fac[2] = {{req.n1, req.m1, req.x1, req.y1}, {req.n2, req.m2, req.x2, req.y2}};
  double inner_tol = req.tol * 1e-2;
  auto factor_at = [&](int i, const Complex& Q, bool parallel) {
    Args a{fac[i].n, fac[i].m, fac[i].x, fac[i].y, Q, req.side, inner_tol, EliRoute::automatic, parallel};
    return evaluate(a);
  };
  if (req.sigma == 0) {
    EvalResult a = factor_at(0, req.q, req.parallel), b = factor_at(1, req.q, req.parallel);
    EvalResult r = a;
    r.value = a.value * b.value;
    r.err_estimate = a.err_estimate * magnitude(b.value) + b.err_estimate * magnitude(a.value);
    r.status = worst(a.status, b.status);
    if (r.diagnostic.empty()) r.diagnostic = b.diagnostic;
    return finalize(r, req.tol);
  }

  // Pole inventory near [0, 1]: a factor with n = 0 has poles where
  // x (zq)^k = 1, one with m = 0 where y (zq)^k = 1. With n >= 1 (m >= 1)
  // those points are branch points and must stay off the path.
  std::vector<DepthPole> poles;
  for (int i = 0; i < 2; ++i) {
    for (int which = 0; which < 2; ++which) {
      const Complex& a = which == 0 ? fac[i].x : fac[i].y;
      const Complex& b = which == 0 ? fac[i].y : fac[i].x;
      int own = which == 0 ? fac[i].n : fac[i].m;
      int other = which == 0 ? fac[i].m : fac[i].n;
      for (long k = 1; k <= 40; ++k) {
        for (const Complex& z0 : lattice_roots(a, req.q, k)) {
          if (!near_path(z0)) continue;
          if (own >= 1) {
            if (z0.is_real() && z0.real() > Real(0) && z0.real() <= Real(1)) {
              return make_error(Status::domain_error, Method::quadrature,
                                "branch point of a factor on the integration path");
            }
            continue;
          }
          DepthPole p;
          p.z = z0;
          p.residue = -pow(b, k) * z0 / pow(Real(k), static_cast<long>(other + 1));
          p.factor = i;
          p.side = carried(req.side, -z0 / (Real(k) * a));
          poles.push_back(p);
        }
      }
    }
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (magnitude(poles[i].z - poles[j].z) < 1e-10) {
        return make_error(Status::domain_error, Method::quadrature, "pole collision in the z integrand");
      }
    }
  }

  QuadratureSpec spec;
  spec.tol = req.tol * 0.25;
  spec.parallel = req.parallel;
  for (const auto& p : poles) {
    if (magnitude(p.z - 1) < 10 * req.tol) {
      return make_error(Status::near_pole, Method::quadrature, "integrand pole at z = 1");
    }
    Subtraction s;
    s.location = p.z;
    EvalResult partner = factor_at(1 - p.factor, p.z * req.q, false);
    if (partner.status == Status::domain_error || partner.status == Status::no_convergence) {
      // A partner that cannot be continued there; leave the pole to the rule.
      if (on_unit_path(p.z)) return partner;
      continue;
    }
    s.coefficient = kernel_weight(req.sigma, p.z) / p.z * p.residue * partner.value;
    if (on_unit_path(p.z)) {
      s.side = p.side;
      if (s.side == Side::none) {
        return make_error(Status::domain_error, Method::quadrature, "pole on the integration path needs a side");
      }
    } else if (p.z.real() > Real(0) && p.z.real() < Real(1)) {
      spec.breakpoints.push_back(p.z.real());
    }
    spec.subtractions.push_back(std::move(s));
  }
  Integrand f = [&](const Real& z) {
    Complex zc(z);
    Complex Q = zc * req.q;
    EvalResult a = factor_at(0, Q, false);
    EvalResult b = factor_at(1, Q, false);
    for (const EvalResult* r : {&a, &b}) {
      if (r->status == Status::domain_error || r->status == Status::no_convergence) {
        throw Failure(r->status, r->diagnostic);
      }
    }
    return kernel_weight(req.sigma, zc) / zc * a.value * b.value;
  };
  try {
    EvalResult r = integrate(f, spec);
    return finalize(r, req.tol);
  } catch (const Failure& e) {
    return failed(e, Method::quadrature);
  }
}

EvalResult e_function(const Complex& x, const Complex& y, const Complex& q, double tol) {
  double xm = magnitude(x), qm = magnitude(q);
  if (!(qm < 1.0) || q.is_zero()) return make_error(Status::domain_error, Method::series, "needs 0 < |q| < 1");
  if (!(xm > 1.0) || !(xm * qm < 1.0)) {
    return make_error(Status::domain_error, Method::series, "needs 1 < |x| < 1/|q|");
  }
  EvalResult r;
  if (y.is_zero()) return r;
  // j >= 0 in powers of x, j < 0 in powers of 1/x. On the cut of the
  // logarithm the principal value is used.
  auto half = [&](const Complex& step_x, const Complex& step_q, long j0) {
    SeriesSum s(tol * 0.1);
    Complex xj = pow(step_x, j0), qj = pow(step_q, j0);
    long cap = term_cap(tol, magnitude(step_x) * 2);
    for (long j = j0; j < cap + j0; ++j) {
      Complex w = 1 - y * qj;
      if (magnitude(w) < 10 * tol) throw Failure(Status::near_pole, "y q^j = 1");
      if (s.add(-xj * log(w)) && j > j0 + 5) break;
      xj *= step_x;
      qj *= step_q;
    }
    return s;
  };
  try {
    SeriesSum pos = half(x, q, 0);
    SeriesSum neg = half(1 / x, 1 / q, 1);
    r.value = pos.value() + neg.value();
    r.terms_used = pos.terms() + neg.terms();
    r.err_estimate = pos.last_increment() + neg.last_increment();
  } catch (const Failure& e) {
    return failed(e, Method::series);
  }
  return finalize(r, tol);
}

EvalResult e2hat(const Complex& x, const Complex& q, double tol, Side side) {
  if (x.is_zero()) return make_error(Status::domain_error, Method::series, "x = 0");
  if (!(magnitude(q) < 1.0) || q.is_zero()) return make_error(Status::domain_error, Method::series, "needs 0 < |q| < 1");
  EvalResult r;
  SeriesSum s(tol * 0.1);
  double err = 0.0;
  Complex qn(1);
  long cap = term_cap(tol, magnitude(q));
  bool done = false;
  for (long n = 0; n < cap; ++n) {
    // d(q^n x)/dx = q^n and d(q^n/x)/dx = -q^n/x^2 set the side of each term.
    Complex term;
    struct Piece {
      Complex w, d;
      int sign;
    };
    std::vector<Piece> pieces{{qn * x, qn, 1}, {-qn * x, -qn, -1}};
    if (n >= 1) {
      Complex d = -qn / (x * x);
      pieces.push_back({qn / x, d, -1});
      pieces.push_back({-qn / x, -d, 1});
    }
    for (const auto& p : pieces) {
      EvalResult v = dilog(p.w, tol * 0.01, carried(side, p.d));
      if (v.status == Status::domain_error) return v;
      err += v.err_estimate;
      term += p.sign > 0 ? v.value : -v.value;
    }
    if (s.add(term) && n > 2) {
      done = true;
      break;
    }
    qn *= q;
  }
  r.value = s.value();
  r.terms_used = s.terms();
  r.err_estimate = s.last_increment() + err;
  if (!done) r.status = Status::no_convergence;
  return finalize(r, tol);
}

EvalResult ek_F(const Complex& xi, const Complex& alpha, const Complex& tau, double tol) {
  if (!(tau.imag() > Real(0))) return make_error(Status::domain_error, Method::series, "needs Im tau > 0");
  Complex z = e2pii(xi), q = e2pii(tau), u = e2pii(alpha);
  double guard = 10 * tol;
  if (magnitude(z - 1) < guard || magnitude(1 - z * q) < guard || magnitude(z - q) < guard) {
    EvalResult r = make_error(Status::near_pole, Method::series, "z at a pole of the explicit factors");
    return r;
  }
  EvalResult a = phi_big(u, z, q, tol * 0.01);
  EvalResult b = phi_big(1 / u, z, 1 / q, tol * 0.01);
  EvalResult r;
  Complex ca = -u * z * q / (1 - z * q);
  Complex cb = z / (u * (z - q));
  Complex two_pi_i(Real(0), 2 * Real::pi());
  r.value = two_pi_i * (z / (z - 1) + ca * a.value + cb * b.value);
  r.err_estimate = 2 * M_PI * (magnitude(ca) * a.err_estimate + magnitude(cb) * b.err_estimate) +
                   10 * eps_double() * magnitude(r.value);
  r.status = worst(a.status, b.status);
  r.method = b.method;
  if (!a.ok()) r.diagnostic = a.diagnostic;
  if (!b.ok() && r.diagnostic.empty()) r.diagnostic = b.diagnostic;
  return finalize(r, tol);
}

}  // namespace qell
