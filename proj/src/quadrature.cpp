#include "qell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <utility>

#ifdef QELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace qell {

namespace {

constexpr int kPanelPoints = 15;

double target(double tol, const Complex& v) { return tol * std::max(1.0, magnitude(v)); }

// int_lo^hi du / (u - u0); a location on the path takes the i0 from `side`.
Complex pole_integral(const Complex& u0, const Real& lo, const Real& hi, Side side) {
  if (u0.is_real() && u0.real() >= lo && u0.real() <= hi) {
    const Real& x = u0.real();
    if (x == lo || x == hi) throw DomainError("subtraction location at an interval end");
    if (side == Side::none) throw DomainError("pole on the integration path without a side");
    Real pi = Real::pi();
    return Complex(log((hi - x) / (x - lo)), side == Side::below ? -pi : pi);
  }
  Complex a = Complex(hi) - u0;
  Complex b = Complex(lo) - u0;
  // The segment subtends less than pi at u0, so the principal argument of
  // the ratio is the angle swept.
  return Complex(log(abs(a)) - log(abs(b)), arg(a / b));
}

Integrand subtracted(const Integrand& f, const std::vector<Subtraction>& subs, double tol) {
  return [&f, &subs, tol](const Real& u) {
    for (const auto& s : subs) {
      if (s.limit && magnitude(Complex(u) - s.location) < 10 * tol) return s.limit();
    }
    Complex v = f(u);
    for (const auto& s : subs) {
      if (!s.coefficient.is_zero()) v -= s.coefficient / (Complex(u) - s.location);
    }
    return v;
  };
}

std::vector<Real> interval_cuts(const Real& lo, const Real& hi, const QuadratureSpec& spec) {
  std::vector<Real> cuts{lo};
  std::vector<Real> inner;
  for (const auto& s : spec.subtractions) {
    if (s.location.is_real() && s.location.real() > lo && s.location.real() < hi) {
      inner.push_back(s.location.real());
    }
  }
  for (const auto& b : spec.breakpoints) {
    if (b > lo && b < hi) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end(), [](const Real& a, const Real& b) { return a < b; });
  for (auto& b : inner) {
    if (!(b == cuts.back())) cuts.push_back(b);
  }
  cuts.push_back(hi);
  return cuts;
}

struct Panel {
  Real a, b;
  Complex left, right;  // rule on each half
  Complex value;        // left + right
  double err = 0.0;     // |whole - (left + right)|
  int depth = 0;
};

void push_rule_points(const Real& a, const Real& b, const GaussRule& rule, std::vector<Real>& pts) {
  Real mid = (a + b) / 2, half = (b - a) / 2;
  for (int i = 0; i < kPanelPoints; ++i) pts.push_back(mid + half * rule.nodes[i]);
}

Complex rule_sum(const Real& a, const Real& b, const GaussRule& rule, const Complex* vals) {
  Complex s;
  for (int i = 0; i < kPanelPoints; ++i) s += rule.weights[i] * vals[i];
  return s * ((b - a) / 2);
}

EvalResult adaptive_gauss(const Integrand& h, const std::vector<Real>& cuts, const QuadratureSpec& spec) {
  const GaussRule& rule = gauss_legendre_rule(kPanelPoints);
  std::vector<Panel> active, frozen;
  long evaluations = 0;

  {
    std::vector<Real> pts;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Real m = (cuts[i] + cuts[i + 1]) / 2;
      push_rule_points(cuts[i], cuts[i + 1], rule, pts);
      push_rule_points(cuts[i], m, rule, pts);
      push_rule_points(m, cuts[i + 1], rule, pts);
    }
    std::vector<Complex> vals = evaluate_points(h, pts, spec.parallel);
    evaluations += static_cast<long>(pts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const Complex* v = vals.data() + 3 * kPanelPoints * i;
      Real m = (cuts[i] + cuts[i + 1]) / 2;
      Panel p;
      p.a = cuts[i];
      p.b = cuts[i + 1];
      Complex whole = rule_sum(p.a, p.b, rule, v);
      p.left = rule_sum(p.a, m, rule, v + kPanelPoints);
      p.right = rule_sum(m, p.b, rule, v + 2 * kPanelPoints);
      p.value = p.left + p.right;
      p.err = magnitude(whole - p.value);
      active.push_back(std::move(p));
    }
  }

  auto totals = [&]() {
    Complex v;
    double e = 0.0;
    for (const auto& p : active) {
      v += p.value;
      e += p.err;
    }
    for (const auto& p : frozen) {
      v += p.value;
      e += p.err;
    }
    return std::make_pair(v, e);
  };

  auto [total, err] = totals();
  Complex best_value = total;
  double best_err = err;
  while (err > target(spec.tol, total) && !active.empty() &&
         static_cast<long>(active.size() + frozen.size()) < spec.max_panels) {
    auto it = std::max_element(active.begin(), active.end(),
                               [](const Panel& x, const Panel& y) { return x.err < y.err; });
    Panel p = std::move(*it);
    active.erase(it);
    if (p.depth >= spec.max_depth) {
      frozen.push_back(std::move(p));
      continue;
    }
    Real m = (p.a + p.b) / 2;
    Real m1 = (p.a + m) / 2, m2 = (m + p.b) / 2;
    std::vector<Real> pts;
    push_rule_points(p.a, m1, rule, pts);
    push_rule_points(m1, m, rule, pts);
    push_rule_points(m, m2, rule, pts);
    push_rule_points(m2, p.b, rule, pts);
    std::vector<Complex> vals = evaluate_points(h, pts, spec.parallel);
    evaluations += static_cast<long>(pts.size());
    Panel c1, c2;
    c1.a = p.a;
    c1.b = m;
    c1.left = rule_sum(p.a, m1, rule, vals.data());
    c1.right = rule_sum(m1, m, rule, vals.data() + kPanelPoints);
    c1.value = c1.left + c1.right;
    c1.err = magnitude(p.left - c1.value);
    c2.a = m;
    c2.b = p.b;
    c2.left = rule_sum(m, m2, rule, vals.data() + 2 * kPanelPoints);
    c2.right = rule_sum(m2, p.b, rule, vals.data() + 3 * kPanelPoints);
    c2.value = c2.left + c2.right;
    c2.err = magnitude(p.right - c2.value);
    c1.depth = c2.depth = p.depth + 1;
    total += c1.value + c2.value - p.value;
    err += c1.err + c2.err - p.err;
    active.push_back(std::move(c1));
    active.push_back(std::move(c2));
    if (active.size() % 64 == 0) std::tie(total, err) = totals();
    if (err < best_err) {
      best_err = err;
      best_value = total;
    }
  }
  std::tie(total, err) = totals();
  if (err < best_err) {
    best_err = err;
    best_value = total;
  }
  EvalResult r;
  r.method = Method::quadrature;
  r.value = best_value;
  r.err_estimate = std::max(0.0, best_err);
  r.terms_used = evaluations;
  if (r.err_estimate > target(spec.tol, r.value)) {
    r.status = Status::no_convergence;
    r.diagnostic = "quadrature error above tolerance";
  }
  return r;
}

// Tanh-sinh on [lo, hi]; the abscissae near each end are formed from that end
// so that endpoint singularities are sampled without cancellation.
EvalResult tanh_sinh(const Integrand& h, const Real& lo, const Real& hi, const QuadratureSpec& spec) {
  const double half_pi = 1.5707963267948966;
  double eps = Real::epsilon().to_double();
  // log of the weight drops double exponentially; stop when it is negligible.
  double t_max = 0.0;
  for (double t = 0.0; t < 8.0; t += 0.01) {
    double u = half_pi * std::sinh(t);
    double logw = std::log(half_pi * std::cosh(t)) - 2.0 * std::log(std::cosh(u));
    t_max = t;
    if (logw < std::log(eps) - 12.0) break;
  }
  Real len = hi - lo;
  Real mid = (lo + hi) / 2;
  Real pi = Real::pi();
  auto node = [&](const Real& t, Real* x, Real* w) {
    Real u = pi / 2 * sinh(abs(t));
    Real c = 1 / (1 + exp(2 * u));  // distance to the nearer end, in units of len
    *w = len * pi * cosh(t) * c * (1 - c);
    if (t.sign() < 0) {
      *x = lo + len * c;
    } else if (t.sign() > 0) {
      *x = hi - len * c;
    } else {
      *x = mid;
    }
  };

  Complex sum;
  Complex estimate, previous;
  double err = 0.0;
  long evaluations = 0;
  const int max_level = 12;
  EvalResult r;
  r.method = Method::quadrature;
  for (int level = 0; level <= max_level; ++level) {
    Real step = ldexp(Real(1), -level);
    long kmax = static_cast<long>(std::ceil(t_max * std::ldexp(1.0, level)));
    std::vector<Real> pts, wts;
    for (long k = -kmax; k <= kmax; ++k) {
      if (level > 0 && k % 2 == 0) continue;
      Real x, w;
      node(Real(k) * step, &x, &w);
      if (!(x > lo) || !(x < hi)) continue;
      pts.push_back(x);
      wts.push_back(w);
    }
    std::vector<Complex> vals = evaluate_points(h, pts, spec.parallel);
    evaluations += static_cast<long>(pts.size());
    for (std::size_t i = 0; i < vals.size(); ++i) sum += wts[i] * vals[i];
    previous = estimate;
    estimate = sum * step;
    if (level >= 3) {
      err = magnitude(estimate - previous);
      if (err < target(spec.tol, estimate)) break;
    }
  }
  r.value = estimate;
  r.err_estimate = err;
  r.terms_used = evaluations;
  if (err > target(spec.tol, estimate)) {
    r.status = Status::no_convergence;
    r.diagnostic = "double-exponential levels exhausted";
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre_rule(int points) {
  thread_local std::map<std::pair<int, mpfr_prec_t>, GaussRule> cache;
  auto key = std::make_pair(points, WorkingPrecision::bits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  Real pi = Real::pi();
  Real tiny = Real::epsilon() * 16;
  for (int i = 1; i <= points; ++i) {
    Real x = cos(pi * (Real(i) - Real(0.25)) / (Real(points) + Real(0.5)));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0(1), p1 = x;
      for (int k = 2; k <= points; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = points * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < tiny) break;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(2 / ((1 - x * x) * dp * dp));
  }
  return cache.emplace(key, std::move(rule)).first->second;
}

std::vector<Complex> evaluate_points(const Integrand& f, const std::vector<Real>& points, bool parallel) {
  const long n = static_cast<long>(points.size());
  std::vector<Complex> out(points.size());
  if (!parallel || n < 2) {
    for (long i = 0; i < n; ++i) out[i] = f(points[i]);
    return out;
  }
  const int digits = WorkingPrecision::digits();
  std::exception_ptr failure;
  std::mutex guard;
#ifdef QELL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) {
    PrecisionScope scope(digits);
    try {
      out[i] = f(points[i]);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

EvalResult integrate(const Integrand& f, const Real& lo, const Real& hi, const QuadratureSpec& spec) {
  try {
    Integrand h = spec.subtractions.empty() ? f : subtracted(f, spec.subtractions, spec.tol);
    std::vector<Real> cuts = interval_cuts(lo, hi, spec);
    EvalResult r;
    if (spec.rule == Rule::double_exponential) {
      r.method = Method::quadrature;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        EvalResult piece = tanh_sinh(h, cuts[i], cuts[i + 1], spec);
        r = i == 0 ? piece : sum(r, piece);
      }
    } else {
      r = adaptive_gauss(h, cuts, spec);
    }
    for (const auto& s : spec.subtractions) {
      if (s.coefficient.is_zero()) continue;
      r.value += s.coefficient * pole_integral(s.location, lo, hi, s.side);
    }
    return finalize(r, spec.tol);
  } catch (const std::exception& e) {
    return make_error(Status::domain_error, Method::quadrature, e.what());
  }
}

EvalResult integrate(const Integrand& f, const QuadratureSpec& spec) {
  return integrate(f, Real(0), Real(1), spec);
}

EvalResult integrate_nested(const Integrand2& f, const QuadratureSpec& spec) {
  std::mutex guard;
  Status inner_status = Status::ok;
  double inner_err = 0.0;
  std::string inner_diag;

  QuadratureSpec outer = spec;
  outer.subtractions.clear();
  for (const auto& s : spec.subtractions) {
    if (s.location.is_real()) outer.breakpoints.push_back(s.location.real());
  }

  Integrand g = [&](const Real& v) -> Complex {
    if (v.is_zero()) return f(Real(0), Real(0));
    QuadratureSpec inner = spec;
    inner.tol = spec.tol * 0.1;
    inner.parallel = false;
    inner.breakpoints.clear();
    inner.subtractions.clear();
    // Pole c/(u - u0) becomes (c/v)/(t - u0/v) in t = u/v.
    for (const auto& s : spec.subtractions) {
      Subtraction t = s;
      t.location = s.location / v;
      t.coefficient = s.coefficient / v;
      inner.subtractions.push_back(std::move(t));
    }
    Integrand fu = [&f, &v](const Real& t) { return f(v * t, v); };
    EvalResult r = integrate(fu, inner);
    {
      std::lock_guard<std::mutex> lock(guard);
      inner_status = worst(inner_status, r.status);
      inner_err = std::max(inner_err, r.err_estimate);
      if (!r.ok() && inner_diag.empty()) inner_diag = r.diagnostic;
    }
    if (r.status == Status::domain_error) throw DomainError(r.diagnostic);
    return r.value;
  };
  EvalResult r = integrate(g, outer);
  if (r.status == Status::domain_error) return r;
  r.err_estimate += inner_err;
  r.status = worst(r.status, inner_status);
  if (r.diagnostic.empty()) r.diagnostic = inner_diag;
  return finalize(r, spec.tol);
}

EvalResult integrate_contour(const std::function<Complex(const Complex&)>& f, const ContourSpec& spec) {
  Complex up(spec.tilt, Real(1));
  Complex down(spec.tilt, Real(-1));
  for (const auto& p : spec.poles) {
    for (const Complex& d : {up, down}) {
      Complex rel = p - spec.origin;
      Real t = (rel.real() * d.real() + rel.imag() * d.imag()) / norm(d);
      if (t.sign() < 0) t = Real(0);
      if (t > spec.height) t = spec.height;
      if (magnitude(rel - t * d) < spec.clearance) {
        return make_error(Status::near_pole, Method::quadrature, "pole within clearance of the contour");
      }
    }
  }
  // Lower ray runs inwards, upper ray outwards.
  Integrand g = [&](const Real& t) {
    return f(spec.origin + t * up) * up - f(spec.origin + t * down) * down;
  };
  QuadratureSpec q;
  q.tol = spec.tol * 0.5;
  q.parallel = spec.parallel;
  EvalResult r = integrate(g, Real(0), spec.height, q);
  if (r.status == Status::domain_error) return r;
  double at_end = magnitude(g(spec.height));
  double before = magnitude(g(spec.height - 1));
  double tail;
  if (at_end == 0.0) {
    tail = 0.0;
  } else if (before > at_end) {
    tail = at_end / std::log(before / at_end);
  } else {
    tail = HUGE_VAL;
  }
  r.err_estimate += tail;
  if (!std::isfinite(r.err_estimate)) {
    r.err_estimate = HUGE_VAL;
    r.status = Status::no_convergence;
    r.diagnostic = "integrand does not decay along the contour";
    return r;
  }
  if (r.status == Status::ok && r.err_estimate > target(spec.tol, r.value)) {
    r.status = Status::no_convergence;
    r.diagnostic = "truncated tail above tolerance";
  }
  return r;
}

}  // namespace qell
