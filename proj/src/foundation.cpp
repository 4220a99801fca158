#include "qell/foundation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qell/series.hpp"

namespace qell {

namespace {

double eps_double() { return Real::epsilon().to_double(); }

long series_cap(double tol, double ratio) {
  // Generous cap on the number of terms of a geometric-like series.
  ratio = std::clamp(ratio, 1e-300, 0.999999);
  double n = std::log(std::max(tol, 1e-300) * 1e-3) / std::log(ratio);
  return static_cast<long>(std::min(4.0e6, std::max(200.0, 4.0 * n + 200.0)));
}

// Taylor coefficients of Li_2 in u = -log(1 - z) beyond u - u^2/4:
// c_k = B_{2k} / (2k+1)!, cached per thread and precision.
const std::vector<Real>& bernoulli_coefficients(std::size_t count) {
  thread_local mpfr_prec_t bits = 0;
  thread_local std::vector<Real> coeff;
  if (bits != WorkingPrecision::bits()) {
    bits = WorkingPrecision::bits();
    coeff.clear();
  }
  Real two_pi_sq = 4 * Real::pi() * Real::pi();
  Real scale(1);
  for (std::size_t k = 1; k <= coeff.size(); ++k) scale = scale * two_pi_sq;
  while (coeff.size() < count) {
    long k = static_cast<long>(coeff.size()) + 1;
    scale = scale * two_pi_sq;
    Real c = 2 * zeta(static_cast<unsigned long>(2 * k)) / (Real(2 * k + 1) * scale);
    if (k % 2 == 0) c = -c;
    coeff.push_back(c);
  }
  return coeff;
}

// Li_2 for |z| <= 1 and Re z <= 1/2 through the Bernoulli series in u.
Complex dilog_bernoulli(const Complex& z, double* err) {
  Complex u = -log(1 - z);
  Complex u2 = u * u;
  Complex sum = u - u2 / 4;
  Complex power = u;
  double eps = eps_double();
  double scale = std::max(1.0, magnitude(sum));
  double last = 0.0;
  for (std::size_t k = 1;; ++k) {
    const auto& c = bernoulli_coefficients(k);
    power *= u2;
    Complex term = c[k - 1] * power;
    sum += term;
    last = magnitude(term);
    if (last < 0.1 * eps * scale || k > 2000) break;
  }
  *err = last + 10 * eps * std::max(1.0, magnitude(sum));
  return sum;
}

Complex dilog_disc(const Complex& z, double* err) {
  if (z.real() > Real(0.5)) {
    // Reflection moves the argument next to the origin.
    Real pi = Real::pi();
    Complex w = 1 - z;
    double e = 0.0;
    Complex v = pi * pi / 6 - log(z) * log(w) - dilog_bernoulli(w, &e);
    *err = e + 10 * eps_double() * std::max(1.0, magnitude(v));
    return v;
  }
  return dilog_bernoulli(z, err);
}

}  // namespace

Complex qpoch_finite(const Complex& a, const Complex& q, long n) {
  if (n < 0) throw DomainError("qpoch_finite: negative length");
  Complex p(1);
  Complex aq = a;
  for (long k = 0; k < n; ++k) {
    p *= 1 - aq;
    aq *= q;
  }
  if (!p.is_finite()) throw DomainError("qpoch_finite: overflow");
  return p;
}

EvalResult qpoch_infinite(const Complex& a, const Complex& q, double tol, QPochMethod method) {
  double qm = magnitude(q);
  if (!(qm < 1.0)) return make_error(Status::domain_error, Method::series, "|q| >= 1");
  if (a.is_zero()) {
    EvalResult r;
    r.value = Complex(1);
    return r;
  }
  EvalResult r;
  r.method = Method::series;
  if (method == QPochMethod::product) {
    double eps = eps_double();
    Complex p(1);
    Complex aq = a;
    long k = 0;
    long cap = series_cap(eps, qm);
    for (; k < cap; ++k) {
      double t = magnitude(aq);
      if (t / (1.0 - qm) < eps) break;
      p *= 1 - aq;
      aq *= q;
    }
    r.value = p;
    r.terms_used = k;
    r.err_estimate = magnitude(p) * (magnitude(aq) / (1.0 - qm) + 10 * k * eps);
    return finalize(r, tol);
  }

  // The terms can grow before they decay; run a cheap double pass to find
  // the peak and carry enough guard digits to absorb the cancellation.
  std::complex<double> ad = a.to_std(), qd = q.to_std();
  double peak = 1.0, t = 1.0;
  std::complex<double> qn(1.0);
  for (int n = 1; n < 100000; ++n) {
    std::complex<double> qnext = qn * qd;
    t *= std::abs(ad) * std::abs(qn) / std::abs(1.0 - qnext);
    qn = qnext;
    peak = std::max(peak, t);
    if (t < 1e-30 * peak && std::abs(qn) < 0.5) break;
  }
  int guard = static_cast<int>(std::ceil(std::log10(peak))) + 5;
  EvalResult out;
  {
    PrecisionScope scope(WorkingPrecision::digits() + std::max(0, guard));
    Complex ah = widened(a), qh = widened(q);
    SeriesSum s(tol * 1e-3);
    Complex term(1);
    Complex qpow(1);  // q^{n-1}
    Complex qn1 = qh;  // q^n
    s.add(term);
    long cap = series_cap(tol, qm) + 100000;
    bool done = false;
    for (long n = 1; n < cap; ++n) {
      term = term * (-ah) * qpow / (1 - qn1);
      qpow *= qh;
      qn1 *= qh;
      if (s.add(term)) {
        done = true;
        break;
      }
    }
    out.value = s.value();
    out.terms_used = s.terms();
    out.err_estimate = s.last_increment() + peak * eps_double();
    if (!done) {
      out.status = Status::no_convergence;
      out.diagnostic = "q-Pochhammer series did not settle";
    }
  }
  // Round back to the caller's precision.
  out.value = Complex(out.value.real() + Real(0), out.value.imag() + Real(0));
  return finalize(out, tol);
}

Complex pochhammer(const Complex& a, long n) {
  if (n < 0) throw DomainError("pochhammer: negative length");
  Complex p(1);
  for (long k = 0; k < n; ++k) {
    Complex f = a + k;
    if (f.is_zero()) throw DomainError("pochhammer: vanishing factor");
    p *= f;
  }
  return p;
}

EvalResult polylog(int m, const Complex& z, double tol) {
  if (m < 1) return make_error(Status::domain_error, Method::series, "polylog order below 1");
  double zm = magnitude(z);
  if (!(zm < 1.0)) return make_error(Status::domain_error, Method::series, "|z| >= 1");
  EvalResult r;
  if (z.is_zero()) return r;
  SeriesSum s(tol);
  Complex zk = z;
  long cap = series_cap(tol, zm);
  bool done = false;
  for (long k = 1; k <= cap; ++k) {
    Complex term = (m == 1) ? zk / Real(k) : zk / pow(Real(k), static_cast<long>(m));
    zk *= z;
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

EvalResult dilog(const Complex& z, double tol, Side side) {
  EvalResult r;
  if (z.is_zero()) return r;
  Real pi = Real::pi();
  if (z.is_real() && z.real() == Real(1)) {
    r.value = pi * pi / 6;
    r.err_estimate = eps_double();
    return r;
  }
  double err = 0.0;
  if (magnitude(z) <= 1.0) {
    r.value = dilog_disc(z, &err);
  } else if (z.is_real() && z.real() > Real(1)) {
    if (side == Side::none) {
      return make_error(Status::domain_error, Method::series, "dilogarithm argument on its cut");
    }
    Real t = z.real();
    Real lt = log(t);
    Complex inv = dilog_disc(Complex(1 / t), &err);
    Complex v = pi * pi / 3 - lt * lt / 2 - inv;
    Real im = pi * lt;
    r.value = Complex(v.real(), side == Side::above ? im : -im);
  } else {
    Complex l = log(-z);
    r.value = -(pi * pi) / 6 - l * l / 2 - dilog_disc(1 / z, &err);
  }
  r.err_estimate = err;
  return finalize(r, tol);
}

EvalResult lambda2(const Complex& z, double tol) {
  double zm = magnitude(z);
  if (!(zm < 1.0)) return make_error(Status::domain_error, Method::series, "|z| >= 1");
  EvalResult r;
  if (z.is_zero()) return r;
  SeriesSum s(tol);
  Complex z2 = z * z;
  Complex zk = z;
  long cap = series_cap(tol, zm * zm);
  bool done = false;
  for (long n = 0; n <= cap; ++n) {
    long d = 2 * n + 1;
    if (s.add(zk / Real(d * d))) {
      done = true;
      break;
    }
    zk *= z2;
  }
  r.value = Complex(s.value().imag(), -s.value().real());
  r.terms_used = s.terms();
  r.err_estimate = s.last_increment();
  if (!done) r.status = Status::no_convergence;
  return finalize(r, tol);
}

EvalResult lambda2_dilog(const Complex& z, double tol) {
  if (!(magnitude(z) < 1.0)) return make_error(Status::domain_error, Method::series, "|z| >= 1");
  EvalResult a = dilog(z, tol);
  EvalResult b = dilog(-z, tol);
  EvalResult r = sum(a, scaled(b, Complex(-1)));
  // 1/(2i) = -i/2
  r.value = Complex(r.value.imag() / 2, -r.value.real() / 2);
  r.err_estimate /= 2;
  return finalize(r, tol);
}

Complex log1m(const Complex& z, Side side) {
  Complex w = 1 - z;
  if (w.is_real() && w.real().sign() < 0) {
    Real pi = Real::pi();
    return Complex(log(-w.real()), side == Side::above ? -pi : pi);
  }
  return log(w);
}


Real bernoulli(int n) {
  if (n < 0) throw DomainError("bernoulli: negative index");
  if (n == 0) return Real(1);
  if (n == 1) return Real(-0.5);
  if (n % 2 == 1) return Real(0);
  // B_2k = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
  Real f(1);
  for (int k = 2; k <= n; ++k) f = f * k;
  Real b = 2 * f * zeta(static_cast<unsigned long>(n)) / pow(2 * Real::pi(), static_cast<long>(n));
  return (n / 2) % 2 == 1 ? b : -b;
}

namespace {

// zeta at a non-positive or small integer argument, s != 1.
Real zeta_int(long s) {
  if (s >= 2) return zeta(static_cast<unsigned long>(s));
  if (s == 0) return Real(-0.5);
  long m = -s;
  if (m % 2 == 0) return Real(0);
  return -bernoulli(static_cast<int>(m + 1)) / Real(m + 1);
}

// Li_n(e^mu) for |mu| < 2 pi, n >= 2, from the expansion around mu = 0.
// `log_minus_mu` is log(-mu) on the requested branch.
Complex polylog_near_one(int n, const Complex& mu, const Complex& log_minus_mu, double* err) {
  double eps = eps_double();
  Real harmonic(0);
  for (int k = 1; k < n; ++k) harmonic = harmonic + Real(1) / Real(k);
  Complex sum;
  Complex power(1);  // mu^k / k!
  double small = 0.0;
  int quiet = 0;
  for (long k = 0; k < 4000; ++k) {
    if (k > 0) power = power * mu / Real(k);
    Complex term;
    if (k == n - 1) {
      term = power * (harmonic - log_minus_mu);
    } else {
      Real z = zeta_int(n - k);
      if (z.is_zero()) continue;
      term = z * power;
    }
    sum += term;
    small = magnitude(term);
    if (k > n && small < 0.1 * eps * std::max(1.0, magnitude(sum))) {
      if (++quiet == 2) break;
    } else {
      quiet = 0;
    }
  }
  *err = small + 100 * eps * std::max(1.0, magnitude(sum));
  return sum;
}

Complex bernoulli_polynomial(int n, const Complex& x) {
  Complex s;
  Real binom(1);
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * Real(n - k + 1) / Real(k);
    Real b = bernoulli(k);
    if (!b.is_zero()) s += binom * b * pow(x, static_cast<long>(n - k));
  }
  return s;
}

}  // namespace

EvalResult polylog_continued(int m, const Complex& z, double tol, Side side) {
  if (m < 1) return make_error(Status::domain_error, Method::series, "polylog order below 1");
  EvalResult r;
  if (z.is_zero()) return r;
  bool on_cut = z.is_real() && z.real() > Real(1);
  if (on_cut && side == Side::none) {
    return make_error(Status::domain_error, Method::series, "polylog argument on its cut");
  }
  if (m == 1) {
    if (z.is_real() && z.real() == Real(1)) {
      return make_error(Status::near_pole, Method::series, "Li_1 is singular at 1");
    }
    r.value = -log1m(z, side);
    r.err_estimate = 10 * eps_double() * std::max(1.0, magnitude(r.value));
    return finalize(r, tol);
  }
  if (m == 2) return dilog(z, tol, side);
  double zm = magnitude(z);
  if (zm <= 0.5) return polylog(m, z, tol);
  Real pi = Real::pi();
  Complex two_pi_i(Real(0), 2 * pi);
  double err = 0.0;
  if (zm < 2.0) {
    if (z.is_real() && z.real() == Real(1)) {
      r.value = zeta(static_cast<unsigned long>(m));
      return r;
    }
    Complex mu, lmm;
    if (on_cut) {
      // mu = log t +- i0, so -mu sits just across the negative axis.
      Real lt = log(z.real());
      mu = Complex(lt);
      lmm = Complex(log(lt), side == Side::above ? -pi : pi);
    } else {
      mu = log(z);
      lmm = log(-mu);
    }
    r.value = polylog_near_one(m, mu, lmm, &err);
    r.err_estimate = err;
    return finalize(r, tol);
  }
  // Inversion to 1/z inside the disc of radius 1/2.
  EvalResult inv = polylog(m, 1 / z, tol / 10);
  Complex lmz;
  if (on_cut) {
    lmz = Complex(log(z.real()), side == Side::above ? -pi : pi);
  } else {
    lmz = log(-z);
  }
  Real fact(1);
  for (int k = 2; k <= m; ++k) fact = fact * k;
  Complex b = bernoulli_polynomial(m, Complex(Real(0.5)) + lmz / two_pi_i);
  Complex v = -pow(two_pi_i, static_cast<long>(m)) / fact * b;
  r.value = (m % 2 == 0 ? -inv.value : inv.value) + v;
  r.err_estimate = inv.err_estimate + 100 * eps_double() * std::max(1.0, magnitude(r.value));
  r.status = inv.status;
  return finalize(r, tol);
}

}  // namespace qell
