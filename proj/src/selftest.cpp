#include "qell/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qell/eli.hpp"
#include "qell/foundation.hpp"
#include "qell/solver.hpp"

namespace qell {

namespace {

struct Draws {
  std::mt19937_64 rng;

  Complex disc(double r_min, double r_max) {
    std::uniform_real_distribution<double> r(r_min, r_max), t(-M_PI, M_PI);
    return Complex(polar(Real(r(rng)), Real(t(rng))));
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

struct Tally {
  SuiteResult r;

  void add(double residual) {
    ++r.checked;
    if (!std::isfinite(residual)) residual = HUGE_VAL;
    r.max_residual = std::max(r.max_residual, residual);
  }
  void skip() { ++r.skipped; }
};

double rel(const Complex& got, const Complex& want) { return magnitude(got - want) / std::max(1.0, magnitude(want)); }

using Suite = std::function<void(Tally&, Draws&, const SelftestOptions&, double)>;

// phi(c) - alpha phi(cq) - beta phi(cq^2), relative to the largest term.
void contiguous(Tally& t, Draws& d, const SelftestOptions& o, double tol) {
  for (int k = 0; k < o.draws; ++k) {
    PhiParams p{d.disc(0.0, 2.0), d.disc(0.0, 2.0), d.disc(0.0, 0.9), d.disc(0.1, 0.9), d.disc(0.0, 0.9)};
    ContiguousStep s;
    try {
      s = contiguous_step(p, 1e-12);
    } catch (const DomainError&) {
      t.skip();
      continue;
    }
    if (o.inject_fault) s.alpha = -s.alpha;
    PhiParams p1 = p, p2 = p;
    p1.c = p.c * p.q;
    p2.c = p1.c * p.q;
    EvalResult f0 = phi_series(p, tol), f1 = phi_series(p1, tol), f2 = phi_series(p2, tol);
    if (!f0.ok() || !f1.ok() || !f2.ok()) {
      t.skip();
      continue;
    }
    Complex a = s.alpha * f1.value, b = s.beta * f2.value;
    double scale = std::max({1.0, magnitude(f0.value), magnitude(a), magnitude(b)});
    t.add(magnitude(f0.value - a - b) / scale);
  }
}

void qshift(Tally& t, Draws& d, const SelftestOptions& o, double tol) {
  for (int k = 0; k < o.draws; ++k) {
    Complex q = d.disc(0.2, 0.9), x = d.disc(0.1, 0.9), y = d.disc(0.1, 0.9);
    ShiftResiduals s = phi_qshift_check(x, y, q, tol);
    EvalResult f = phi_big(x, y, q, tol);
    if (s.along_x.status == Status::near_pole || s.along_y.status == Status::near_pole || !f.ok()) {
      t.skip();
      continue;
    }
    double scale = std::max(1.0, magnitude(f.value));
    t.add(magnitude(s.along_x.value) / scale);
    t.add(magnitude(s.along_y.value) / scale);
  }
}

// ELi_{0;0} through Phi in x and through the mirrored Phi in y.
void symmetry(Tally& t, Draws& d, const SelftestOptions& o, double tol) {
  for (int k = 0; k < o.draws; ++k) {
    Complex q = d.disc(0.1, 0.9);
    Complex x = d.disc(0.05, 0.95) / q, y = d.disc(0.05, 0.95) / q;
    EvalResult a = eli00(x, y, q, tol), b = eli00_symmetric(x, y, q, tol);
    if (!a.ok() || !b.ok()) {
      t.skip();
      continue;
    }
    t.add(rel(a.value, b.value));
  }
}

// The 1/q parameter map on the series, and ELi_{0;0} at inverted arguments.
void inversion(Tally& t, Draws& d, const SelftestOptions& o, double tol) {
  for (int k = 0; k < o.draws; ++k) {
    PhiParams p{d.disc(0.1, 2.0), d.disc(0.1, 2.0), d.disc(0.1, 0.9), d.disc(0.1, 0.9), d.disc(0.0, 0.9)};
    EvalResult a = phi_series(p, tol), b = phi_series(inverted(p), tol);
    if (!a.ok() || !b.ok()) {
      t.skip();
    } else {
      t.add(rel(a.value, b.value));
    }
    Complex q = d.disc(0.1, 0.9);
    Complex u = d.disc(0.05, 0.9), v = d.disc(0.05, 0.9);
    EvalResult direct = eli00(u, v, q, tol);
    EvalResult inv = invert_base(1 / u, 1 / v, q, tol);
    if (!direct.ok() || !inv.ok()) {
      t.skip();
    } else {
      t.add(rel(inv.value, direct.value));
    }
  }
}

// (a;q)_n = (1/a;1/q)_n (-a)^n q^{n(n-1)/2}
void base_change(Tally& t, Draws& d, const SelftestOptions& o, double) {
  for (int k = 0; k < o.draws; ++k) {
    Complex a = d.disc(0.3, 2.0), q = d.disc(0.1, 0.9);
    for (long n = 0; n <= 20; n += 5) {
      Complex lhs = qpoch_finite(a, q, n);
      Complex rhs = qpoch_finite(1 / a, 1 / q, n) * pow(-a, n) * pow(q, n * (n - 1) / 2);
      t.add(rel(rhs, lhs));
    }
  }
}

// F(xi + 1) = F(xi) and F(xi + tau) = e(-alpha) F(xi).
void quasi_periodicity(Tally& t, Draws& d, const SelftestOptions& o, double tol) {
  for (int k = 0; k < o.draws; ++k) {
    Complex tau(d.uniform(-0.5, 0.5), d.uniform(0.3, 1.2));
    Complex xi(d.uniform(-0.5, 0.5), d.uniform(-0.2, 0.2) * tau.imag().to_double());
    Complex alpha(d.uniform(-0.5, 0.5), d.uniform(-0.2, 0.2));
    EvalResult f = ek_F(xi, alpha, tau, tol);
    EvalResult f1 = ek_F(xi + 1, alpha, tau, tol);
    EvalResult ft = ek_F(xi + tau, alpha, tau, tol);
    if (!f.ok() || !f1.ok() || !ft.ok()) {
      t.skip();
      continue;
    }
    double scale = std::max(1.0, magnitude(f.value));
    t.add(magnitude(f1.value - f.value) / scale);
    t.add(magnitude(ft.value - e2pii(-alpha) * f.value) / scale);
  }
}

// The residue chain against -y^n/q^n, and the residue read off numerically
// by averaging d ELi_{0;0}(q^-n + d) over d = h, ih, -h, -ih. The average
// cancels the regular part up to O(h^4).
void residues(Tally& t, Draws&, const SelftestOptions& o, double tol) {
  double h = std::min(1e-4, 0.05 * std::pow(o.tol, 0.25));
  for (auto [yv, qv] : {std::pair{0.1, 0.9}, {0.3, 0.7}}) {
    Complex y(yv), q(qv);
    for (int n = 1; n <= 4; ++n) {
      Complex want = residue_x(n, y, q, tol);
      t.add(rel(residue_chain(n, y, q, tol).residue, want));
      if (n > 2) continue;
      Complex pole = pow(1 / q, n);
      Complex acc;
      bool ok = true;
      for (Complex step : {Complex(h), Complex(0.0, h), Complex(-h), Complex(0.0, -h)}) {
        EvalResult v = eli00(pole + step, y, q, tol);
        ok = ok && v.ok();
        acc += step * v.value;
      }
      if (!ok) {
        t.skip();
        continue;
      }
      t.add(magnitude(acc / 4 - want) / magnitude(want));
    }
  }
}

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> all{
      {"contiguous", contiguous}, {"qshift", qshift},   {"symmetry", symmetry},
      {"inversion", inversion},   {"base_change", base_change},
      {"quasi_periodicity", quasi_periodicity},       {"residues", residues},
  };
  return all;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suites()) out.push_back(s.first);
  return out;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt) {
  if (opt.suite) {
    auto names = suite_names();
    if (std::find(names.begin(), names.end(), *opt.suite) == names.end()) {
      throw std::invalid_argument("unknown suite '" + *opt.suite + "'");
    }
  }
  std::vector<SuiteResult> out;
  unsigned index = 0;
  for (const auto& [name, run] : suites()) {
    ++index;
    if (opt.suite && *opt.suite != name) continue;
    Draws d{std::mt19937_64(opt.seed + index)};
    Tally t;
    t.r.name = name;
    t.r.threshold = opt.tol;
    run(t, d, opt, opt.tol / 100);
    t.r.passed = t.r.checked > 0 && t.r.max_residual <= t.r.threshold;
    out.push_back(t.r);
  }
  return out;
}

bool all_passed(const std::vector<SuiteResult>& results) {
  return !results.empty() && std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

void write_report(std::ostream& os, const std::vector<SuiteResult>& results) {
  os << std::left << std::setw(20) << "suite" << std::setw(9) << "checked" << std::setw(9) << "skipped"
     << std::setw(14) << "max_residual" << std::setw(12) << "threshold" << "result\n";
  for (const auto& r : results) {
    std::ostringstream res, thr;
    res << std::scientific << std::setprecision(2) << r.max_residual;
    thr << std::scientific << std::setprecision(1) << r.threshold;
    os << std::left << std::setw(20) << r.name << std::setw(9) << r.checked << std::setw(9) << r.skipped
       << std::setw(14) << res.str() << std::setw(12) << thr.str() << (r.passed ? "pass" : "FAIL") << '\n';
  }
}

}  // namespace qell
