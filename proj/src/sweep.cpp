#include "qell/sweep.hpp"

#include <cmath>
#include <stdexcept>

#ifdef QELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace qell {

namespace {

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names{"x", "y", "q", "xi", "alpha", "tau"};
  return names;
}

SweepRow run_row(const SweepSpec& spec, const Complex& v) {
  TargetArgs a = spec.fixed;
  a.set(spec.axis, v);
  a.parallel = false;
  return {v, evaluate_target(spec.target, a)};
}

SweepSpec phi_figure(const Complex& q) {
  SweepSpec s;
  s.target = Target::phi_big;
  s.axis = "x";
  s.from = Complex(1.05);
  s.to = Complex(1.30);
  s.steps = 500;
  s.fixed.y = Complex(0.1);
  s.fixed.q = q;
  return s;
}

// The rest is regular on the closed interval but the two decomposition
// regions meet at 1/q_r^2, so the endpoints are pulled in slightly.
SweepSpec rest_figure(const Complex& q) {
  SweepSpec s;
  s.target = Target::eli_rest_10;
  s.axis = "x";
  Real lo = 1 / q.real();
  Real hi = lo / q.real();
  Real pad = (hi - lo) / 1000;
  s.from = Complex(lo + pad);
  s.to = Complex(hi - pad);
  s.steps = 100;
  s.fixed.y = Complex(0.1);
  s.fixed.q = q;
  s.fixed.eps = Side::above;
  return s;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.steps < 2) throw std::invalid_argument("steps must be at least 2");
  bool known = false;
  for (const auto& n : axis_names()) known = known || n == spec.axis;
  if (!known) throw std::invalid_argument("unknown axis '" + spec.axis + "'");
  if (!spec.from.is_finite() || !spec.to.is_finite()) throw std::invalid_argument("range endpoints must be finite");
}

std::vector<Complex> sweep_points(const SweepSpec& spec) {
  validate(spec);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(spec.steps));
  Complex span = spec.to - spec.from;
  for (long k = 0; k < spec.steps; ++k) {
    out.push_back(k + 1 == spec.steps ? spec.to : spec.from + span * Real(k) / Real(spec.steps - 1));
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, bool parallel) {
  std::vector<Complex> pts = sweep_points(spec);
  const long n = static_cast<long>(pts.size());
  std::vector<SweepRow> rows(pts.size());
  if (!parallel) {
    for (long i = 0; i < n; ++i) rows[i] = run_row(spec, pts[i]);
    return rows;
  }
  const int digits = WorkingPrecision::digits();
#ifdef QELL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) {
    PrecisionScope scope(digits);
    rows[i] = run_row(spec, pts[i]);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  bool real_axis = true;
  for (const auto& r : rows) real_axis = real_axis && r.param.is_real();
  os << "param,re,im,err,method,status\n";
  for (const auto& r : rows) {
    if (real_axis) {
      os << format_double(r.param.real().to_double());
    } else {
      double im = r.param.imag().to_double();
      os << format_double(r.param.real().to_double()) << (std::signbit(im) ? "" : "+")
         << format_double(im) << 'i';
    }
    const EvalResult& e = r.result;
    os << ',' << format_double(e.value.real().to_double()) << ',' << format_double(e.value.imag().to_double()) << ','
       << format_double(e.err_estimate) << ',' << to_string(e.method) << ',' << to_string(e.status) << '\n';
  }
}

std::optional<SweepSpec> figure_preset(const std::string& name) {
  if (name == "fig1") return phi_figure(Complex(0.9));
  if (name == "fig2") return phi_figure(Complex(0.9, 0.04));
  if (name == "fig3") return rest_figure(Complex(0.9));
  if (name == "fig3c") return rest_figure(Complex(0.9, 0.04));
  return std::nullopt;
}

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig3c"}; }

}  // namespace qell
