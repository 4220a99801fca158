#include "qell/result.hpp"

#include <algorithm>
#include <cmath>

namespace qell {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::near_pole: return "near_pole";
    case Status::no_convergence: return "no_convergence";
    case Status::domain_error: return "domain_error";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::series: return "series";
    case Method::chm_up: return "chm_up";
    case Method::chm_down: return "chm_down";
    case Method::contiguous_chm: return "contiguous+chm";
    case Method::continuation: return "continuation";
    case Method::barnes: return "barnes";
    case Method::quadrature: return "quadrature";
  }
  return "?";
}

std::string_view to_string(Side s) {
  switch (s) {
    case Side::none: return "none";
    case Side::above: return "above";
    case Side::below: return "below";
  }
  return "?";
}

EvalResult make_error(Status status, Method method, std::string diagnostic) {
  EvalResult r;
  r.status = status;
  r.method = method;
  r.diagnostic = std::move(diagnostic);
  return r;
}

double magnitude(const Complex& z) { return abs(z).to_double(); }

EvalResult finalize(EvalResult r, double tol) {
  if (!r.value.is_finite() || !std::isfinite(r.err_estimate)) {
    r.value = Complex();
    if (r.status == Status::ok || r.status == Status::no_convergence) {
      r.status = Status::domain_error;
      if (r.diagnostic.empty()) r.diagnostic = "non-finite value";
    }
    return r;
  }
  if (r.status == Status::ok && r.err_estimate > tol * std::max(1.0, magnitude(r.value))) {
    r.status = Status::no_convergence;
    if (r.diagnostic.empty()) r.diagnostic = "error estimate above tolerance";
  }
  return r;
}

Status worst(Status a, Status b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

EvalResult scaled(EvalResult r, const Complex& factor) {
  r.value = r.value * factor;
  r.err_estimate *= magnitude(factor);
  return r;
}

EvalResult sum(EvalResult a, const EvalResult& b) {
  a.value += b.value;
  a.err_estimate += b.err_estimate;
  a.terms_used += b.terms_used;
  a.status = worst(a.status, b.status);
  if (a.diagnostic.empty()) a.diagnostic = b.diagnostic;
  return a;
}

}  // namespace qell
