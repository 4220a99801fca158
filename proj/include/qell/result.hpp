#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "qell/complex.hpp"

namespace qell {

enum class Status { ok, near_pole, no_convergence, domain_error };

enum class Method { series, chm_up, chm_down, contiguous_chm, continuation, barnes, quadrature };

/// Side of a real branch cut: the argument is approached from above (+i0) or
/// below (-i0).
enum class Side { none, above, below };

std::string_view to_string(Status s);
std::string_view to_string(Method m);
std::string_view to_string(Side s);

/// Thrown by value-returning primitives whose preconditions fail.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Outcome of an evaluation. `err_estimate` is the last accepted increment or
/// the quadrature error estimate. An ok status means
/// err_estimate <= tol * max(1, |value|).
struct EvalResult {
  Complex value;
  double err_estimate = 0.0;
  long terms_used = 0;
  Method method = Method::series;
  Status status = Status::ok;
  std::string diagnostic;

  bool ok() const { return status == Status::ok; }
};

EvalResult make_error(Status status, Method method, std::string diagnostic);

/// Enforces the result invariants: non-finite values become a domain error
/// with a zero value, and an ok status whose error exceeds the tolerance is
/// downgraded to no_convergence.
EvalResult finalize(EvalResult r, double tol);

/// The more severe of two statuses.
Status worst(Status a, Status b);

/// Scales a result by a constant factor, carrying the error along.
EvalResult scaled(EvalResult r, const Complex& factor);

/// err(a) + err(b); statuses merged, method and terms from `a`.
EvalResult sum(EvalResult a, const EvalResult& b);

double magnitude(const Complex& z);

}  // namespace qell
