#pragma once

#include <functional>
#include <vector>

#include "qell/complex.hpp"
#include "qell/result.hpp"

namespace qell {

using Integrand = std::function<Complex(const Real&)>;
using Integrand2 = std::function<Complex(const Real& u, const Real& v)>;

enum class Rule { gauss_legendre, double_exponential };

/// A first-order pole c/(u - u0) removed from the integrand and integrated in
/// closed form. A zero coefficient marks a removable singularity that only
/// needs the limit supplier.
struct Subtraction {
  Complex location;
  Complex coefficient;
  /// For a location on the path: the pole sits at u0 - i0 (Side::below) or
  /// u0 + i0 (Side::above). Ignored off the path.
  Side side = Side::none;
  /// Value of the subtracted integrand at u0, used within 10 tol of u0.
  std::function<Complex()> limit;
};

struct QuadratureSpec {
  Rule rule = Rule::gauss_legendre;
  int max_depth = 48;
  long max_panels = 4000;
  double tol = 1e-10;
  std::vector<Subtraction> subtractions;
  /// Extra panel boundaries, e.g. integrable kinks or log singularities.
  std::vector<Real> breakpoints;
  /// Evaluate panel nodes with OpenMP; the serial path is the reference.
  bool parallel = true;
};

/// Adaptive quadrature of f on [0, 1] with the listed subtractions. The error
/// estimate is the difference between each panel rule and its two halves,
/// summed over panels.
EvalResult integrate(const Integrand& f, const QuadratureSpec& spec);

/// Same on an arbitrary real interval.
EvalResult integrate(const Integrand& f, const Real& lo, const Real& hi, const QuadratureSpec& spec);

/// int_0^1 dv/v int_0^v du f(u, v). The inner integral is taken over
/// t = u/v in [0, 1], which removes the 1/v endpoint. Subtraction locations
/// refer to u; their coefficients must not depend on v.
EvalResult integrate_nested(const Integrand2& f, const QuadratureSpec& spec);

/// Integral along a contour running from -i inf to +i inf through `origin`,
/// made of the two rays origin + t (tilt -/+ i), 0 <= t <= height.
struct ContourSpec {
  Complex origin;
  Real tilt = Real(0);
  Real height = Real(20);
  double tol = 1e-10;
  /// Poles that must stay at least `clearance` away from the path.
  std::vector<Complex> poles;
  double clearance = 1e-3;
  bool parallel = true;
};

/// int_Gamma f(s) ds. A tail estimate from the decay of |f| near the
/// truncation height is added to err_estimate.
EvalResult integrate_contour(const std::function<Complex(const Complex&)>& f, const ContourSpec& spec);

/// Gauss-Legendre nodes on [-1, 1] and weights at the working precision.
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
const GaussRule& gauss_legendre_rule(int points);

/// Evaluates f at every point; with `parallel` the points are spread over
/// OpenMP threads, each running at the caller's working precision.
std::vector<Complex> evaluate_points(const Integrand& f, const std::vector<Real>& points, bool parallel);

}  // namespace qell
