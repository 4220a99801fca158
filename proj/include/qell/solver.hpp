#pragma once

#include <vector>

#include "qell/phi.hpp"

namespace qell {

/// Running state of the q-difference iteration.
struct ChmState {
  Complex A1, A2;
  long n = 0;
  Complex z_current;
};

/// Upward iteration for |q| < 1, |c/q| < 1.
EvalResult chm_up(const PhiParams& p, double tol, const PhiOptions& opt = {});

/// Downward iteration for |q| > 1, |q/c| < 1.
EvalResult chm_down(const PhiParams& p, double tol, const PhiOptions& opt = {});

/// Recurrence coefficients of the upward difference equation,
/// F(z) = a1(z) F(zq) + a2(z) F(zq^2).
void chm_up_coefficients(const PhiParams& p, const Complex& z, Complex* a1, Complex* a2);

enum class ShiftTarget { chm, series };

/// phi(c_k) = alpha_k phi(c_{k+1}) + beta_k phi(c_{k+2}), c_k = c q^k.
struct ContiguousStep {
  Complex c;
  Complex alpha, beta;
};

/// Linear chain c, cq, ..., cq^{N+1}. The last two links are the leaves; the
/// combination runs from the leaves back to c.
struct ContiguousPlan {
  std::vector<ContiguousStep> steps;
  PhiParams leaf0, leaf1;  // c q^N and c q^{N+1}
  Status status = Status::ok;
  long failed_step = -1;
  std::string diagnostic;

  long shifts() const { return static_cast<long>(steps.size()); }
};

/// Coefficients of the three-term contiguous relation in c at one link.
/// Throws DomainError when the left-hand coefficient vanishes.
ContiguousStep contiguous_step(const PhiParams& p, double guard);

ContiguousPlan contiguous_shift(const PhiParams& p, ShiftTarget target, const PhiOptions& opt = {},
                                double tol = 1e-10);

/// Runs a plan: leaves by series or CHM, then the backward combination.
EvalResult execute_plan(const ContiguousPlan& plan, double tol, const PhiOptions& opt = {});

/// Two-term continuation in 1/z (|q| < 1, |z| > |cq/(ab)|).
EvalResult analytic_continuation(const PhiParams& p, double tol);

/// Barnes contour representation of ELi_{1;0}(x,y;q) for 0 < q < 1.
EvalResult barnes_eli10(const Complex& x, const Complex& y, const Complex& q, double tol);

struct ShiftResiduals {
  EvalResult along_x;
  EvalResult along_y;
};

/// Residuals of the two q-shift identities of Phi.
ShiftResiduals phi_qshift_check(const Complex& x, const Complex& y, const Complex& q, double tol);

/// Dispatcher: series, CHM, contiguous shifts followed by CHM, continuation.
EvalResult evaluate(const PhiParams& p, double tol, const PhiOptions& opt = {});

}  // namespace qell
