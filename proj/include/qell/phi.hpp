#pragma once

#include <string>

#include "qell/complex.hpp"
#include "qell/result.hpp"

namespace qell {

/// Parameters of 2phi1(a, b; c; q, z).
struct PhiParams {
  Complex a, b, c, q, z;
};

enum class DomainTag {
  series_ok,
  chm_up_ok,
  chm_down_ok,
  needs_contiguous,
  needs_continuation,
  spiral_violation
};

std::string_view to_string(DomainTag t);

struct DomainClass {
  DomainTag tag = DomainTag::series_ok;
  /// c hits the vanishing set {q^-n} of the series denominator.
  bool c_on_pole = false;
};

/// Knobs shared by the phi routes.
struct PhiOptions {
  /// |1 - z q^n| (or the analogous denominator) below this flags near_pole.
  /// Zero means 10 tol.
  double pole_guard = 0.0;
  /// CHM iteration cap; zero means 10 ceil(log tol / log |q|).
  long max_iter = 0;
  int max_shifts = 64;
  /// Forces at least this many contiguous shifts (testing hook).
  int min_shifts = 0;
};

double pole_guard(const PhiOptions& opt, double tol);

/// Throws DomainError for q = 0 or |q| = 1.
DomainClass classify(const PhiParams& p);

/// True when the spiral condition |arg(-z) - (w2/w1) ln|z|| < pi holds,
/// with ln q = -w1 - i w2. Always true for real positive q.
bool spiral_ok(const Complex& q, const Complex& z);

/// Direct summation inside the disc of convergence.
EvalResult phi_series(const PhiParams& p, double tol, const PhiOptions& opt = {});

/// Parameters of the base inversion phi(a,b;c;q,z) = phi(1/a,1/b;1/c;1/q,(ab/c) z/q).
PhiParams inverted(const PhiParams& p);

/// Phi(x,y;q) = phi(q, yq; yq^2; q, xq) through the dispatcher.
EvalResult phi_big(const Complex& x, const Complex& y, const Complex& q, double tol,
                   const PhiOptions& opt = {});

/// ELi_{0;0}(x,y;q) = [xyq/(1-yq)] Phi(x,y;q).
EvalResult eli00(const Complex& x, const Complex& y, const Complex& q, double tol,
                 const PhiOptions& opt = {});

/// The mirrored form [xyq/(1-xq)] phi(q, xq; xq^2; q, yq).
EvalResult eli00_symmetric(const Complex& x, const Complex& y, const Complex& q, double tol,
                           const PhiOptions& opt = {});

/// ELi_{0;0}(1/x, 1/y; q) through the inversion formula
/// -(1/y) ELi_{0;0}(1/(xp), y; p), p = 1/q.
EvalResult invert_base(const Complex& x, const Complex& y, const Complex& q, double tol);

/// sum_n [(yq;q)_n (1)_n (1)_n / ((yq^2;q)_n (2)_n)] (xq)^n / n!, so that
/// ELi_{1;0} = [xyq/(1-yq)] times this series. Needs |q| < 1, |xq| < 1.
EvalResult mixed_series_eli10(const Complex& x, const Complex& y, const Complex& q, double tol);

/// min over n >= n_min of |1 - w q^n|, scanning only the powers where
/// |w q^n| is close to 1. Used for pole proximity checks.
double pole_distance(const Complex& w, const Complex& q, long n_min);

}  // namespace qell
