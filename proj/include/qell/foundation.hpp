#pragma once

#include "qell/complex.hpp"
#include "qell/result.hpp"

namespace qell {

/// (a;q)_n = prod_{k<n} (1 - a q^k). Throws DomainError on overflow.
Complex qpoch_finite(const Complex& a, const Complex& q, long n);

enum class QPochMethod { series, product };

/// (a;q)_inf for |q| < 1. The series form sum_n q^{n(n-1)/2} (-a)^n / (q;q)_n
/// is the default; the truncated product is kept as a second route.
EvalResult qpoch_infinite(const Complex& a, const Complex& q, double tol,
                          QPochMethod method = QPochMethod::series);

/// (a)_n = a (a+1) ... (a+n-1). Throws DomainError when a factor vanishes.
Complex pochhammer(const Complex& a, long n);

/// Li_m(z) = sum_{k>=1} z^k / k^m inside the unit disc, m >= 1.
EvalResult polylog(int m, const Complex& z, double tol);

/// Li_m(z) on the whole plane for m >= 1, continued across |z| = 1 with the
/// principal cut (1, inf). On the cut the side selects the boundary value.
EvalResult polylog_continued(int m, const Complex& z, double tol, Side side = Side::none);

/// Bernoulli number B_n (B_1 = -1/2).
Real bernoulli(int n);

/// Dilogarithm on the whole plane. On the cut (1, inf) the side selects the
/// boundary value; Side::none there is a domain error.
EvalResult dilog(const Complex& z, double tol, Side side = Side::none);

/// Lambda_2(-iz) = [Li_2(z) - Li_2(-z)] / (2i) by its odd series, |z| < 1.
EvalResult lambda2(const Complex& z, double tol);

/// Same quantity through the dilogarithm difference, as an independent route.
EvalResult lambda2_dilog(const Complex& z, double tol);

/// log(1 - z) with the branch for real z > 1 fixed by the side.
Complex log1m(const Complex& z, Side side = Side::none);

}  // namespace qell
