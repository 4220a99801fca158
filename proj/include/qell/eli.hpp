#pragma once

#include "qell/phi.hpp"
#include "qell/quadrature.hpp"

namespace qell {

enum class EliRoute { automatic, series, kernel };

struct EliRequest {
  int n = 0, m = 0;
  Complex x, y, q;
  /// Side of the real cut x, y > 1/|q|; needed only when a pole lands on the
  /// integration path.
  Side eps_side = Side::none;
  double tol = 1e-10;
  EliRoute route = EliRoute::automatic;
  bool parallel = true;
};

/// ELi_{n;m}(x, y; q). Inside |xq| < 1 (and |yq| < 1 for m > 0) the double
/// sum is taken directly; elsewhere the log kernel
/// int_0^1 dz/z (-ln z)^{n-1}/(n-1)! ELi_{0;m}(zx, y; q), or its mirror in y,
/// with the poles of the integrand subtracted.
EvalResult eli_nm(const EliRequest& req);

/// Direct summation sum_j x^j/j^n Li_m(y q^j), or the mirrored sum when only
/// |yq| < 1 holds and n = 0.
EvalResult eli_series(const EliRequest& req);

/// ELi_{n;0} on the first cut region as cut + rest.
struct Decomposition {
  Complex cut;
  EvalResult rest;
  EvalResult total() const;
};

/// n = 1, real q in (0, 1), real 0 < x < 1/q^2. Below 1/q the cut is real.
Decomposition eli10_decomposed(const EliRequest& req);

/// n = 1, 1/q^2 < x < 1/q^3, with both logarithms split off.
Decomposition eli10_decomposed_2(const EliRequest& req);

/// Integrand of the second-region rest (without the prefactor), exposed for
/// probing its behaviour at the subtraction points.
Complex eli10_rest2_integrand(const Complex& x, const Complex& y, const Complex& q, const Real& u, double tol);

/// n = 2 on the first region; the rest is the nested double integral.
Decomposition eli20_decomposed(const EliRequest& req);

/// Any n >= 1 on the first region: cut = y Li_n(xq), rest through the log
/// kernel applied to the n = 1 bracket.
Decomposition eli_n0_decomposed(const EliRequest& req);

/// ELi_{1;1}; the pole of 1/(1 - z2 y q) inside the square is split off with
/// its residue when 1/q < y.
EvalResult eli11(const EliRequest& req);

/// -x ln(1 - yq): the logarithmic part of ELi_{1;1} for y on the cut.
Complex eli11_log_part(const EliRequest& req);

/// Residue of ELi_{0;0} in x at x = q^-n: -y^n / q^n.
Complex residue_x(int n, const Complex& y, const Complex& q, double tol);

/// The same residue built from Phi(1, y; q) and Phi(q, y; q).
struct ResidueChain {
  Complex phi_one, phi_q;
  Complex r;        // R_n
  Complex residue;  // q^-n y q/(1 - yq) R_n
  double err_estimate = 0.0;
};
ResidueChain residue_chain(int n, const Complex& y, const Complex& q, double tol);

/// Phi(q^k, y; q) = (1 - yq) sum_n q^{n(k+1)} / (1 - y q^{n+1}), k >= 0.
EvalResult phi_at_q_power(int k, const Complex& y, const Complex& q, double tol);

struct Depth2Request {
  int n1 = 0, n2 = 0, m1 = 0, m2 = 0;
  /// Power of (j1 k1 + j2 k2) in the denominator; 0 gives the product.
  int sigma = 1;
  Complex x1, x2, y1, y2, q;
  /// Side for integrand poles that land on the path.
  Side side = Side::none;
  double tol = 1e-10;
  bool parallel = true;
};

/// int_0^1 dz/z (-ln z)^{sigma-1}/(sigma-1)! ELi_{n1;m1}(x1, y1; zq) ELi_{n2;m2}(x2, y2; zq).
EvalResult eli_depth2(const Depth2Request& req);

/// E(x, y; q) = -sum_{j in Z} x^j ln(1 - y q^j) for 1 < |x| < 1/|q|.
EvalResult e_function(const Complex& x, const Complex& y, const Complex& q, double tol);

/// sum_{n>=0} [Li2(q^n x) - Li2(-q^n x)] - sum_{n>=1} [Li2(q^n/x) - Li2(-q^n/x)].
/// Terms landing on the dilogarithm cut take their side from x + side i0.
EvalResult e2hat(const Complex& x, const Complex& q, double tol, Side side = Side::none);

/// Eisenstein-Kronecker function F(xi, alpha, tau) with z = e(xi), u = e(alpha),
/// q = e(tau).
EvalResult ek_F(const Complex& xi, const Complex& alpha, const Complex& tau, double tol);

}  // namespace qell
