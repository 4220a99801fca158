#pragma once

#include <complex>
#include <concepts>
#include <string>

#include "qell/real.hpp"

namespace qell {

/// Complex number over Real. Branch cuts follow the principal conventions:
/// arg in (-pi, pi], and a point on the negative real axis has arg = +pi
/// regardless of the sign of its zero imaginary part.
class Complex {
 public:
  Complex() = default;
  Complex(const Real& re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  Complex(const Real& re, const Real& im) : re_(re), im_(im) {}
  Complex(double re, double im = 0.0) : re_(re), im_(im) {}  // NOLINT
  Complex(int re) : re_(re) {}                                // NOLINT

  const Real& real() const { return re_; }
  const Real& imag() const { return im_; }

  Complex& operator+=(const Complex& rhs);
  Complex& operator-=(const Complex& rhs);
  Complex& operator*=(const Complex& rhs);
  Complex& operator/=(const Complex& rhs);

  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  std::complex<double> to_std() const { return {re_.to_double(), im_.to_double()}; }
  std::string to_string(int digits = 0) const;

  static Complex i() { return Complex(Real(0), Real(1)); }

 private:
  Real re_;
  Real im_;
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator+(const Complex& a, const Real& b);
Complex operator-(const Complex& a, const Real& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Real& a, const Complex& b);
Complex operator-(const Real& a, const Complex& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Real& a, const Complex& b);

// Builtin scalars go through Real so that `z + 1` or `2.0 * z` is unambiguous.
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator+(const Complex& a, T b) { return a + Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator-(const Complex& a, T b) { return a - Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator*(const Complex& a, T b) { return a * Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator/(const Complex& a, T b) { return a / Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator+(T a, const Complex& b) { return Real(a) + b; }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator-(T a, const Complex& b) { return Real(a) - b; }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator*(T a, const Complex& b) { return Real(a) * b; }
template <class T>
  requires std::is_arithmetic_v<T>
Complex operator/(T a, const Complex& b) { return Real(a) / b; }

bool operator==(const Complex& a, const Complex& b);
bool operator!=(const Complex& a, const Complex& b);

Real abs(const Complex& z);
Real norm(const Complex& z);
Real arg(const Complex& z);
Complex conj(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex pow(const Complex& z, long n);
Complex pow(const Complex& z, const Complex& w);
Complex polar(const Real& r, const Real& theta);

/// Copy at the current working precision.
inline Complex widened(const Complex& z) { return {z.real().widened(), z.imag().widened()}; }

/// exp(2 pi i w)
Complex e2pii(const Complex& w);

}  // namespace qell
