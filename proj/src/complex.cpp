#include "qell/complex.hpp"

namespace qell {

Complex& Complex::operator+=(const Complex& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& rhs) {
  *this = *this * rhs;
  return *this;
}

Complex& Complex::operator/=(const Complex& rhs) {
  *this = *this / rhs;
  return *this;
}

std::string Complex::to_string(int digits) const {
  std::string s = re_.to_string(digits);
  std::string t = im_.to_string(digits);
  if (!t.empty() && t[0] != '-') s += '+';
  return s + t + "i";
}

Complex operator-(const Complex& a) { return {-a.real(), -a.imag()}; }

Complex operator+(const Complex& a, const Complex& b) {
  return {a.real() + b.real(), a.imag() + b.imag()};
}

Complex operator-(const Complex& a, const Complex& b) {
  return {a.real() - b.real(), a.imag() - b.imag()};
}

Complex operator*(const Complex& a, const Complex& b) {
  if (b.imag().is_zero()) return a * b.real();
  if (a.imag().is_zero()) return a.real() * b;
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

Complex operator/(const Complex& a, const Complex& b) {
  if (b.imag().is_zero()) return a / b.real();
  // Smith's scaling keeps the intermediate products in range.
  if (abs(b.real()) >= abs(b.imag())) {
    Real r = b.imag() / b.real();
    Real d = b.real() + b.imag() * r;
    return {(a.real() + a.imag() * r) / d, (a.imag() - a.real() * r) / d};
  }
  Real r = b.real() / b.imag();
  Real d = b.real() * r + b.imag();
  return {(a.real() * r + a.imag()) / d, (a.imag() * r - a.real()) / d};
}

Complex operator+(const Complex& a, const Real& b) { return {a.real() + b, a.imag()}; }
Complex operator-(const Complex& a, const Real& b) { return {a.real() - b, a.imag()}; }
Complex operator*(const Complex& a, const Real& b) { return {a.real() * b, a.imag() * b}; }
Complex operator/(const Complex& a, const Real& b) { return {a.real() / b, a.imag() / b}; }
Complex operator+(const Real& a, const Complex& b) { return {a + b.real(), b.imag()}; }
Complex operator-(const Real& a, const Complex& b) { return {a - b.real(), -b.imag()}; }
Complex operator*(const Real& a, const Complex& b) { return {a * b.real(), a * b.imag()}; }
Complex operator/(const Real& a, const Complex& b) { return Complex(a) / b; }

bool operator==(const Complex& a, const Complex& b) {
  return a.real() == b.real() && a.imag() == b.imag();
}
bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

Real abs(const Complex& z) { return hypot(z.real(), z.imag()); }

Real norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

Real arg(const Complex& z) {
  if (z.imag().is_zero()) {
    if (z.real().sign() < 0) return Real::pi();
    return Real(0);
  }
  return atan2(z.imag(), z.real());
}

Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }

Complex exp(const Complex& z) {
  Real m = exp(z.real());
  if (z.imag().is_zero()) return Complex(m);
  return {m * cos(z.imag()), m * sin(z.imag())};
}

Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

Complex sqrt(const Complex& z) {
  if (z.is_zero()) return Complex();
  Real r = abs(z);
  Real t = sqrt((r + abs(z.real())) / 2);
  if (z.real().sign() >= 0) return {t, z.imag() / (2 * t)};
  Real im = z.imag().sign() < 0 ? -t : t;
  return {abs(z.imag()) / (2 * t), im};
}

Complex sin(const Complex& z) {
  return {sin(z.real()) * cosh(z.imag()), cos(z.real()) * sinh(z.imag())};
}

Complex cos(const Complex& z) {
  return {cos(z.real()) * cosh(z.imag()), -(sin(z.real()) * sinh(z.imag()))};
}

Complex pow(const Complex& z, long n) {
  if (n < 0) return Real(1) / pow(z, -n);
  Complex result(1);
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Complex pow(const Complex& z, const Complex& w) {
  if (w.is_zero()) return Complex(1);
  if (z.is_zero()) return Complex();
  return exp(w * log(z));
}

Complex polar(const Real& r, const Real& theta) { return {r * cos(theta), r * sin(theta)}; }

Complex e2pii(const Complex& w) {
  Real two_pi = 2 * Real::pi();
  return exp(Complex(-(two_pi * w.imag()), two_pi * w.real()));
}

}  // namespace qell
