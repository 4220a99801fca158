#pragma once

#include <mpfr.h>

#include <string>
#include <type_traits>
#include <string_view>

namespace qell {

/// Thread-local working precision, in decimal digits. Every Real created on
/// a thread without an explicit precision picks this up.
class WorkingPrecision {
 public:
  static constexpr int kDefaultDigits = 32;
  static constexpr int kMinDigits = 16;

  static int digits();
  static mpfr_prec_t bits();
  static void set_digits(int digits);

  static mpfr_prec_t digits_to_bits(int digits);
};

/// Sets the working precision for the lifetime of the scope and restores the
/// previous value afterwards.
class PrecisionScope {
 public:
  explicit PrecisionScope(int digits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

/// Arbitrary precision real backed by an mpfr_t. Arithmetic results carry the
/// smaller precision of the two operands.
class Real {
 public:
  Real();
  Real(double v);  // NOLINT(google-explicit-constructor)
  Real(int v);     // NOLINT(google-explicit-constructor)
  Real(long v);    // NOLINT(google-explicit-constructor)
  explicit Real(std::string_view decimal);

  static Real with_precision(mpfr_prec_t bits);
  /// Copy rounded (or zero-extended) to `bits`.
  Real at_precision(mpfr_prec_t bits) const;
  /// Copy at the current working precision.
  Real widened() const { return at_precision(WorkingPrecision::bits()); }

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(value_, MPFR_RNDN); }
  /// Decimal rendering with `digits` significant digits (0 = full precision).
  std::string to_string(int digits = 0) const;

  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);

  static Real pi();
  /// 2^(1-p) at the working precision p.
  static Real epsilon();

 private:
  struct Uninit {};
  Real(Uninit, mpfr_prec_t bits);

  mpfr_t value_;

  friend Real operator-(const Real& a);
  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real abs(const Real& a);
  friend Real sqrt(const Real& a);
  friend Real exp(const Real& a);
  friend Real log(const Real& a);
  friend Real log1p(const Real& a);
  friend Real sin(const Real& a);
  friend Real cos(const Real& a);
  friend Real sinh(const Real& a);
  friend Real cosh(const Real& a);
  friend Real tanh(const Real& a);
  friend Real atan2(const Real& y, const Real& x);
  friend Real hypot(const Real& a, const Real& b);
  friend Real pow(const Real& a, const Real& b);
  friend Real pow(const Real& a, long n);
  friend Real floor(const Real& a);
  friend Real zeta(unsigned long n);
  friend Real ldexp(const Real& a, long e);
};

Real operator-(const Real& a);
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);

bool operator==(const Real& a, const Real& b);
bool operator!=(const Real& a, const Real& b);
bool operator<(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);

// Builtin scalars convert through Real; these exact matches keep mixed
// expressions unambiguous next to the Complex overloads.
template <class T>
  requires std::is_arithmetic_v<T>
Real operator+(const Real& a, T b) { return a + Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator+(T a, const Real& b) { return Real(a) + b; }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator-(const Real& a, T b) { return a - Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator-(T a, const Real& b) { return Real(a) - b; }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator*(const Real& a, T b) { return a * Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator*(T a, const Real& b) { return Real(a) * b; }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator/(const Real& a, T b) { return a / Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
Real operator/(T a, const Real& b) { return Real(a) / b; }
template <class T>
  requires std::is_arithmetic_v<T>
bool operator==(const Real& a, T b) { return a == Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
bool operator!=(const Real& a, T b) { return a != Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
bool operator<(const Real& a, T b) { return a < Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
bool operator<=(const Real& a, T b) { return a <= Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
bool operator>(const Real& a, T b) { return a > Real(b); }
template <class T>
  requires std::is_arithmetic_v<T>
bool operator>=(const Real& a, T b) { return a >= Real(b); }

Real abs(const Real& a);
Real sqrt(const Real& a);
Real exp(const Real& a);
Real log(const Real& a);
Real log1p(const Real& a);
Real sin(const Real& a);
Real cos(const Real& a);
Real sinh(const Real& a);
Real cosh(const Real& a);
Real tanh(const Real& a);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& a, const Real& b);
Real pow(const Real& a, const Real& b);
Real pow(const Real& a, long n);
Real floor(const Real& a);
/// Riemann zeta at a positive integer.
Real zeta(unsigned long n);
/// a * 2^e
Real ldexp(const Real& a, long e);

}  // namespace qell
