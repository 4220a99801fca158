#include "qell/real.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qell {

namespace {

thread_local int tl_digits = WorkingPrecision::kDefaultDigits;

// Result precision: never more than either operand carries.
mpfr_prec_t joint(mpfr_srcptr a, mpfr_srcptr b) {
  return std::min(mpfr_get_prec(a), mpfr_get_prec(b));
}

}  // namespace

int WorkingPrecision::digits() { return tl_digits; }

mpfr_prec_t WorkingPrecision::bits() { return digits_to_bits(tl_digits); }

void WorkingPrecision::set_digits(int digits) {
  if (digits < kMinDigits) {
    throw std::invalid_argument("working precision must be at least 16 digits");
  }
  tl_digits = digits;
}

mpfr_prec_t WorkingPrecision::digits_to_bits(int digits) {
  // log2(10) = 3.3219...; eight guard bits on top.
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

PrecisionScope::PrecisionScope(int digits) : saved_(tl_digits) {
  WorkingPrecision::set_digits(digits);
}

PrecisionScope::~PrecisionScope() { tl_digits = saved_; }

Real::Real() : Real(Uninit{}, WorkingPrecision::bits()) {
  mpfr_set_zero(value_, 1);
}

Real::Real(double v) : Real(Uninit{}, WorkingPrecision::bits()) {
  mpfr_set_d(value_, v, MPFR_RNDN);
}

Real::Real(int v) : Real(Uninit{}, WorkingPrecision::bits()) {
  mpfr_set_si(value_, v, MPFR_RNDN);
}

Real::Real(long v) : Real(Uninit{}, WorkingPrecision::bits()) {
  mpfr_set_si(value_, v, MPFR_RNDN);
}

Real::Real(std::string_view decimal) : Real(Uninit{}, WorkingPrecision::bits()) {
  // The delegated constructor has completed, so the destructor cleans up if
  // we throw here.
  std::string text(decimal);
  char* end = nullptr;
  if (!text.empty()) mpfr_strtofr(value_, text.c_str(), &end, 10, MPFR_RNDN);
  if (text.empty() || end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("not a real number: '" + text + "'");
  }
}

Real Real::with_precision(mpfr_prec_t bits) {
  Real r(Uninit{}, bits);
  mpfr_set_zero(r.value_, 1);
  return r;
}

Real Real::at_precision(mpfr_prec_t bits) const {
  Real r(Uninit{}, bits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

Real::Real(Uninit, mpfr_prec_t bits) { mpfr_init2(value_, bits); }

Real::Real(const Real& other) : Real(Uninit{}, other.precision()) {
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : Real(Uninit{}, MPFR_PREC_MIN) {
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::to_string(int digits) const {
  if (digits <= 0) {
    digits = static_cast<int>(std::floor(static_cast<double>(precision() - 8) * 0.30102999566398120));
    digits = std::max(digits, 1);
  }
  int len = mpfr_snprintf(nullptr, 0, "%.*Rg", digits, value_);
  std::vector<char> buf(static_cast<size_t>(len) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real Real::pi() {
  Real r(Uninit{}, WorkingPrecision::bits());
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

Real Real::epsilon() {
  Real r(Uninit{}, WorkingPrecision::bits());
  mpfr_set_ui_2exp(r.value_, 1, 1 - static_cast<long>(WorkingPrecision::bits()), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(Real::Uninit{}, a.precision());
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

#define QELL_BINARY(op, fn)                           \
  Real operator op(const Real& a, const Real& b) {    \
    Real r(Real::Uninit{}, joint(a.value_, b.value_)); \
    fn(r.value_, a.value_, b.value_, MPFR_RNDN);      \
    return r;                                         \
  }
QELL_BINARY(+, mpfr_add)
QELL_BINARY(-, mpfr_sub)
QELL_BINARY(*, mpfr_mul)
QELL_BINARY(/, mpfr_div)
#undef QELL_BINARY

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
bool operator!=(const Real& a, const Real& b) { return !(a == b); }
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }

#define QELL_UNARY(name, fn)                   \
  Real name(const Real& a) {                   \
    Real r(Real::Uninit{}, a.precision());     \
    fn(r.value_, a.value_, MPFR_RNDN);         \
    return r;                                  \
  }
QELL_UNARY(abs, mpfr_abs)
QELL_UNARY(sqrt, mpfr_sqrt)
QELL_UNARY(exp, mpfr_exp)
QELL_UNARY(log, mpfr_log)
QELL_UNARY(log1p, mpfr_log1p)
QELL_UNARY(sin, mpfr_sin)
QELL_UNARY(cos, mpfr_cos)
QELL_UNARY(sinh, mpfr_sinh)
QELL_UNARY(cosh, mpfr_cosh)
QELL_UNARY(tanh, mpfr_tanh)
#undef QELL_UNARY

Real atan2(const Real& y, const Real& x) {
  Real r(Real::Uninit{}, joint(y.value_, x.value_));
  mpfr_atan2(r.value_, y.value_, x.value_, MPFR_RNDN);
  return r;
}

Real hypot(const Real& a, const Real& b) {
  Real r(Real::Uninit{}, joint(a.value_, b.value_));
  mpfr_hypot(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real pow(const Real& a, const Real& b) {
  Real r(Real::Uninit{}, joint(a.value_, b.value_));
  mpfr_pow(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real pow(const Real& a, long n) {
  Real r(Real::Uninit{}, a.precision());
  mpfr_pow_si(r.value_, a.value_, n, MPFR_RNDN);
  return r;
}

Real floor(const Real& a) {
  Real r(Real::Uninit{}, a.precision());
  mpfr_floor(r.value_, a.value_);
  return r;
}

Real zeta(unsigned long n) {
  Real r(Real::Uninit{}, WorkingPrecision::bits());
  mpfr_zeta_ui(r.value_, n, MPFR_RNDN);
  return r;
}

Real ldexp(const Real& a, long e) {
  Real r(Real::Uninit{}, a.precision());
  mpfr_mul_2si(r.value_, a.value_, e, MPFR_RNDN);
  return r;
}

}  // namespace qell
