#pragma once

#include <complex>
#include <random>

#include "doctest.h"
#include "qell/complex.hpp"
#include "qell/result.hpp"

namespace qtest {

using qell::Complex;
using qell::Real;

inline double rel_err(const Complex& got, const Complex& want) {
  return qell::magnitude(got - want) / std::max(1.0, qell::magnitude(want));
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline Complex cx(std::complex<double> z) { return Complex(z.real(), z.imag()); }

inline std::complex<double> random_disc(std::mt19937_64& rng, double r_min, double r_max) {
  std::uniform_real_distribution<double> r(r_min, r_max), t(-3.14159265358979, 3.14159265358979);
  return std::polar(r(rng), t(rng));
}

}  // namespace qtest
