#include "qell/series.hpp"

#include <algorithm>

#include "qell/result.hpp"

namespace qell {

bool SeriesSum::add(const Complex& term) {
  sum_ += term;
  ++terms_;
  double mag = magnitude(term);
  double ratio = 0.0;
  if (prev_ > 0.0) ratio = std::clamp(mag / prev_, 0.0, 0.999);
  prev_ = mag;
  last_ = mag;
  double tail = mag / (1.0 - ratio);
  double scale = std::max(1.0, magnitude(sum_));
  if (tail <= 0.1 * tol_ * scale) {
    ++small_run_;
  } else {
    small_run_ = 0;
  }
  return small_run_ >= 2;
}

}  // namespace qell
