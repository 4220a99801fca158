#pragma once

#include "qell/complex.hpp"

namespace qell {

/// Running sum of a convergent series with the two-increment stopping rule:
/// the sum is accepted once two consecutive increments are small relative to
/// max(1, |partial sum|). "Small" accounts for the observed term ratio so that
/// the neglected geometric tail stays well inside the tolerance.
class SeriesSum {
 public:
  explicit SeriesSum(double tol) : tol_(tol) {}

  /// Adds `term`; true once the sum has converged.
  bool add(const Complex& term);

  const Complex& value() const { return sum_; }
  double last_increment() const { return last_; }
  long terms() const { return terms_; }

 private:
  Complex sum_;
  double tol_;
  double last_ = 0.0;
  double prev_ = -1.0;
  int small_run_ = 0;
  long terms_ = 0;
};

}  // namespace qell
