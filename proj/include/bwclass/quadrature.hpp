#pragma once

#include <functional>
#include <limits>

namespace bwclass {

//! A real interval; either end may be infinite.
struct Interval
{
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval whole_line() { return {}; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool finite() const;
};

//! Adaptive Gauss-Kronrod (61-point) integral of `f` over [a, b].
//!
//! Either limit may be infinite. Throws NumericError when the error estimate
//! exceeds `abs_tol`.
double
integrate(const std::function<double(double)>& f,
          double a,
          double b,
          double abs_tol = 1e-10);

} // namespace bwclass
