#include "bwclass/quadrature.hpp"

#include "bwclass/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace bwclass {

bool
Interval::finite() const
{
  return std::isfinite(lo) && std::isfinite(hi);
}

double
integrate(const std::function<double(double)>& f,
          double a,
          double b,
          double abs_tol)
{
  if (a == b)
    return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  double l1 = 0.0;
  // Boost's tolerance is relative to the L1 norm; a one-rule pass estimates
  // that norm so the absolute target can be translated. Depth is capped
  // because a target below rounding noise would split 2^depth times.
  gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &error, &l1);
  const double rel_tol = std::max(1e-13, 0.1 * abs_tol / std::max(l1, 1e-300));
  const double value =
    gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > abs_tol) {
    throw NumericError("quadrature on [" + std::to_string(a) + ", " +
                       std::to_string(b) + "] reached error estimate " +
                       std::to_string(error) + " > " + std::to_string(abs_tol));
  }
  return value;
}

} // namespace bwclass
