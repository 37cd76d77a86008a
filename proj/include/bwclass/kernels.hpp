#pragma once

#include "bwclass/random.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bwclass {

enum class KernelId
{
  Triweight,
  Biweight,
  Epanechnikov
};

//! Symmetric compactly supported polynomial kernel.
//!
//! On (-s, s) the kernel is K(u) = sum_k c_k (u/s)^(2k) / s, and zero outside.
//! All built-ins have s = 1. Moments and squared-derivative functionals are
//! exact polynomial integrals.
class Kernel
{
public:
  static Kernel triweight();
  static Kernel biweight();
  static Kernel epanechnikov();
  static Kernel from_id(KernelId id);

  KernelId id() const { return id_; }
  std::string_view name() const;
  double support_halfwidth() const { return halfwidth_; }
  //! Coefficients of the interior polynomial in powers of u^2.
  const std::vector<double>& poly_coeffs() const { return even_coeffs_; }

  double operator()(double u) const { return eval(u); }
  double eval(double u) const
  {
    if (u >= halfwidth_ || u <= -halfwidth_)
      return 0.0;
    const double v = u * u;
    double acc = 0.0;
    for (auto it = even_coeffs_.rbegin(); it != even_coeffs_.rend(); ++it)
      acc = acc * v + *it;
    // Horner cancellation can dip below zero next to the support edge.
    return acc > 0.0 ? acc : 0.0;
  }

  //! K(0); the envelope constant of the rejection sampler.
  double peak() const { return even_coeffs_.front(); }

  //! j-th moment int u^j K(u) du (j <= 8). Odd moments are exactly zero.
  double moment(int j) const;
  //! R(K^(r)) = int (K^(r))^2 over the open support, r <= 4.
  double roughness(int r) const;
  //! r-th derivative of the interior polynomial; zero outside the support.
  double derivative(int r, double u) const;
  //! int_{-s}^{u} K.
  double cdf(double u) const;
  //! One variate with density K (rejection from the uniform envelope).
  double sample(Rng& rng) const;

private:
  Kernel(KernelId id, std::vector<double> even_coeffs);

  KernelId id_;
  double halfwidth_ = 1.0;
  std::vector<double> even_coeffs_;
  std::vector<double> full_coeffs_; // ascending powers of u
};

KernelId
parse_kernel_id(std::string_view name);

} // namespace bwclass
