#pragma once

#include "bwclass/densities.hpp"
#include "bwclass/kernels.hpp"
#include "bwclass/random.hpp"

#include <span>
#include <utility>
#include <vector>

namespace bwclass {

//! Fixed-bandwidth kernel density estimate over sorted data.
class Kde
{
public:
  Kde(std::vector<double> data, double h, Kernel kernel = Kernel::triweight());

  double operator()(double x) const { return eval(x); }
  //! (1/(m h)) sum_i K((x - X_i)/h), visiting only points within h s of x.
  double eval(double x) const;
  //! Same estimate with sorted-data index `omit` removed (divisor m - 1).
  double eval_loo(std::size_t omit, double x) const;
  //! Unnormalised kernel sum sum_i K((x - X_i)/h).
  double kernel_sum(double x) const;
  //! Evaluates at ascending points with a sliding window; out[i] = eval(xs[i]).
  void eval_sorted(std::span<const double> xs, std::span<double> out) const;

  const std::vector<double>& data() const { return data_; }
  std::size_t size() const { return data_.size(); }
  double bandwidth() const { return h_; }
  const Kernel& kernel() const { return kernel_; }
  //! h * support halfwidth.
  double radius() const { return h_ * kernel_.support_halfwidth(); }
  double support_lo() const { return data_.front() - radius(); }
  double support_hi() const { return data_.back() + radius(); }

private:
  std::vector<double> data_;
  double h_;
  Kernel kernel_;
};

struct KdeMoments
{
  double mean;
  double variance;
};

//! Exact E fhat(y) and Var fhat(y) for `count` i.i.d. draws from `density`.
KdeMoments
kde_mean_var(const Density& density,
             double h,
             std::size_t count,
             double y,
             const Kernel& kernel = Kernel::triweight());

KdeMoments
kde_mean_var(const DensityPair& pair,
             Population which,
             double h,
             std::size_t count,
             double y,
             const Kernel& kernel = Kernel::triweight());

//! Draws data_J + h eps with J uniform and eps ~ K; the draws have the KDE as
//! their exact density.
std::vector<double>
smoothed_bootstrap(const Kde& est, std::size_t count, Rng& rng);

} // namespace bwclass
