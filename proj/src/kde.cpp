#include "bwclass/kde.hpp"

#include "bwclass/error.hpp"
#include "bwclass/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bwclass {

Kde::Kde(std::vector<double> data, double h, Kernel kernel)
  : data_(std::move(data))
  , h_(h)
  , kernel_(std::move(kernel))
{
  if (data_.empty())
    throw ParameterError("KDE needs at least one data point");
  if (!(h_ > 0.0) || !std::isfinite(h_))
    throw ParameterError("KDE bandwidth must be positive");
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); }))
    throw ParameterError("KDE data must be finite");
  std::sort(data_.begin(), data_.end());
}

double
Kde::kernel_sum(double x) const
{
  const double r = radius();
  auto first = std::lower_bound(data_.begin(), data_.end(), x - r);
  const double inv_h = 1.0 / h_;
  double acc = 0.0;
  for (auto it = first; it != data_.end() && *it <= x + r; ++it)
    acc += kernel_.eval((x - *it) * inv_h);
  return acc;
}

double
Kde::eval(double x) const
{
  return kernel_sum(x) / (static_cast<double>(data_.size()) * h_);
}

double
Kde::eval_loo(std::size_t omit, double x) const
{
  if (data_.size() < 2)
    throw ParameterError("leave-one-out estimate needs at least two points");
  if (omit >= data_.size())
    throw ParameterError("leave-one-out index out of range");
  const double sum = kernel_sum(x) - kernel_.eval((x - data_[omit]) / h_);
  return std::max(sum, 0.0) / (static_cast<double>(data_.size() - 1) * h_);
}

void
Kde::eval_sorted(std::span<const double> xs, std::span<double> out) const
{
  const double r = radius();
  const double inv_h = 1.0 / h_;
  const double norm = 1.0 / (static_cast<double>(data_.size()) * h_);
  std::size_t lo = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    while (lo < data_.size() && data_[lo] < x - r)
      ++lo;
    double acc = 0.0;
    for (std::size_t j = lo; j < data_.size() && data_[j] <= x + r; ++j)
      acc += kernel_.eval((x - data_[j]) * inv_h);
    out[i] = acc * norm;
  }
}

KdeMoments
kde_mean_var(const Density& density,
             double h,
             std::size_t count,
             double y,
             const Kernel& kernel)
{
  if (!(h > 0.0))
    throw ParameterError("bandwidth must be positive");
  if (count == 0)
    throw ParameterError("sample size must be positive");
  const double s = kernel.support_halfwidth();
  // Substitute u = y - h v so the integrals run over the kernel support.
  const double mean = integrate(
    [&](double v) { return kernel.eval(v) * density.pdf(y - h * v); }, -s, s, 1e-10);
  const double second = integrate(
    [&](double v) {
      const double k = kernel.eval(v);
      return k * k * density.pdf(y - h * v);
    },
    -s,
    s,
    1e-10);
  const double variance = (second / h - mean * mean) / static_cast<double>(count);
  return { mean, variance };
}

KdeMoments
kde_mean_var(const DensityPair& pair,
             Population which,
             double h,
             std::size_t count,
             double y,
             const Kernel& kernel)
{
  return kde_mean_var(pair.density(which), h, count, y, kernel);
}

std::vector<double>
smoothed_bootstrap(const Kde& est, std::size_t count, Rng& rng)
{
  const auto& data = est.data();
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::vector<double> out(count);
  for (auto& v : out) {
    const double centre = data[pick(rng)];
    v = centre + est.bandwidth() * est.kernel().sample(rng);
  }
  return out;
}

} // namespace bwclass
