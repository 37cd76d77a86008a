#include "bwclass/classifier.hpp"

#include "bwclass/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bwclass {

Label
classify_a0(const DensityPair& pair, double x)
{
  const double d = pair.delta(x);
  if (d > 0.0)
    return { Population::F, DecisionPath::Body };
  if (d < 0.0)
    return { Population::G, DecisionPath::Body };
  return { Population::F, DecisionPath::TieBreak };
}

namespace {

double
lower_median(std::vector<double> values)
{
  const auto k = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

} // namespace

TrainedClassifier::TrainedClassifier(std::vector<double> x_sample,
                                     std::vector<double> y_sample,
                                     double h1,
                                     double h2,
                                     double p,
                                     Kernel kernel)
  : fhat_(std::move(x_sample), h1, kernel)
  , ghat_(std::move(y_sample), h2, kernel)
  , p_(p)
{
  if (!(p > 0.0 && p < 1.0))
    throw ParameterError("prior p must lie in (0, 1)");
  std::vector<double> pooled = fhat_.data();
  pooled.insert(pooled.end(), ghat_.data().begin(), ghat_.data().end());
  median_ = lower_median(std::move(pooled));
}

std::optional<Label>
TrainedClassifier::classify_a1(double x) const
{
  const double fv = fhat_(x);
  const double gv = ghat_(x);
  if (fv == 0.0 && gv == 0.0)
    return std::nullopt;
  return sign_rule(fv, gv, p_);
}

std::optional<std::pair<double, Population>>
TrainedClassifier::right_endpoint_below(double x) const
{
  std::optional<std::pair<double, Population>> best;
  const auto scan = [&](const Kde& est, Population who) {
    const auto& d = est.data();
    // Largest X_i with X_i + r <= x.
    auto it = std::upper_bound(d.begin(), d.end(), x - est.radius());
    while (it != d.begin()) {
      const double end = *std::prev(it) + est.radius();
      if (end <= x) {
        if (!best || end > best->first)
          best = { end, who };
        return;
      }
      --it;
    }
  };
  scan(ghat_, Population::G);
  // X is scanned last and wins exact ties.
  const auto y_best = best;
  best.reset();
  scan(fhat_, Population::F);
  if (!best || (y_best && y_best->first > best->first))
    best = y_best;
  return best;
}

std::optional<std::pair<double, Population>>
TrainedClassifier::left_endpoint_above(double x) const
{
  const auto scan = [&](const Kde& est) -> std::optional<double> {
    const auto& d = est.data();
    // Smallest X_i with X_i - r >= x.
    auto it = std::lower_bound(d.begin(), d.end(), x + est.radius());
    for (; it != d.end(); ++it) {
      const double start = *it - est.radius();
      if (start >= x)
        return start;
    }
    return std::nullopt;
  };
  const auto fx = scan(fhat_);
  const auto gy = scan(ghat_);
  if (fx && (!gy || *fx <= *gy))
    return std::pair{ *fx, Population::F };
  if (gy)
    return std::pair{ *gy, Population::G };
  return std::nullopt;
}

Label
TrainedClassifier::classify_tail(double x, Side side) const
{
  if (side == Side::Right) {
    const auto end = right_endpoint_below(x);
    if (!end)
      throw EmptyTailError("no training support ends at or left of x");
    return { end->second, DecisionPath::TailRight };
  }
  const auto start = left_endpoint_above(x);
  if (!start)
    throw EmptyTailError("no training support starts at or right of x");
  return { start->second, DecisionPath::TailLeft };
}

Label
TrainedClassifier::classify(double x) const
{
  if (auto label = classify_a1(x))
    return *label;
  return classify_tail(x, x > median_ ? Side::Right : Side::Left);
}

MultiPopulationClassifier::MultiPopulationClassifier(std::vector<std::vector<double>> samples,
                                                     std::vector<double> bandwidths,
                                                     std::vector<double> priors,
                                                     Kernel kernel)
  : priors_(std::move(priors))
{
  if (samples.size() < 2)
    throw ParameterError("multi-population rule needs N >= 2");
  if (bandwidths.size() != samples.size() || priors_.size() != samples.size())
    throw ParameterError("samples, bandwidths and priors must have equal length");
  double total = 0.0;
  for (double p : priors_) {
    if (!(p >= 0.0))
      throw ParameterError("priors must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ParameterError("priors must sum to 1");
  estimates_.reserve(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j)
    estimates_.emplace_back(std::move(samples[j]), bandwidths[j], kernel);
}

std::vector<double>
MultiPopulationClassifier::weighted_estimates(double x) const
{
  std::vector<double> out(estimates_.size());
  for (std::size_t j = 0; j < estimates_.size(); ++j)
    out[j] = priors_[j] * estimates_[j](x);
  return out;
}

std::optional<std::size_t>
MultiPopulationClassifier::classify(double x) const
{
  bool any = false;
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t j = 0; j < estimates_.size(); ++j) {
    const double est = estimates_[j](x);
    if (est != 0.0)
      any = true;
    const double v = priors_[j] * est;
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  if (!any)
    return std::nullopt;
  return best;
}

double
spherical_normaliser(const Kernel& kernel, std::size_t dim)
{
  if (dim == 0)
    throw ParameterError("dimension must be at least 1");
  if (dim == 1)
    return 1.0;
  // int_{R^d} K(|u|) du = S_{d-1} int_0^s K(r) r^(d-1) dr, with the radial
  // integral taken term by term on the even polynomial.
  const double s = kernel.support_halfwidth();
  const auto& c = kernel.poly_coeffs();
  double radial = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double power = static_cast<double>(2 * k + dim);
    radial += c[k] * std::pow(s, power) / power;
  }
  const double half_d = 0.5 * static_cast<double>(dim);
  const double sphere = 2.0 * std::pow(std::numbers::pi, half_d) / std::tgamma(half_d);
  return 1.0 / (sphere * radial);
}

MultivariateClassifier::MultivariateClassifier(PointCloud x_sample,
                                               PointCloud y_sample,
                                               double h1,
                                               double h2,
                                               double p,
                                               Kernel kernel)
  : x_(std::move(x_sample))
  , y_(std::move(y_sample))
  , h1_(h1)
  , h2_(h2)
  , p_(p)
  , kernel_(std::move(kernel))
{
  if (x_.dim == 0 || x_.dim != y_.dim)
    throw ParameterError("samples must share a positive dimension");
  if (x_.values.size() % x_.dim != 0 || y_.values.size() % y_.dim != 0)
    throw ParameterError("sample storage is not a whole number of rows");
  if (x_.size() == 0 || y_.size() == 0)
    throw ParameterError("samples must be nonempty");
  if (!(h1 > 0.0 && h2 > 0.0))
    throw ParameterError("bandwidths must be positive");
  if (!(p > 0.0 && p < 1.0))
    throw ParameterError("prior p must lie in (0, 1)");
  norm_ = spherical_normaliser(kernel_, x_.dim);
}

double
MultivariateClassifier::estimate(const PointCloud& cloud, double h, std::span<const double> x) const
{
  if (x.size() != cloud.dim)
    throw ParameterError("query dimension does not match the training samples");
  double acc = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto row = cloud.row(i);
    double sq = 0.0;
    for (std::size_t k = 0; k < cloud.dim; ++k) {
      const double diff = (x[k] - row[k]) / h;
      sq += diff * diff;
    }
    acc += kernel_.eval(std::sqrt(sq));
  }
  return norm_ * acc /
         (static_cast<double>(cloud.size()) * std::pow(h, static_cast<double>(cloud.dim)));
}

std::optional<Label>
MultivariateClassifier::classify(std::span<const double> x) const
{
  const double fv = fhat(x);
  const double gv = ghat(x);
  if (fv == 0.0 && gv == 0.0)
    return std::nullopt;
  return sign_rule(fv, gv, p_);
}

} // namespace bwclass
