#include "bwclass/kernels.hpp"

#include "bwclass/error.hpp"

#include <cmath>
#include <string>

namespace bwclass {

namespace {

std::vector<double>
differentiate(std::vector<double> c, int times)
{
  for (int t = 0; t < times; ++t) {
    if (c.size() <= 1)
      return { 0.0 };
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k)
      d[k - 1] = static_cast<double>(k) * c[k];
    c = std::move(d);
  }
  return c;
}

double
horner(const std::vector<double>& c, double u)
{
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * u + *it;
  return acc;
}

// int_{-1}^{1} u^k du
double
symmetric_power_integral(std::size_t k)
{
  return (k % 2 == 1) ? 0.0 : 2.0 / static_cast<double>(k + 1);
}

} // namespace

Kernel::Kernel(KernelId id, std::vector<double> even_coeffs)
  : id_(id)
  , even_coeffs_(std::move(even_coeffs))
{
  full_coeffs_.assign(2 * even_coeffs_.size() - 1, 0.0);
  for (std::size_t k = 0; k < even_coeffs_.size(); ++k)
    full_coeffs_[2 * k] = even_coeffs_[k];
}

Kernel
Kernel::triweight()
{
  constexpr double c = 35.0 / 32.0;
  return Kernel(KernelId::Triweight, { c, -3.0 * c, 3.0 * c, -c });
}

Kernel
Kernel::biweight()
{
  constexpr double c = 15.0 / 16.0;
  return Kernel(KernelId::Biweight, { c, -2.0 * c, c });
}

Kernel
Kernel::epanechnikov()
{
  return Kernel(KernelId::Epanechnikov, { 0.75, -0.75 });
}

Kernel
Kernel::from_id(KernelId id)
{
  switch (id) {
    case KernelId::Triweight:
      return triweight();
    case KernelId::Biweight:
      return biweight();
    case KernelId::Epanechnikov:
      return epanechnikov();
  }
  throw ParameterError("unknown kernel id");
}

std::string_view
Kernel::name() const
{
  switch (id_) {
    case KernelId::Triweight:
      return "triweight";
    case KernelId::Biweight:
      return "biweight";
    case KernelId::Epanechnikov:
      return "epanechnikov";
  }
  return "unknown";
}

double
Kernel::moment(int j) const
{
  if (j < 0 || j > 8)
    throw ParameterError("kernel moment order must lie in [0, 8]");
  if (j % 2 == 1)
    return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < full_coeffs_.size(); ++k)
    acc += full_coeffs_[k] * symmetric_power_integral(k + static_cast<std::size_t>(j));
  return acc;
}

double
Kernel::roughness(int r) const
{
  if (r < 0 || r > 4)
    throw ParameterError("kernel roughness order must lie in [0, 4]");
  const auto d = differentiate(full_coeffs_, r);
  // Square the derivative polynomial, then integrate term by term.
  std::vector<double> sq(2 * d.size() - 1, 0.0);
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = 0; b < d.size(); ++b)
      sq[a + b] += d[a] * d[b];
  double acc = 0.0;
  for (std::size_t k = 0; k < sq.size(); ++k)
    acc += sq[k] * symmetric_power_integral(k);
  return acc;
}

double
Kernel::derivative(int r, double u) const
{
  if (r < 0)
    throw ParameterError("derivative order must be nonnegative");
  if (std::abs(u) >= halfwidth_)
    return 0.0;
  return horner(differentiate(full_coeffs_, r), u);
}

double
Kernel::cdf(double u) const
{
  if (u <= -halfwidth_)
    return 0.0;
  if (u >= halfwidth_)
    return 1.0;
  // Antiderivative evaluated from -1; odd powers only, so F(u) = 1/2 + P(u).
  double acc = 0.0;
  for (std::size_t k = 0; k < full_coeffs_.size(); ++k)
    acc += full_coeffs_[k] * std::pow(u, static_cast<double>(k + 1)) /
           static_cast<double>(k + 1);
  return 0.5 + acc;
}

double
Kernel::sample(Rng& rng) const
{
  std::uniform_real_distribution<double> horizontal(-halfwidth_, halfwidth_);
  std::uniform_real_distribution<double> vertical(0.0, peak());
  for (;;) {
    const double u = horizontal(rng);
    if (vertical(rng) <= eval(u))
      return u;
  }
}

KernelId
parse_kernel_id(std::string_view name)
{
  if (name == "triweight")
    return KernelId::Triweight;
  if (name == "biweight")
    return KernelId::Biweight;
  if (name == "epanechnikov")
    return KernelId::Epanechnikov;
  throw ParameterError("unknown kernel '" + std::string(name) + "'");
}

} // namespace bwclass
