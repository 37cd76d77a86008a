#include "bwclass/selector.hpp"

#include "bwclass/classifier.hpp"
#include "bwclass/error.hpp"
#include "bwclass/kde.hpp"
#include "bwclass/parallel.hpp"
#include "bwclass/random.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <optional>

namespace bwclass {

ScaleRule
parse_scale_rule(const std::string& name)
{
  if (name == "sd")
    return ScaleRule::NormalSd;
  if (name == "iqr")
    return ScaleRule::IqrNormalized;
  if (name == "robust")
    return ScaleRule::RobustMin;
  throw ParameterError("unknown scale rule '" + name + "' (expected sd, iqr or robust)");
}

std::string
scale_rule_name(ScaleRule rule)
{
  switch (rule) {
    case ScaleRule::NormalSd:
      return "sd";
    case ScaleRule::IqrNormalized:
      return "iqr";
    case ScaleRule::RobustMin:
      return "robust";
  }
  return "robust";
}

void
SelectorConfig::validate() const
{
  if (!(0.0 < c1 && c1 < 1.0 / 9.0 && 0.2 < c2 && c2 < 1.0))
    throw ParameterError("bandwidth window needs 0 < c1 < 1/9 < 1/5 < c2 < 1");
  if (!(window_scale > 0.0) || !std::isfinite(window_scale))
    throw ParameterError("window_scale must be positive");
  if (boot_iters == 0)
    throw ParameterError("boot_iters must be positive");
  if (grid_per_dim == 0)
    throw ParameterError("grid_per_dim must be positive");
  if (quad_points < 3)
    throw ParameterError("quad_points must be at least 3");
  if (pilot_r < 0 || pilot_r > 4)
    throw ParameterError("pilot_r must lie in 0..4");
}

namespace {

// Linear-interpolation sample quantile of sorted data.
double
sorted_quantile(const std::vector<double>& s, double q)
{
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double
hermite_he(int k, double z)
{
  double prev = 1.0;
  if (k == 0)
    return prev;
  double cur = z;
  for (int j = 1; j < k; ++j) {
    const double next = z * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

} // namespace

double
sample_scale(std::span<const double> sample, ScaleRule rule)
{
  if (sample.size() < 4)
    throw DegenerateSampleError("scale estimate needs at least 4 points");
  const double n = static_cast<double>(sample.size());
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sample)
    ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const boost::math::normal_distribution<double> phi;
  const double iqr_unit = boost::math::quantile(phi, 0.75) - boost::math::quantile(phi, 0.25);
  const double iqr = (sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25)) / iqr_unit;

  double scale = 0.0;
  switch (rule) {
    case ScaleRule::NormalSd:
      scale = sd;
      break;
    case ScaleRule::IqrNormalized:
      scale = iqr;
      break;
    case ScaleRule::RobustMin:
      scale = std::min(sd, iqr);
      break;
  }
  if (!(scale > 0.0))
    throw DegenerateSampleError("sample scale is zero");
  return scale;
}

double
normal_derivative_roughness(int k)
{
  if (k < 0 || k > 12)
    throw ParameterError("normal derivative order must lie in 0..12");
  static std::array<double, 13> cache{};
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (cache[k] == 0.0) {
    const double c = 1.0 / (2.0 * M_PI);
    cache[k] = integrate(
      [k, c](double z) {
        const double he = hermite_he(k, z);
        return c * he * he * std::exp(-z * z);
      },
      -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::infinity(),
      1e-8);
  }
  return cache[k];
}

double
pilot_bandwidth(std::span<const double> sample, const Kernel& kernel, int r, ScaleRule rule)
{
  if (r < 0 || r > 4)
    throw ParameterError("pilot derivative order must lie in 0..4");
  const double sigma = sample_scale(sample, rule);
  const double n = static_cast<double>(sample.size());
  const double mu2 = kernel.moment(2);
  const int k = r + 2;
  const double functional = std::pow(sigma, -(2.0 * k + 1.0)) * normal_derivative_roughness(k);
  const double num = (2.0 * r + 1.0) * kernel.roughness(r);
  return std::pow(num / (n * mu2 * mu2 * functional), 1.0 / (2.0 * r + 5.0));
}

Pilots
pilot_bandwidths(const TrainingData& data, const SelectorConfig& cfg, const Kernel& kernel)
{
  return { pilot_bandwidth(data.X, kernel, cfg.pilot_r, cfg.scale_rule),
           pilot_bandwidth(data.Y, kernel, cfg.pilot_r, cfg.scale_rule) };
}

std::vector<double>
log_grid(double lo, double hi, std::size_t count)
{
  if (!(lo > 0.0 && hi >= lo) || count == 0)
    throw ParameterError("log grid needs 0 < lo <= hi and a positive count");
  if (count == 1)
    return { lo };
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

void
check_data(const TrainingData& data)
{
  if (data.X.size() < 2 || data.Y.size() < 2)
    throw ParameterError("training data needs at least two points per population");
  if (!(data.p > 0.0 && data.p < 1.0))
    throw ParameterError("prior p must lie in (0, 1)");
}

} // namespace

std::vector<double>
bootstrap_surface(const TrainingData& data,
                  std::span<const double> grid1,
                  std::span<const double> grid2,
                  const Pilots& pilots,
                  const SelectorConfig& cfg,
                  std::uint64_t seed,
                  const Kernel& kernel,
                  unsigned threads)
{
  cfg.validate();
  check_data(data);
  for (double h : grid1)
    if (!(h > 0.0))
      throw ParameterError("bandwidths must be positive");
  for (double h : grid2)
    if (!(h > 0.0))
      throw ParameterError("bandwidths must be positive");

  const Kde ftilde(data.X, pilots.h3, kernel);
  const Kde gtilde(data.Y, pilots.h4, kernel);
  const double pad = std::max(ftilde.radius(), gtilde.radius());
  const double lo = std::min(ftilde.data().front(), gtilde.data().front()) - pad;
  const double hi = std::max(ftilde.data().back(), gtilde.data().back()) + pad;

  const std::size_t K = cfg.quad_points;
  std::vector<double> xs(K);
  for (std::size_t k = 0; k < K; ++k)
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(K - 1);
  xs.back() = hi;
  std::vector<double> fw(K), gw(K);
  ftilde.eval_sorted(xs, fw);
  gtilde.eval_sorted(xs, gw);

  const std::size_t n1 = grid1.size();
  const std::size_t n2 = grid2.size();
  const std::size_t B = cfg.boot_iters;
  const double p = data.p;
  // labels[b][(i * n2 + j) * K + k] is 1 when replicate b labels xs[k] as G.
  std::vector<std::vector<std::uint8_t>> labels(B);

  parallel_for(B, threads, [&](std::size_t b) {
    Rng rng = make_rng(derive_seed(seed, b));
    auto xb = smoothed_bootstrap(ftilde, data.X.size(), rng);
    auto yb = smoothed_bootstrap(gtilde, data.Y.size(), rng);

    std::vector<double> fvals(n1 * K), gvals(n2 * K);
    for (std::size_t i = 0; i < n1; ++i)
      Kde(xb, grid1[i], kernel).eval_sorted(xs, std::span(fvals).subspan(i * K, K));
    for (std::size_t j = 0; j < n2; ++j)
      Kde(yb, grid2[j], kernel).eval_sorted(xs, std::span(gvals).subspan(j * K, K));

    auto& out = labels[b];
    out.assign(n1 * n2 * K, 0);
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        std::optional<TrainedClassifier> tails;
        for (std::size_t k = 0; k < K; ++k) {
          const double fv = fvals[i * K + k];
          const double gv = gvals[j * K + k];
          Population label;
          if (fv > 0.0 || gv > 0.0) {
            label = sign_rule(fv, gv, p).value;
          } else {
            if (!tails)
              tails.emplace(xb, yb, grid1[i], grid2[j], p, kernel);
            label = tails->classify(xs[k]).value;
          }
          out[(i * n2 + j) * K + k] = label == Population::G ? 1 : 0;
        }
      }
    }
  });

  std::vector<double> surface(n1 * n2);
  std::vector<std::uint32_t> count(K);
  const double dx = (hi - lo) / static_cast<double>(K - 1);
  for (std::size_t c = 0; c < n1 * n2; ++c) {
    std::fill(count.begin(), count.end(), 0u);
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t k = 0; k < K; ++k)
        count[k] += labels[b][c * K + k];
    double err = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double pg = static_cast<double>(count[k]) / static_cast<double>(B);
      const double w = (k == 0 || k + 1 == K) ? 0.5 : 1.0;
      err += w * (p * pg * fw[k] + (1.0 - p) * (1.0 - pg) * gw[k]);
    }
    surface[c] = err * dx;
  }
  return surface;
}

double
bootstrap_err(const TrainingData& data,
              double h1,
              double h2,
              const Pilots& pilots,
              const SelectorConfig& cfg,
              std::uint64_t seed,
              const Kernel& kernel)
{
  const std::array<double, 1> g1{ h1 };
  const std::array<double, 1> g2{ h2 };
  return bootstrap_surface(data, g1, g2, pilots, cfg, seed, kernel).front();
}

std::size_t
surface_argmin(std::span<const double> surface)
{
  if (surface.empty())
    throw ParameterError("empty surface");
  std::size_t best = 0;
  for (std::size_t c = 1; c < surface.size(); ++c)
    if (surface[c] < surface[best])
      best = c;
  return best;
}

std::vector<double>
selection_grid(std::size_t n, const SelectorConfig& cfg)
{
  cfg.validate();
  const double nn = static_cast<double>(n);
  const double C = cfg.window_scale;
  return log_grid(C * std::pow(nn, -cfg.c2), C * std::pow(nn, -cfg.c1), cfg.grid_per_dim);
}

namespace {

std::vector<double>
selection_grid(const TrainingData& data, const SelectorConfig& cfg)
{
  if (data.X.size() < 10 || data.Y.size() < 10)
    throw ParameterError("bandwidth selection needs at least 10 points per population");
  return selection_grid(data.Y.size(), cfg);
}

} // namespace

Selection
select_bandwidths(const TrainingData& data,
                  const SelectorConfig& cfg,
                  std::uint64_t seed,
                  const Kernel& kernel,
                  unsigned threads)
{
  cfg.validate();
  const auto grid = selection_grid(data, cfg);
  const Pilots pilots = pilot_bandwidths(data, cfg, kernel);
  auto surface = bootstrap_surface(data, grid, grid, pilots, cfg, seed, kernel, threads);
  const std::size_t best = surface_argmin(surface);
  const std::size_t g = grid.size();
  return { grid[best / g], grid[best % g], pilots.h3, pilots.h4, surface[best],
           grid, grid, std::move(surface) };
}

double
cv_err(const TrainingData& data, double h1, double h2, Interval interval, const Kernel& kernel)
{
  check_data(data);
  const Kde fhat(data.X, h1, kernel);
  const Kde ghat(data.Y, h2, kernel);
  const double p = data.p;
  std::size_t f_wrong = 0;
  for (std::size_t i = 0; i < fhat.size(); ++i) {
    const double x = fhat.data()[i];
    if (interval.contains(x) && p * fhat.eval_loo(i, x) - (1.0 - p) * ghat(x) < 0.0)
      ++f_wrong;
  }
  std::size_t g_wrong = 0;
  for (std::size_t i = 0; i < ghat.size(); ++i) {
    const double y = ghat.data()[i];
    if (interval.contains(y) && p * fhat(y) - (1.0 - p) * ghat.eval_loo(i, y) > 0.0)
      ++g_wrong;
  }
  return p * static_cast<double>(f_wrong) / static_cast<double>(fhat.size()) +
         (1.0 - p) * static_cast<double>(g_wrong) / static_cast<double>(ghat.size());
}

CvSelection
cv_select(const TrainingData& data,
          const SelectorConfig& cfg,
          Interval interval,
          const Kernel& kernel)
{
  cfg.validate();
  const auto grid = selection_grid(data, cfg);
  const std::size_t g = grid.size();
  std::vector<double> surface(g * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j)
      surface[i * g + j] = cv_err(data, grid[i], grid[j], interval, kernel);
  const std::size_t best = surface_argmin(surface);
  return { grid[best / g], grid[best % g], surface[best], std::move(surface) };
}

} // namespace bwclass
