#include "bwclass/densities.hpp"

#include "bwclass/error.hpp"

#include <boost/math/distributions/cauchy.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bwclass {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;

// k-th derivative of the standard normal density: (-1)^k He_k(z) phi(z).
double
std_normal_derivative(int k, double z)
{
  double he_prev = 1.0;
  double he = z;
  if (k == 0)
    he = 1.0;
  for (int j = 1; j < k; ++j) {
    const double next = z * he - j * he_prev;
    he_prev = he;
    he = next;
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * he * inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double
normal_derivative(int k, double mean, double sd, double x)
{
  const double z = (x - mean) / sd;
  return std_normal_derivative(k, z) / std::pow(sd, k + 1);
}

double
normal_cdf(double mean, double sd, double x)
{
  return 0.5 * boost::math::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

// k-th derivative of the standard Cauchy density 1 / (pi (1 + z^2)).
double
std_cauchy_derivative(int k, double z)
{
  const double q = 1.0 + z * z;
  const double z2 = z * z;
  constexpr double pi = std::numbers::pi;
  switch (k) {
    case 0:
      return 1.0 / (pi * q);
    case 1:
      return -2.0 * z / (pi * q * q);
    case 2:
      return (6.0 * z2 - 2.0) / (pi * q * q * q);
    case 3:
      return 24.0 * z * (1.0 - z2) / (pi * q * q * q * q);
    case 4:
      return 24.0 * (5.0 * z2 * z2 - 10.0 * z2 + 1.0) / (pi * q * q * q * q * q);
    default:
      throw ParameterError("Cauchy derivatives are available up to order 4");
  }
}

double
bisect_quantile(const Density& d, double prob, double lo, double hi)
{
  while (d.cdf(lo) > prob)
    lo -= 2.0 * (hi - lo) + 1.0;
  while (d.cdf(hi) < prob)
    hi += 2.0 * (hi - lo) + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (d.cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void
check_order(int order)
{
  if (order < 0 || order > 4)
    throw ParameterError("density derivative order must lie in [0, 4]");
}

} // namespace

Density
Density::normal(double mean, double sd)
{
  if (!(sd > 0.0))
    throw ParameterError("normal sd must be positive");
  return Density(NormalModel{ mean, sd });
}

Density
Density::normal_mixture(std::vector<MixtureComponent> components)
{
  if (components.empty())
    throw ParameterError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.sd > 0.0) || !(c.weight > 0.0))
      throw ParameterError("mixture weights and sds must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ParameterError("mixture weights must sum to 1");
  return Density(NormalMixtureModel{ std::move(components) });
}

Density
Density::cauchy(double location, double scale)
{
  if (!(scale > 0.0))
    throw ParameterError("Cauchy scale must be positive");
  return Density(CauchyModel{ location, scale });
}

Density
Density::pareto(double alpha)
{
  if (!(alpha > 1.0))
    throw ParameterError("Pareto exponent must exceed 1");
  return Density(ParetoModel{ alpha });
}

Density
Density::custom(CustomModel model)
{
  if (!model.derivative)
    throw ParameterError("custom density needs a derivative callback");
  return Density(std::move(model));
}

double
Density::derivative(int order, double x) const
{
  check_order(order);
  return std::visit(
    overloaded{
      [&](const NormalModel& m) { return normal_derivative(order, m.mean, m.sd, x); },
      [&](const NormalMixtureModel& m) {
        double acc = 0.0;
        for (const auto& c : m.components)
          acc += c.weight * normal_derivative(order, c.mean, c.sd, x);
        return acc;
      },
      [&](const CauchyModel& m) {
        const double z = (x - m.location) / m.scale;
        return std_cauchy_derivative(order, z) / std::pow(m.scale, order + 1);
      },
      [&](const ParetoModel& m) {
        if (x < 1.0)
          return 0.0;
        double c = m.alpha - 1.0;
        for (int j = 0; j < order; ++j)
          c *= -(m.alpha + j);
        return c * std::pow(x, -(m.alpha + order));
      },
      [&](const CustomModel& m) { return m.derivative(order, x); } },
    model_);
}

bool
Density::has_cdf() const
{
  if (const auto* c = std::get_if<CustomModel>(&model_))
    return static_cast<bool>(c->cdf);
  return true;
}

double
Density::cdf(double x) const
{
  return std::visit(
    overloaded{
      [&](const NormalModel& m) { return normal_cdf(m.mean, m.sd, x); },
      [&](const NormalMixtureModel& m) {
        double acc = 0.0;
        for (const auto& c : m.components)
          acc += c.weight * normal_cdf(c.mean, c.sd, x);
        return acc;
      },
      [&](const CauchyModel& m) {
        return 0.5 + std::atan((x - m.location) / m.scale) / std::numbers::pi;
      },
      [&](const ParetoModel& m) {
        return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, 1.0 - m.alpha);
      },
      [&](const CustomModel& m) {
        if (!m.cdf)
          throw ParameterError("custom density '" + m.name + "' has no cdf");
        return m.cdf(x);
      } },
    model_);
}

double
Density::quantile(double prob) const
{
  if (!(prob > 0.0 && prob < 1.0))
    throw ParameterError("quantile level must lie in (0, 1)");
  return std::visit(
    overloaded{
      [&](const NormalModel& m) {
        return boost::math::quantile(boost::math::normal(m.mean, m.sd), prob);
      },
      [&](const NormalMixtureModel& m) {
        double lo = m.components.front().mean;
        double hi = lo;
        for (const auto& c : m.components) {
          lo = std::min(lo, c.mean - 10.0 * c.sd);
          hi = std::max(hi, c.mean + 10.0 * c.sd);
        }
        return bisect_quantile(*this, prob, lo, hi);
      },
      [&](const CauchyModel& m) {
        return m.location + m.scale * std::tan(std::numbers::pi * (prob - 0.5));
      },
      [&](const ParetoModel& m) { return std::pow(1.0 - prob, -1.0 / (m.alpha - 1.0)); },
      [&](const CustomModel&) { return bisect_quantile(*this, prob, -1.0, 1.0); } },
    model_);
}

bool
Density::has_sampler() const
{
  if (const auto* c = std::get_if<CustomModel>(&model_))
    return static_cast<bool>(c->sampler);
  return true;
}

double
Density::sample(Rng& rng) const
{
  return std::visit(
    overloaded{
      [&](const NormalModel& m) { return std::normal_distribution<double>(m.mean, m.sd)(rng); },
      [&](const NormalMixtureModel& m) {
        double u = uniform01(rng);
        const MixtureComponent* chosen = &m.components.back();
        for (const auto& c : m.components) {
          if (u < c.weight) {
            chosen = &c;
            break;
          }
          u -= c.weight;
        }
        return std::normal_distribution<double>(chosen->mean, chosen->sd)(rng);
      },
      [&](const CauchyModel& m) {
        return m.location + m.scale * std::tan(std::numbers::pi * (uniform01(rng) - 0.5));
      },
      [&](const ParetoModel& m) {
        // 1 - U lies in (0, 1], so the draw is finite and >= 1.
        return std::pow(1.0 - uniform01(rng), -1.0 / (m.alpha - 1.0));
      },
      [&](const CustomModel& m) {
        if (!m.sampler)
          throw ParameterError("custom density '" + m.name + "' has no sampler");
        return m.sampler(rng);
      } },
    model_);
}

std::vector<double>
Density::sample(std::size_t count, Rng& rng) const
{
  std::vector<double> out(count);
  for (auto& v : out)
    v = sample(rng);
  return out;
}

double
Density::mass(double a, double b) const
{
  if (b <= a)
    return 0.0;
  if (has_cdf())
    return cdf(b) - cdf(a);
  return integrate([this](double x) { return pdf(x); }, a, b, 1e-11);
}

std::string
Density::describe() const
{
  std::ostringstream os;
  std::visit(overloaded{ [&](const NormalModel& m) { os << "N(" << m.mean << ", " << m.sd << "^2)"; },
                         [&](const NormalMixtureModel& m) {
                           os << "mixture[";
                           for (std::size_t i = 0; i < m.components.size(); ++i) {
                             const auto& c = m.components[i];
                             os << (i ? " + " : "") << c.weight << " N(" << c.mean << ", "
                                << c.sd << "^2)";
                           }
                           os << "]";
                         },
                         [&](const CauchyModel& m) {
                           os << "Cauchy(" << m.location << ", " << m.scale << ")";
                         },
                         [&](const ParetoModel& m) { os << "Pareto(" << m.alpha << ")"; },
                         [&](const CustomModel& m) { os << m.name; } },
             model_);
  return os.str();
}

PairId
parse_pair_id(std::string_view name)
{
  if (name == "class1a")
    return PairId::Class1a;
  if (name == "class1b")
    return PairId::Class1b;
  if (name == "class2a")
    return PairId::Class2a;
  if (name == "class2b")
    return PairId::Class2b;
  throw ParameterError("unknown pair '" + std::string(name) +
                       "' (expected class1a, class1b, class2a or class2b)");
}

std::string_view
pair_name(PairId id)
{
  switch (id) {
    case PairId::Class1a:
      return "class1a";
    case PairId::Class1b:
      return "class1b";
    case PairId::Class2a:
      return "class2a";
    case PairId::Class2b:
      return "class2b";
  }
  return "unknown";
}

double
DensityPair::pooled_quantile(double prob) const
{
  if (!(prob > 0.0 && prob < 1.0))
    throw ParameterError("quantile level must lie in (0, 1)");
  double lo = std::min(f.quantile(prob), g.quantile(prob));
  double hi = std::max(f.quantile(prob), g.quantile(prob));
  // The mixture quantile lies between the component quantiles.
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (pooled_cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DensityPair
make_pair(PairId id)
{
  const Density f = Density::normal(0.0, 1.0);
  switch (id) {
    case PairId::Class1a:
      return { f, Density::normal(-1.2, 0.6), 0.5, "class1a" };
    case PairId::Class1b:
      return { f,
               Density::normal_mixture({ { 0.2, 0.5, 1.0 },
                                         { 0.2, 1.0, 2.0 / 3.0 },
                                         { 0.6, 19.0 / 12.0, 5.0 / 9.0 } }),
               0.5,
               "class1b" };
    case PairId::Class2a:
      return { f, Density::normal(1.0, 1.0), 0.5, "class2a" };
    case PairId::Class2b:
      return { f, Density::cauchy(0.0, 1.0), 0.5, "class2b" };
  }
  throw ParameterError("unknown pair id");
}

DensityPair
make_pareto_pair(double alpha, double beta, double p)
{
  if (!(1.0 < alpha && alpha < beta && beta < alpha + 1.0))
    throw ParameterError("Pareto pair needs 1 < alpha < beta < alpha + 1");
  std::ostringstream label;
  label << "pareto(" << alpha << "," << beta << ")";
  return make_custom_pair(Density::pareto(alpha), Density::pareto(beta), p, label.str());
}

DensityPair
make_custom_pair(Density f, Density g, double p, std::string label)
{
  if (!(p > 0.0 && p < 1.0))
    throw ParameterError("prior p must lie in (0, 1)");
  return { std::move(f), std::move(g), p, std::move(label) };
}

std::string_view
regime_name(Regime r)
{
  return r == Regime::Class1 ? "class1" : "class2";
}

namespace {

constexpr double kWidthTol = 1e-14;
constexpr double kMinSlope = 1e-6;

int
sign_of(double v)
{
  return (v > 0.0) - (v < 0.0);
}

double
bisect_root(const DensityPair& pair, double a, double b, double fa)
{
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = pair.delta(mid);
    if (fm == 0.0 || b - a <= kWidthTol * (1.0 + std::abs(mid)))
      return mid;
    if (sign_of(fm) == sign_of(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// A cell whose endpoints share a sign can still hide two roots if Delta has
// an interior extremum on the other side of zero.
bool
hides_root_pair(const DensityPair& pair, double a, double b, double fa)
{
  const double da = pair.delta_derivative(1, a);
  const double db = pair.delta_derivative(1, b);
  if (sign_of(da) == sign_of(db) || sign_of(da) == 0 || sign_of(db) == 0)
    return false;
  for (int it = 0; it < 200 && b - a > kWidthTol; ++it) {
    const double mid = 0.5 * (a + b);
    (sign_of(pair.delta_derivative(1, mid)) == sign_of(da) ? a : b) = mid;
  }
  const double extremum = pair.delta(0.5 * (a + b));
  return sign_of(extremum) != 0 && sign_of(extremum) != sign_of(fa);
}

CrossingPoint
describe_root(const DensityPair& pair, double y)
{
  const double slope = pair.delta_derivative(1, y);
  if (std::abs(slope) < kMinSlope) {
    throw DegenerateCrossingError("Delta'(" + std::to_string(y) + ") = " + std::to_string(slope) +
                                  " is numerically zero at a crossing");
  }
  return { y,
           slope,
           pair.f.derivative(2, y),
           pair.g.derivative(2, y),
           pair.f.derivative(4, y),
           pair.g.derivative(4, y) };
}

} // namespace

CrossingSet
crossings(const DensityPair& pair, Interval interval, std::size_t grid_points)
{
  if (grid_points < 64)
    throw ParameterError("crossing search needs at least 64 grid points");
  if (!interval.finite() || !(interval.hi > interval.lo))
    throw ParameterError("crossing search needs a finite nondegenerate interval");

  const double lo = interval.lo;
  const double step = (interval.hi - lo) / static_cast<double>(grid_points - 1);
  std::vector<double> xs(grid_points);
  std::vector<double> vals(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    xs[i] = (i + 1 == grid_points) ? interval.hi : lo + step * static_cast<double>(i);
    vals[i] = pair.delta(xs[i]);
  }

  CrossingSet cs;
  cs.p = pair.p;
  for (std::size_t i = 0; i + 1 < grid_points; ++i) {
    const int sa = sign_of(vals[i]);
    const int sb = sign_of(vals[i + 1]);
    if (sa == 0) {
      // Exact zero on a node: a root only if the neighbours straddle it.
      if (i > 0 && sign_of(vals[i - 1]) * sb < 0)
        cs.points.push_back(describe_root(pair, xs[i]));
      continue;
    }
    if (sb == 0)
      continue;
    if (sa != sb) {
      const double y = bisect_root(pair, xs[i], xs[i + 1], vals[i]);
      auto point = describe_root(pair, y);
      // A single simple root forces Delta' to carry the bracket's direction.
      if (sign_of(point.delta_prime) != sb) {
        throw ResolutionError("grid cell [" + std::to_string(xs[i]) + ", " +
                              std::to_string(xs[i + 1]) +
                              "] holds several crossings; use a finer grid");
      }
      cs.points.push_back(point);
    } else if (hides_root_pair(pair, xs[i], xs[i + 1], vals[i])) {
      throw ResolutionError("grid cell [" + std::to_string(xs[i]) + ", " +
                            std::to_string(xs[i + 1]) +
                            "] holds two crossings; use a finer grid");
    }
  }

  if (cs.points.empty())
    return cs;
  cs.regime = regime_detect(cs);
  if (cs.regime == Regime::Class2) {
    const auto& y1 = cs.points.front();
    const double R = pair.p * y1.f2 / ((1.0 - pair.p) * y1.g2);
    cs.R = R;
    cs.T = pair.p * y1.f4 - R * R * (1.0 - pair.p) * y1.g4;
  }
  return cs;
}

CrossingSet
crossings(const DensityPair& pair)
{
  return crossings(pair, { pair.pooled_quantile(1e-4), pair.pooled_quantile(1.0 - 1e-4) }, 4096);
}

Regime
regime_detect(const CrossingSet& cs)
{
  if (cs.points.empty())
    throw ParameterError("regime detection needs at least one crossing");
  bool same_sign = true;
  for (const auto& pt : cs.points) {
    if (pt.f2 == 0.0 && pt.g2 == 0.0)
      throw UnsupportedCurvatureError("f'' and g'' both vanish at y = " + std::to_string(pt.y));
    if (!(pt.f2 * pt.g2 > 0.0))
      same_sign = false;
  }
  if (!same_sign)
    return Regime::Class1;
  const auto ratio = [&](const CrossingPoint& pt) {
    return cs.p * pt.f2 / ((1.0 - cs.p) * pt.g2);
  };
  const double r0 = ratio(cs.points.front());
  for (const auto& pt : cs.points)
    if (std::abs(ratio(pt) - r0) > 1e-6 * std::abs(r0))
      return Regime::Class1;
  return Regime::Class2;
}

} // namespace bwclass
