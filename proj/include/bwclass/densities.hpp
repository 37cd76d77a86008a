#pragma once

#include "bwclass/quadrature.hpp"
#include "bwclass/random.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bwclass {

struct NormalModel
{
  double mean = 0.0;
  double sd = 1.0;
};

struct MixtureComponent
{
  double weight;
  double mean;
  double sd;
};

struct NormalMixtureModel
{
  std::vector<MixtureComponent> components;
};

struct CauchyModel
{
  double location = 0.0;
  double scale = 1.0;
};

//! (alpha - 1) x^(-alpha) on [1, inf).
struct ParetoModel
{
  double alpha;
};

//! User-supplied density. `derivative(k, x)` must return the k-th derivative
//! for k = 0..4; cdf and sampler are optional.
struct CustomModel
{
  std::string name;
  std::function<double(int, double)> derivative;
  std::function<double(double)> cdf;
  std::function<double(Rng&)> sampler;
};

//! Analytic univariate density with exact derivatives up to order 4.
class Density
{
public:
  using Model =
    std::variant<NormalModel, NormalMixtureModel, CauchyModel, ParetoModel, CustomModel>;

  static Density normal(double mean, double sd);
  static Density normal_mixture(std::vector<MixtureComponent> components);
  static Density cauchy(double location = 0.0, double scale = 1.0);
  static Density pareto(double alpha);
  static Density custom(CustomModel model);

  double pdf(double x) const { return derivative(0, x); }
  double derivative(int order, double x) const;

  bool has_cdf() const;
  double cdf(double x) const;
  //! Closed form where available, otherwise bisection on the cdf.
  double quantile(double prob) const;

  bool has_sampler() const;
  double sample(Rng& rng) const;
  std::vector<double> sample(std::size_t count, Rng& rng) const;

  //! Probability mass of [a, b] (cdf difference, or quadrature of the pdf).
  double mass(double a, double b) const;

  const Model& model() const { return model_; }
  std::string describe() const;

private:
  explicit Density(Model model)
    : model_(std::move(model))
  {
  }

  Model model_;
};

enum class Population
{
  F,
  G
};

enum class PairId
{
  Class1a,
  Class1b,
  Class2a,
  Class2b
};

PairId
parse_pair_id(std::string_view name);
std::string_view
pair_name(PairId id);

//! Two densities and the prior p of the first.
struct DensityPair
{
  Density f;
  Density g;
  double p = 0.5;
  std::string label;

  const Density& density(Population which) const { return which == Population::F ? f : g; }
  //! Delta(x) = p f(x) - (1 - p) g(x).
  double delta(double x) const { return delta_derivative(0, x); }
  double delta_derivative(int order, double x) const
  {
    return p * f.derivative(order, x) - (1.0 - p) * g.derivative(order, x);
  }
  double pooled_cdf(double x) const { return p * f.cdf(x) + (1.0 - p) * g.cdf(x); }
  double pooled_quantile(double prob) const;
};

//! The four reference pairs: f = N(0, 1), p = 1/2 and
//!   Class1a  g = N(-1.2, 0.6^2)
//!   Class1b  g = 1/5 N(1/2, 1) + 1/5 N(1, (2/3)^2) + 3/5 N(19/12, (5/9)^2)
//!   Class2a  g = N(1, 1)
//!   Class2b  g = standard Cauchy
DensityPair
make_pair(PairId id);

//! f(x) = (alpha-1) x^-alpha, g(x) = (beta-1) x^-beta on [1, inf).
//! Requires 1 < alpha < beta < alpha + 1.
DensityPair
make_pareto_pair(double alpha, double beta, double p = 0.5);

DensityPair
make_custom_pair(Density f, Density g, double p, std::string label);

enum class Regime
{
  Class1,
  Class2
};

std::string_view
regime_name(Regime r);

struct CrossingPoint
{
  double y;
  double delta_prime;
  double f2;
  double g2;
  double f4;
  double g4;
};

//! Zeros of Delta with local derivative data and the bias-cancellation regime.
struct CrossingSet
{
  std::vector<CrossingPoint> points;
  double p = 0.5;
  Regime regime = Regime::Class1;
  //! p f''(y1) / ((1-p) g''(y1)); set for Class2.
  std::optional<double> R;
  //! p f''''(y1) - R^2 (1-p) g''''(y1); set for Class2.
  std::optional<double> T;

  std::size_t nu() const { return points.size(); }
};

//! Scans Delta on a uniform grid, refines each sign change by bisection.
CrossingSet
crossings(const DensityPair& pair, Interval interval, std::size_t grid_points = 4096);

//! Scan over [q_1e-4, q_(1-1e-4)] of the pooled mixture with 4096 points.
CrossingSet
crossings(const DensityPair& pair);

Regime
regime_detect(const CrossingSet& cs);

} // namespace bwclass
