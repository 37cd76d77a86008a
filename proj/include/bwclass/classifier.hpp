#pragma once

#include "bwclass/densities.hpp"
#include "bwclass/kde.hpp"

#include <optional>
#include <span>
#include <vector>

namespace bwclass {

enum class DecisionPath
{
  Body,
  TailRight,
  TailLeft,
  TieBreak
};

struct Label
{
  Population value;
  DecisionPath path;

  bool operator==(const Label&) const = default;
};

enum class Side
{
  Right,
  Left
};

//! Bayes rule: FromF when Delta(x) >= 0.
Label
classify_a0(const DensityPair& pair, double x);

//! Plug-in classifier built from two training samples.
class TrainedClassifier
{
public:
  TrainedClassifier(std::vector<double> x_sample,
                    std::vector<double> y_sample,
                    double h1,
                    double h2,
                    double p,
                    Kernel kernel = Kernel::triweight());

  const Kde& fhat() const { return fhat_; }
  const Kde& ghat() const { return ghat_; }
  double p() const { return p_; }
  //! Lower median of X union Y.
  double pooled_median() const { return median_; }

  //! p fhat(x) - (1 - p) ghat(x).
  double delta_hat(double x) const { return p_ * fhat_(x) - (1.0 - p_) * ghat_(x); }

  //! Sign rule on delta_hat. Empty when fhat(x) = ghat(x) = 0.
  std::optional<Label> classify_a1(double x) const;
  //! Tail rule: label of the population whose estimated support ends
  //! nearest to x on the given side. Throws EmptyTailError if none does.
  Label classify_tail(double x, Side side) const;
  //! A1 where an estimate is nonzero, tail rule (by side of the median) elsewhere.
  Label classify(double x) const;

  //! Nearest support endpoint at or left of x: max({X_i + h1 s} u {Y_i + h2 s}) <= x.
  std::optional<std::pair<double, Population>> right_endpoint_below(double x) const;
  //! Nearest support endpoint at or right of x: min({X_i - h1 s} u {Y_i - h2 s}) >= x.
  std::optional<std::pair<double, Population>> left_endpoint_above(double x) const;

private:
  Kde fhat_;
  Kde ghat_;
  double p_;
  double median_;
};

//! Label from decision values when not both estimates vanish.
inline Label
sign_rule(double fval, double gval, double p)
{
  const double d = p * fval - (1.0 - p) * gval;
  if (d > 0.0)
    return { Population::F, DecisionPath::Body };
  if (d < 0.0)
    return { Population::G, DecisionPath::Body };
  return { Population::F, DecisionPath::TieBreak };
}

//! argmax_j p_j fhat_j(x) over N univariate populations.
class MultiPopulationClassifier
{
public:
  MultiPopulationClassifier(std::vector<std::vector<double>> samples,
                            std::vector<double> bandwidths,
                            std::vector<double> priors,
                            Kernel kernel = Kernel::triweight());

  //! Lowest index among the maximisers; empty when every estimate vanishes.
  std::optional<std::size_t> classify(double x) const;
  //! p_j fhat_j(x) for every population.
  std::vector<double> weighted_estimates(double x) const;
  std::size_t populations() const { return estimates_.size(); }

private:
  std::vector<Kde> estimates_;
  std::vector<double> priors_;
};

//! Row-major m x d sample.
struct PointCloud
{
  std::vector<double> values;
  std::size_t dim = 1;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const { return { values.data() + i * dim, dim }; }
};

//! c_d such that c_d K(|u|) integrates to one over R^d.
double
spherical_normaliser(const Kernel& kernel, std::size_t dim);

//! d-variate plug-in rule with spherical kernels and one bandwidth per population.
class MultivariateClassifier
{
public:
  MultivariateClassifier(PointCloud x_sample,
                         PointCloud y_sample,
                         double h1,
                         double h2,
                         double p,
                         Kernel kernel = Kernel::triweight());

  double fhat(std::span<const double> x) const { return estimate(x_, h1_, x); }
  double ghat(std::span<const double> x) const { return estimate(y_, h2_, x); }
  //! Empty when both estimates vanish at x.
  std::optional<Label> classify(std::span<const double> x) const;
  std::size_t dim() const { return x_.dim; }

private:
  double estimate(const PointCloud& cloud, double h, std::span<const double> x) const;

  PointCloud x_;
  PointCloud y_;
  double h1_;
  double h2_;
  double p_;
  Kernel kernel_;
  double norm_;
};

} // namespace bwclass
