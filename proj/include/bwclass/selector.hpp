#pragma once

#include "bwclass/kernels.hpp"
#include "bwclass/quadrature.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bwclass {

enum class ScaleRule
{
  NormalSd,
  IqrNormalized,
  RobustMin,
};

ScaleRule
parse_scale_rule(const std::string& name);
std::string
scale_rule_name(ScaleRule rule);

struct SelectorConfig
{
  std::size_t boot_iters = 100;
  std::size_t grid_per_dim = 15;
  //! Bandwidth window [C n^-c2, C n^-c1] with C = window_scale.
  double c1 = 0.08;
  double c2 = 0.45;
  double window_scale = 1.0;
  int pilot_r = 4;
  std::size_t quad_points = 201;
  ScaleRule scale_rule = ScaleRule::RobustMin;

  //! Throws ParameterError unless 0 < c1 < 1/9 < 1/5 < c2 < 1, C > 0 and
  //! the counts are usable.
  void validate() const;
};

//! Normal-reference scale of a sample under `rule`.
double
sample_scale(std::span<const double> sample, ScaleRule rule);

//! int (phi^(k))^2 for the standard normal; computed once per k.
double
normal_derivative_roughness(int k);

//! Normal-reference bandwidth for estimating f^(r):
//! {(2r+1) R(K^(r)) / (n mu2^2 int (phi_s^(r+2))^2)}^(1/(2r+5)).
double
pilot_bandwidth(std::span<const double> sample,
                const Kernel& kernel = Kernel::triweight(),
                int r = 4,
                ScaleRule rule = ScaleRule::RobustMin);

struct TrainingData
{
  std::vector<double> X;
  std::vector<double> Y;
  double p = 0.5;
};

struct Pilots
{
  double h3;
  double h4;
};

Pilots
pilot_bandwidths(const TrainingData& data, const SelectorConfig& cfg, const Kernel& kernel);

//! The selection grid for sample size n.
std::vector<double>
selection_grid(std::size_t n, const SelectorConfig& cfg);

//! Log-spaced grid of `count` points over [lo, hi].
std::vector<double>
log_grid(double lo, double hi, std::size_t count);

//! Bootstrap error estimate over every (h1, h2) in grid1 x grid2.
//!
//! Bootstrap replicate b draws X* then Y* from the pilot estimates with a
//! generator seeded by derive_seed(seed, b), so every cell sees the same
//! resamples. The result is row-major in grid1.
std::vector<double>
bootstrap_surface(const TrainingData& data,
                  std::span<const double> grid1,
                  std::span<const double> grid2,
                  const Pilots& pilots,
                  const SelectorConfig& cfg,
                  std::uint64_t seed,
                  const Kernel& kernel = Kernel::triweight(),
                  unsigned threads = 1);

double
bootstrap_err(const TrainingData& data,
              double h1,
              double h2,
              const Pilots& pilots,
              const SelectorConfig& cfg,
              std::uint64_t seed,
              const Kernel& kernel = Kernel::triweight());

struct Selection
{
  double h1;
  double h2;
  double h3;
  double h4;
  double err_min;
  std::vector<double> grid1;
  std::vector<double> grid2;
  std::vector<double> surface;
};

//! Index of the smallest entry of a row-major surface; ties go to the
//! smaller h1, then the smaller h2.
std::size_t
surface_argmin(std::span<const double> surface);

Selection
select_bandwidths(const TrainingData& data,
                  const SelectorConfig& cfg,
                  std::uint64_t seed,
                  const Kernel& kernel = Kernel::triweight(),
                  unsigned threads = 1);

//! Leave-one-out misclassification rate restricted to `interval`.
double
cv_err(const TrainingData& data,
       double h1,
       double h2,
       Interval interval = Interval::whole_line(),
       const Kernel& kernel = Kernel::triweight());

struct CvSelection
{
  double h1;
  double h2;
  double err_min;
  std::vector<double> surface;
};

//! Minimises cv_err over the same window and grid as select_bandwidths.
CvSelection
cv_select(const TrainingData& data,
          const SelectorConfig& cfg,
          Interval interval = Interval::whole_line(),
          const Kernel& kernel = Kernel::triweight());

} // namespace bwclass
