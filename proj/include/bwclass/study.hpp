#pragma once

#include "bwclass/densities.hpp"
#include "bwclass/selector.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bwclass {

//! round(20 * 10^(k/9)) for k = 0..9.
std::vector<std::size_t>
default_n_list();

struct ExperimentConfig
{
  PairId pair = PairId::Class1a;
  std::vector<std::size_t> n_list = default_n_list();
  std::size_t reps = 100;
  SelectorConfig selector;
  std::uint64_t seed = 20240601;
  unsigned threads = 0;

  void validate() const;
};

enum class Which
{
  H1,
  H2,
};

struct SlopeFit
{
  double slope;
  double intercept;
  std::vector<std::pair<double, double>> points;
  Which which = Which::H1;

  double center_x() const;
  double at(double x) const { return intercept + slope * x; }
};

//! Ordinary least squares; needs two distinct x values.
SlopeFit
fit_slope(std::vector<std::pair<double, double>> points, Which which = Which::H1);

//! Line of the given slope through the centre of `fit`.
struct ReferenceLine
{
  double slope;
  double intercept;
};

ReferenceLine
reference_line(const SlopeFit& fit, double slope);

struct ReplicateRow
{
  std::size_t n;
  std::size_t rep;
  double h1;
  double h2;
  double err_boot_min;
  std::uint64_t seed;
};

struct SummaryRow
{
  std::size_t n;
  double mean_neglog_h1;
  double mean_neglog_h2;
  double sd_neglog_h1;
  double sd_neglog_h2;
};

struct StudyResult
{
  std::string pair;
  std::vector<ReplicateRow> rows;
  std::vector<SummaryRow> summary;
  SlopeFit fit_h1;
  SlopeFit fit_h2;
};

//! Seed of replicate `rep` at sample-size index `n_index`; identical across
//! pairs so runs with the same master seed are paired.
std::uint64_t
cell_seed(std::uint64_t master, std::size_t n_index, std::size_t rep);

//! Training data for one replicate: m = n draws from F then n from G.
TrainingData
draw_training(const DensityPair& pair, std::size_t m, std::size_t n, std::uint64_t seed);

StudyResult
run_study(const ExperimentConfig& cfg);

//! Writes <pair>_replicates.csv, <pair>_summary.csv, <pair>_slopes.csv and
//! <pair>_plot.dat under `dir`.
void
write_study(const StudyResult& result, const std::string& dir);

struct TailRow
{
  std::size_t n;
  double h;
  double x0;
  //! Replicate mean of int_{x0}^inf I{labelled G} f.
  double tail_mass;
  double tail_mass_se;
  //! n * h * tail_mass.
  double scaled;
};

//! Pareto pair (alpha, beta) with h1 = h2 = n^(-1/5) and m = n.
std::vector<TailRow>
run_tail_study(double alpha,
               double beta,
               const std::vector<std::size_t>& n_list,
               std::size_t reps,
               std::uint64_t seed,
               std::optional<double> x0 = std::nullopt,
               unsigned threads = 0);

struct LightTailReport
{
  std::size_t n;
  double threshold;
  //! Replicate mean of the f-weighted share of (threshold, inf) labelled F.
  double fraction_correct;
};

//! f = N(0, 1) against g = N(0, 1/9), p = 1/2, h1 = h2 = n^(-1/5).
LightTailReport
run_light_tail_contrast(std::size_t n,
                        std::size_t reps,
                        std::uint64_t seed,
                        double threshold = 3.0,
                        unsigned threads = 0);

void
write_tail_study(const std::vector<TailRow>& rows,
                 const std::optional<LightTailReport>& contrast,
                 const std::string& dir);

//! Interquartile range (linear-interpolation quantiles).
double
interquartile_range(std::vector<double> values);

//! IQR(cv) / IQR(boot); 1 when the two spreads are equal.
double
spread_ratio(const std::vector<double>& boot, const std::vector<double>& cv);

struct CvRow
{
  std::size_t rep;
  double boot_h1;
  double boot_h2;
  double cv_h1;
  double cv_h2;
};

struct CvComparison
{
  std::string pair;
  std::size_t n;
  std::vector<CvRow> rows;
  double iqr_log_boot_h1;
  double iqr_log_cv_h1;
  double ratio;
};

CvComparison
run_cv_comparison(PairId pair,
                  std::size_t n,
                  std::size_t reps,
                  std::uint64_t seed,
                  const SelectorConfig& selector = {},
                  unsigned threads = 0);

void
write_cv_comparison(const CvComparison& result, const std::string& dir);

struct SurfaceCell
{
  double h1;
  double h2;
  double err_boot;
  double err_cv;
};

//! Bootstrap and cross-validation surfaces for one training sample.
std::vector<SurfaceCell>
run_risk_surface(PairId pair,
                 std::size_t n,
                 std::uint64_t seed,
                 const SelectorConfig& selector = {},
                 unsigned threads = 0);

void
write_risk_surface(const std::vector<SurfaceCell>& cells,
                   const std::string& pair,
                   std::size_t n,
                   const std::string& dir);

} // namespace bwclass
