#pragma once

#include "bwclass/classifier.hpp"
#include "bwclass/densities.hpp"
#include "bwclass/kernels.hpp"
#include "bwclass/quadrature.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace bwclass {

//! Bayes risk int_I min(p f, (1 - p) g), split at the crossings of Delta.
//!
//! Infinite ends are truncated at pooled quantiles 1e-7 and 1 - 1e-7; the
//! smaller density's tail mass beyond them is added in closed form.
double
bayes_risk(const DensityPair& pair, Interval interval = Interval::whole_line());

//! Plug-in rule A1 on a finite interval; both-vanish points take the
//! deterministic FromF tie-break.
struct A1Body
{
  Interval interval;
};

//! Combined rule (A1 plus tail rules) on the whole line.
struct AhatWholeLine
{};

using RiskRule = std::variant<A1Body, AhatWholeLine>;

struct LabeledSegment
{
  double lo;
  double hi;
  Population label;
};

//! Partition of the rule's domain into maximal intervals of constant label.
//!
//! Label changes are located on a grid (2048 cells over a finite interval,
//! or per covered support component for the whole line) and refined by
//! bisection to 1e-10.
std::vector<LabeledSegment>
decision_segments(const TrainedClassifier& c, const RiskRule& rule);

//! Risk of a trained classifier conditional on its training data:
//! p * F(labelled G) + (1 - p) * G(labelled F) over the rule's domain.
double
conditional_risk(const DensityPair& pair, const TrainedClassifier& c, const RiskRule& rule);

struct RiskReport
{
  double err_a0;
  double err_emp;
  double excess;
  double se;
  std::size_t n_reps;
};

//! Monte Carlo average of the exact conditional risk over `reps` training
//! sets; replicate r draws with derive_seed(seed, r).
RiskReport
empirical_risk(const DensityPair& pair,
               std::size_t m,
               std::size_t n,
               double h1,
               double h2,
               std::size_t reps,
               std::uint64_t seed,
               const RiskRule& rule,
               const Kernel& kernel = Kernel::triweight(),
               unsigned threads = 0);

//! Leading term of the excess risk from exact KDE moments at the crossings:
//! 1/2 sum_j |Delta'(y_j)|^-1 [(E Delta_hat)^2 + Var Delta_hat].
double
expansion_excess(const DensityPair& pair,
                 const CrossingSet& cs,
                 std::size_t m,
                 std::size_t n,
                 double h1,
                 double h2,
                 const Kernel& kernel = Kernel::triweight());

struct ClassOneCoefficients
{
  double B1;
  double B2;
};

//! Variance and squared-bias coefficients for h_j = H_j h.
ClassOneCoefficients
expansion_b1_b2(const DensityPair& pair,
                const CrossingSet& cs,
                double H1,
                double H2,
                double r,
                const Kernel& kernel = Kernel::triweight());

//! B1 / (n h) + B2 h^4 written directly in (h1, h2); independent of the
//! reference scale h.
double
predicted_excess_class1(const DensityPair& pair,
                        const CrossingSet& cs,
                        std::size_t m,
                        std::size_t n,
                        double h1,
                        double h2,
                        const Kernel& kernel = Kernel::triweight());

//! B3(H1) = c1 / H1 and B4(H1) = c2 H1^8 under h2 / h1 = R^(1/2).
struct ClassTwoCoefficients
{
  double c1;
  double c2;
  double R;
  //! T(f, g) vanished to rounding (c2 set to exactly 0).
  bool degenerate;
};

ClassTwoCoefficients
expansion_b3_b4(const DensityPair& pair,
                const CrossingSet& cs,
                double r = 1.0,
                const Kernel& kernel = Kernel::triweight());

//! Asymptotically optimal bandwidths h_j = H_j n^(-rho).
struct BandwidthPlan
{
  Regime regime;
  double rho;
  double H1;
  double H2;
  double h1;
  double h2;
  double r;
  std::size_t n;
  bool degenerate;
  //! Objective at (H1, H2): the Class1 criterion or c1/H1 + c2 H1^8.
  double objective;
};

//! The Class1 criterion sum_j |Delta'|^-1 [kappa {..} + kappa2^2/4 {..}^2].
double
class1_objective(const DensityPair& pair,
                 const CrossingSet& cs,
                 double H1,
                 double H2,
                 double r,
                 const Kernel& kernel = Kernel::triweight());

BandwidthPlan
optimal_bandwidths(const DensityPair& pair,
                   const CrossingSet& cs,
                   std::size_t n,
                   double r = 1.0,
                   const Kernel& kernel = Kernel::triweight());

//! Rescales a plan to another sample size (same constants and exponent).
BandwidthPlan
rescale_plan(const BandwidthPlan& plan, std::size_t n);

//! N univariate populations with priors.
struct MultiPopulationModel
{
  std::vector<Density> densities;
  std::vector<double> priors;
};

//! A crossing y of p_i f_i and p_j f_j (i != j).
struct PairCrossing
{
  std::size_t i;
  std::size_t j;
  double y;
};

struct MultiRiskTerms
{
  double variance;
  double bias;
  double total() const { return variance + bias; }
};

//! T(H_1..H_N): ordered double sums over i != j, each listed crossing
//! contributing for (i, j) and (j, i).
MultiRiskTerms
multi_T(const MultiPopulationModel& model,
        const std::vector<PairCrossing>& table,
        const std::vector<double>& H,
        const std::vector<double>& r,
        const Kernel& kernel = Kernel::triweight());

struct MultiBandwidthPlan
{
  std::vector<double> H;
  double value;
};

//! Minimises T over H by multi-start Nelder-Mead in log H. Populations that
//! take part in no crossing keep H = 1.
MultiBandwidthPlan
minimize_multi_T(const MultiPopulationModel& model,
                 const std::vector<PairCrossing>& table,
                 const std::vector<double>& r,
                 const Kernel& kernel = Kernel::triweight());

} // namespace bwclass
