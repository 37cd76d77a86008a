#include "bwclass/classifier.hpp"
#include "bwclass/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace bwclass;

namespace {

struct TailCase
{
  std::vector<double> x;
  std::vector<double> y;
  double h1;
  double h2;
  double query;
  Side side;
};

// Walks away from the query on a fine grid until one estimate turns
// positive; that population's support ends nearest the query.
std::optional<Population>
grid_scan(const TrainedClassifier& c, double x, Side side, double step)
{
  const double dir = side == Side::Right ? -1.0 : 1.0;
  for (int k = 1; k < 5'000'000; ++k) {
    const double t = x + dir * step * k;
    const bool f = c.fhat()(t) > 0.0;
    const bool g = c.ghat()(t) > 0.0;
    if (f && g)
      return std::nullopt;
    if (f)
      return Population::F;
    if (g)
      return Population::G;
  }
  return std::nullopt;
}

TailCase
random_tail_case(std::mt19937_64& rng)
{
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> loc(-20.0, 20.0);
  std::uniform_real_distribution<double> bw(0.05, 2.0);
  TailCase tc;
  for (int i = count(rng); i > 0; --i)
    tc.x.push_back(loc(rng));
  for (int i = count(rng); i > 0; --i)
    tc.y.push_back(loc(rng));
  tc.h1 = bw(rng);
  tc.h2 = bw(rng);
  tc.side = rng() % 2 ? Side::Right : Side::Left;
  tc.query = loc(rng) * 1.3;
  return tc;
}

} // namespace

TEST(ClassifyA0, FollowsSignOfDelta)
{
  const auto pair = make_pair(PairId::Class1a);
  EXPECT_EQ(classify_a0(pair, 1.0).value, Population::F);
  EXPECT_EQ(classify_a0(pair, -1.2).value, Population::G);
  EXPECT_EQ(classify_a0(pair, -6.0).value, Population::F);
  const auto pair2 = make_pair(PairId::Class2a);
  const auto tie = classify_a0(pair2, 0.5);
  EXPECT_EQ(tie.value, Population::F);
  EXPECT_EQ(tie.path, DecisionPath::TieBreak);
}

TEST(TrainedClassifier, A1IsSignOfEstimates)
{
  Rng rng = make_rng(12);
  const auto pair = make_pair(PairId::Class1a);
  const TrainedClassifier c(pair.f.sample(50, rng), pair.g.sample(50, rng), 0.6, 0.4, 0.5);
  for (double x = -3.0; x <= 3.0; x += 0.05) {
    const auto l = c.classify_a1(x);
    const double f = c.fhat()(x);
    const double g = c.ghat()(x);
    if (f == 0.0 && g == 0.0) {
      EXPECT_FALSE(l.has_value());
      continue;
    }
    ASSERT_TRUE(l.has_value());
    EXPECT_EQ(l->value, 0.5 * f >= 0.5 * g ? Population::F : Population::G);
  }
}

TEST(TrainedClassifier, BothVanishFallsThroughToTails)
{
  const TrainedClassifier c({ 0.0, 1.0 }, { 10.0, 11.0 }, 0.5, 0.5, 0.5);
  EXPECT_FALSE(c.classify_a1(5.0).has_value());
  // Median is 1.0, so x = 5 uses the right tail: support of X ends at 1.5.
  const auto l = c.classify(5.0);
  EXPECT_EQ(l.value, Population::F);
  EXPECT_EQ(l.path, DecisionPath::TailRight);
  EXPECT_EQ(c.classify(20.0).value, Population::G);
  EXPECT_EQ(c.classify(-20.0).value, Population::F);
  EXPECT_EQ(c.classify(-20.0).path, DecisionPath::TailLeft);
}

TEST(TrainedClassifier, EmptyTailThrows)
{
  const TrainedClassifier c({ 0.0 }, { 1.0 }, 0.2, 0.2, 0.5);
  EXPECT_THROW(c.classify_tail(-5.0, Side::Right), EmptyTailError);
  EXPECT_THROW(c.classify_tail(5.0, Side::Left), EmptyTailError);
}

TEST(TrainedClassifier, TailRuleMatchesEndpointEnumeration)
{
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    auto tc = random_tail_case(rng);
    const TrainedClassifier c(tc.x, tc.y, tc.h1, tc.h2, 0.5);
    std::optional<std::pair<double, Population>> best;
    const auto consider = [&](double e, Population who) {
      const bool ok = tc.side == Side::Right ? e <= tc.query : e >= tc.query;
      if (!ok)
        return;
      const bool better = !best || (tc.side == Side::Right ? e > best->first : e < best->first) ||
                          (e == best->first && who == Population::F);
      if (better)
        best = { e, who };
    };
    const double sgn = tc.side == Side::Right ? 1.0 : -1.0;
    for (double v : tc.x)
      consider(v + sgn * tc.h1, Population::F);
    for (double v : tc.y)
      consider(v + sgn * tc.h2, Population::G);
    if (!best) {
      EXPECT_THROW(c.classify_tail(tc.query, tc.side), EmptyTailError);
      continue;
    }
    EXPECT_EQ(c.classify_tail(tc.query, tc.side).value, best->second) << "trial " << trial;
  }
}

TEST(TrainedClassifier, TailRuleMatchesGridScan)
{
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 100) {
    auto tc = random_tail_case(rng);
    const TrainedClassifier c(tc.x, tc.y, tc.h1, tc.h2, 0.5);
    if (c.classify_a1(tc.query).has_value())
      continue;
    const auto expect = grid_scan(c, tc.query, tc.side, 1e-4);
    if (!expect)
      continue;
    EXPECT_EQ(c.classify_tail(tc.query, tc.side).value, *expect);
    ++checked;
  }
}

TEST(MultiPopulation, TwoPopulationsReduceToA1)
{
  Rng rng = make_rng(4);
  const auto pair = make_pair(PairId::Class1b);
  auto x = pair.f.sample(40, rng);
  auto y = pair.g.sample(40, rng);
  const TrainedClassifier two(x, y, 0.5, 0.4, 0.3);
  const MultiPopulationClassifier multi({ x, y }, { 0.5, 0.4 }, { 0.3, 0.7 });
  for (double t = -3.0; t <= 4.0; t += 0.03) {
    const auto a = two.classify_a1(t);
    const auto b = multi.classify(t);
    ASSERT_EQ(a.has_value(), b.has_value()) << t;
    if (a && two.delta_hat(t) != 0.0)
      EXPECT_EQ(*b, a->value == Population::F ? 0u : 1u) << t;
  }
}

TEST(MultiPopulation, PicksLargestWeightedEstimate)
{
  const MultiPopulationClassifier c({ { 0.0 }, { 1.0 }, { 2.0 } }, { 1.0, 1.0, 1.0 },
                                    { 0.2, 0.3, 0.5 });
  const auto w = c.weighted_estimates(1.9);
  const auto best = std::max_element(w.begin(), w.end()) - w.begin();
  EXPECT_EQ(*c.classify(1.9), static_cast<std::size_t>(best));
  EXPECT_FALSE(c.classify(10.0).has_value());
  EXPECT_THROW(MultiPopulationClassifier({ { 0.0 }, { 1.0 } }, { 1.0, 1.0 }, { 0.3, 0.3 }),
               ParameterError);
  EXPECT_THROW(MultiPopulationClassifier({ { 0.0 } }, { 1.0 }, { 1.0 }), ParameterError);
}

TEST(Multivariate, NormaliserMakesKernelIntegrateToOne)
{
  for (const auto& k : { Kernel::triweight(), Kernel::epanechnikov() }) {
    const double c = spherical_normaliser(k, 2);
    const int n = 1200;
    const double step = 2.0 / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u = -1.0 + (i + 0.5) * step;
        const double v = -1.0 + (j + 0.5) * step;
        s += k(std::hypot(u, v));
      }
    EXPECT_NEAR(c * s * step * step, 1.0, 2e-5) << k.name();
  }
  // Three dimensions: radial form against the sphere area 4 pi.
  const auto k = Kernel::triweight();
  const double radial = oracle::simpson([&](double r) { return k(r) * r * r; }, 0.0, 1.0);
  EXPECT_NEAR(spherical_normaliser(k, 3), 1.0 / (4.0 * M_PI * radial), 1e-12);
}

TEST(Multivariate, OneDimensionMatchesUnivariate)
{
  Rng rng = make_rng(6);
  const auto pair = make_pair(PairId::Class1a);
  auto x = pair.f.sample(30, rng);
  auto y = pair.g.sample(30, rng);
  const TrainedClassifier uni(x, y, 0.7, 0.5, 0.5);
  const MultivariateClassifier multi({ x, 1 }, { y, 1 }, 0.7, 0.5, 0.5);
  for (double t = -3.0; t <= 3.0; t += 0.1) {
    const double pt[1] = { t };
    EXPECT_NEAR(multi.fhat(pt), uni.fhat()(t), 1e-12);
    EXPECT_NEAR(multi.ghat(pt), uni.ghat()(t), 1e-12);
  }
}

TEST(Multivariate, TwoDimensionalEstimateIntegratesToOne)
{
  const MultivariateClassifier c({ { 0.0, 0.0, 1.0, 0.5 }, 2 }, { { 3.0, 3.0 }, 2 }, 0.8, 0.8, 0.5);
  const int n = 800;
  const double lo = -1.0;
  const double hi = 2.0;
  const double step = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double pt[2] = { lo + (i + 0.5) * step, lo + (j + 0.5) * step };
      s += c.fhat(pt);
    }
  EXPECT_NEAR(s * step * step, 1.0, 1e-4);
  const double far[2] = { 10.0, -10.0 };
  EXPECT_FALSE(c.classify(far).has_value());
}
