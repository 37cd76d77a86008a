#include "bwclass/densities.hpp"
#include "bwclass/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bwclass;

namespace {

double
class1b_g(double x)
{
  return 0.2 * oracle::normal_pdf(x, 0.5, 1.0) + 0.2 * oracle::normal_pdf(x, 1.0, 2.0 / 3.0) +
         0.6 * oracle::normal_pdf(x, 19.0 / 12.0, 5.0 / 9.0);
}

double
cauchy_pdf(double x)
{
  return 1.0 / (M_PI * (1.0 + x * x));
}

} // namespace

TEST(Density, NormalDerivativesMatchHermiteForms)
{
  const auto d = Density::normal(0.3, 1.7);
  for (double x : { -2.0, -0.4, 0.3, 1.1, 3.5 }) {
    const double z = (x - 0.3) / 1.7;
    const double phi = oracle::normal_pdf(z) / 1.7;
    EXPECT_NEAR(d.pdf(x), phi, 1e-15);
    EXPECT_NEAR(d.derivative(1, x), -z * phi / 1.7, 1e-15);
    EXPECT_NEAR(d.derivative(2, x), (z * z - 1) * phi / std::pow(1.7, 2), 1e-15);
    EXPECT_NEAR(d.derivative(3, x), -(z * z * z - 3 * z) * phi / std::pow(1.7, 3), 1e-15);
    EXPECT_NEAR(d.derivative(4, x), (std::pow(z, 4) - 6 * z * z + 3) * phi / std::pow(1.7, 4),
                1e-15);
  }
}

TEST(Density, DerivativesAgreeWithFiniteDifferences)
{
  const std::vector<Density> cases{ Density::normal(-1.2, 0.6),
                                    make_pair(PairId::Class1b).g,
                                    Density::cauchy(),
                                    Density::pareto(2.5) };
  for (const auto& d : cases) {
    for (int k = 1; k <= 4; ++k) {
      for (double x : { -1.7, -0.3, 0.6, 1.85, 3.2 }) {
        if (d.describe().rfind("pareto", 0) == 0 && x < 1.2)
          continue;
        const double fd =
          oracle::derivative([&](double t) { return d.derivative(k - 1, t); }, x, 1e-3);
        EXPECT_NEAR(d.derivative(k, x), fd, 1e-7 * (1.0 + std::abs(fd)))
          << d.describe() << " k=" << k << " x=" << x;
      }
    }
  }
}

TEST(Density, MixturePdfMatchesHandSum)
{
  const auto g = make_pair(PairId::Class1b).g;
  for (double x = -3.0; x <= 4.0; x += 0.25)
    EXPECT_NEAR(g.pdf(x), class1b_g(x), 1e-15);
}

TEST(Density, CdfAndQuantileRoundTrip)
{
  const std::vector<Density> cases{ Density::normal(0, 1), make_pair(PairId::Class1b).g,
                                    Density::cauchy(), Density::pareto(2.0) };
  for (const auto& d : cases) {
    for (double q : { 0.001, 0.1, 0.5, 0.77, 0.999 })
      EXPECT_NEAR(d.cdf(d.quantile(q)), q, 1e-10) << d.describe();
  }
  EXPECT_NEAR(Density::pareto(2.0).quantile(0.99), 100.0, 1e-9);
  EXPECT_NEAR(Density::cauchy().cdf(1.0), 0.75, 1e-15);
}

TEST(Density, CdfAgreesWithQuadrature)
{
  const auto g = make_pair(PairId::Class1b).g;
  EXPECT_NEAR(g.cdf(0.7), oracle::simpson(class1b_g, -15.0, 0.7, 40000), 1e-10);
  const auto p = Density::pareto(2.5);
  EXPECT_NEAR(p.cdf(3.0), oracle::simpson([&](double x) { return p.pdf(x); }, 1.0, 3.0), 1e-10);
  EXPECT_EQ(p.pdf(0.5), 0.0);
  EXPECT_EQ(p.cdf(0.5), 0.0);
}

TEST(Density, SamplersPassKolmogorovSmirnov)
{
  const std::vector<Density> cases{ Density::normal(-1.2, 0.6), make_pair(PairId::Class1b).g,
                                    Density::cauchy(), Density::pareto(2.5) };
  for (const auto& d : cases) {
    Rng rng = make_rng(99);
    const auto draws = d.sample(20000, rng);
    EXPECT_LT(oracle::ks_statistic(draws, [&](double x) { return d.cdf(x); }),
              oracle::ks_critical(draws.size()))
      << d.describe();
  }
}

TEST(Density, ValidatesParameters)
{
  EXPECT_THROW(Density::normal(0, 0), ParameterError);
  EXPECT_THROW(Density::normal_mixture({ { 0.5, 0, 1 }, { 0.4, 1, 1 } }), ParameterError);
  EXPECT_THROW(Density::pareto(1.0), ParameterError);
  EXPECT_THROW(make_pareto_pair(2.0, 3.5), ParameterError);
  EXPECT_THROW(make_pareto_pair(2.5, 2.0), ParameterError);
  EXPECT_NO_THROW(make_pareto_pair(2.0, 2.5));
  EXPECT_THROW(parse_pair_id("class3"), ParameterError);
}

TEST(Crossings, Class1aMatchesIndependentRoot)
{
  const auto pair = make_pair(PairId::Class1a);
  const auto delta = [](double x) {
    return 0.5 * oracle::normal_pdf(x) - 0.5 * oracle::normal_pdf(x, -1.2, 0.6);
  };
  const auto cs = crossings(pair);
  ASSERT_EQ(cs.nu(), 2u);
  EXPECT_NEAR(cs.points[0].y, oracle::bisect(delta, -4.0, -2.0), 1e-10);
  EXPECT_NEAR(cs.points[1].y, oracle::bisect(delta, -1.0, 0.0), 1e-10);
  EXPECT_NEAR(cs.points[1].y, -0.518422, 1e-6);
  // Curvatures at the body crossing.
  EXPECT_NEAR(cs.points[1].f2, -0.25504, 1e-5);
  EXPECT_NEAR(cs.points[1].g2, 0.28136, 1e-5);
  EXPECT_EQ(cs.regime, Regime::Class1);
}

TEST(Crossings, Class1bMatchesIndependentRoot)
{
  const auto pair = make_pair(PairId::Class1b);
  const auto cs = crossings(pair);
  ASSERT_EQ(cs.nu(), 1u);
  const auto delta = [](double x) { return 0.5 * oracle::normal_pdf(x) - 0.5 * class1b_g(x); };
  EXPECT_NEAR(cs.points[0].y, oracle::bisect(delta, 0.0, 1.5), 1e-10);
  EXPECT_NEAR(cs.points[0].y, 0.707, 1e-3);
  EXPECT_NEAR(cs.points[0].f2, -0.156, 2e-3);
  EXPECT_NEAR(cs.points[0].g2, 0.327, 2e-3);
}

TEST(Crossings, Class2aIsSymmetric)
{
  const auto cs = crossings(make_pair(PairId::Class2a));
  ASSERT_EQ(cs.nu(), 1u);
  EXPECT_NEAR(cs.points[0].y, 0.5, 1e-12);
  EXPECT_NEAR(cs.points[0].f2, cs.points[0].g2, 1e-12);
  EXPECT_NEAR(cs.points[0].f2, -0.264, 2e-3);
  EXPECT_EQ(cs.regime, Regime::Class2);
  ASSERT_TRUE(cs.R.has_value());
  EXPECT_NEAR(*cs.R, 1.0, 1e-12);
}

TEST(Crossings, Class2bHasTwoSymmetricPoints)
{
  const auto cs = crossings(make_pair(PairId::Class2b));
  ASSERT_EQ(cs.nu(), 2u);
  const auto delta = [](double x) { return 0.5 * oracle::normal_pdf(x) - 0.5 * cauchy_pdf(x); };
  const double y = oracle::bisect(delta, 1.0, 3.0);
  EXPECT_NEAR(cs.points[1].y, y, 1e-10);
  EXPECT_NEAR(cs.points[0].y, -y, 1e-10);
  EXPECT_NEAR(cs.points[1].f2, 0.175, 2e-3);
  EXPECT_NEAR(cs.points[1].g2, 0.068, 2e-3);
  EXPECT_EQ(cs.regime, Regime::Class2);
  EXPECT_NEAR(*cs.R, cs.points[0].f2 / cs.points[0].g2, 1e-12);
}

TEST(Crossings, RestrictedIntervalDropsTailCrossing)
{
  const auto cs = crossings(make_pair(PairId::Class1a), { -3.0, 0.0 });
  ASSERT_EQ(cs.nu(), 1u);
  EXPECT_EQ(regime_detect(cs), Regime::Class1);
}

TEST(Crossings, DeltaPrimeMatchesFiniteDifference)
{
  const auto pair = make_pair(PairId::Class1b);
  const auto cs = crossings(pair);
  const double fd = oracle::derivative([&](double x) { return pair.delta(x); }, cs.points[0].y);
  EXPECT_NEAR(cs.points[0].delta_prime, fd, 1e-9);
}

TEST(Crossings, RejectsInfiniteInterval)
{
  EXPECT_THROW(crossings(make_pair(PairId::Class1a), Interval::whole_line()), ParameterError);
}

TEST(Crossings, RegimeDetectRequiresCurvature)
{
  CrossingSet cs;
  cs.p = 0.5;
  cs.points.push_back({ 0.0, 1.0, 0.0, 0.0, 0.0, 0.0 });
  EXPECT_THROW(regime_detect(cs), UnsupportedCurvatureError);
}

TEST(Crossings, MixedCurvatureRatiosAreClass1)
{
  CrossingSet cs;
  cs.p = 0.5;
  cs.points.push_back({ -1.0, 1.0, 0.2, 0.1, 0.0, 0.0 });
  cs.points.push_back({ 1.0, -1.0, 0.2, 0.05, 0.0, 0.0 });
  EXPECT_EQ(regime_detect(cs), Regime::Class1);
}
