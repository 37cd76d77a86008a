#include "bwclass/error.hpp"
#include "bwclass/kernels.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bwclass;

namespace {

std::vector<Kernel>
all_kernels()
{
  return { Kernel::triweight(), Kernel::biweight(), Kernel::epanechnikov() };
}

} // namespace

TEST(Kernel, TriweightClosedForms)
{
  const auto k = Kernel::triweight();
  EXPECT_NEAR(k.moment(0), 1.0, 1e-14);
  EXPECT_NEAR(k.moment(2), 1.0 / 9.0, 1e-14);
  EXPECT_NEAR(k.moment(4), 1.0 / 33.0, 1e-14);
  EXPECT_NEAR(k.roughness(0), 350.0 / 429.0, 1e-14);
  EXPECT_NEAR(k.roughness(4), 33075.0, 1e-8);
  EXPECT_DOUBLE_EQ(k.peak(), 35.0 / 32.0);
}

TEST(Kernel, MatchesExplicitTriweight)
{
  const auto k = Kernel::triweight();
  for (double u = -1.2; u <= 1.2; u += 0.01)
    EXPECT_NEAR(k(u), oracle::triweight(u), 1e-15) << u;
}

TEST(Kernel, MomentsAgreeWithQuadrature)
{
  for (const auto& k : all_kernels()) {
    for (int j = 0; j <= 8; ++j) {
      const double ref = oracle::simpson([&](double u) { return std::pow(u, j) * k(u); }, -1, 1);
      EXPECT_NEAR(k.moment(j), ref, 1e-10) << k.name() << " j=" << j;
    }
  }
}

TEST(Kernel, TriweightFourthDerivativeRoughnessByHand)
{
  // K'''' = 35/32 (72 - 360 u^2) on [-1, 1].
  const double c = 35.0 / 32.0;
  const double ref =
    oracle::simpson([&](double u) { return std::pow(c * (72.0 - 360.0 * u * u), 2); }, -1, 1);
  EXPECT_NEAR(Kernel::triweight().roughness(4), ref, 1e-7);
}

TEST(Kernel, DerivativesAgreeWithFiniteDifferences)
{
  for (const auto& k : all_kernels()) {
    const int top = k.id() == KernelId::Epanechnikov ? 2 : 4;
    for (int r = 1; r <= top; ++r) {
      for (double u : { -0.7, -0.3, 0.05, 0.4, 0.8 }) {
        const double fd =
          oracle::derivative([&](double t) { return k.derivative(r - 1, t); }, u, 1e-3);
        EXPECT_NEAR(k.derivative(r, u), fd, 1e-7 * (1.0 + std::abs(fd)))
          << k.name() << " r=" << r << " u=" << u;
      }
    }
  }
}

TEST(Kernel, RoughnessAgreesWithQuadratureOfDerivative)
{
  for (const auto& k : all_kernels()) {
    const int top = k.id() == KernelId::Epanechnikov ? 1 : (k.id() == KernelId::Biweight ? 2 : 3);
    for (int r = 0; r <= top; ++r) {
      const double ref = oracle::simpson(
        [&](double u) { return std::pow(k.derivative(r, u), 2); }, -1 + 1e-12, 1 - 1e-12, 40000);
      EXPECT_NEAR(k.roughness(r), ref, 1e-8 * (1.0 + ref)) << k.name() << " r=" << r;
    }
  }
}

TEST(Kernel, CdfIsIntegralOfDensity)
{
  for (const auto& k : all_kernels()) {
    for (double u : { -1.5, -1.0, -0.6, 0.0, 0.3, 0.99, 2.0 }) {
      const double ref = oracle::simpson([&](double t) { return k(t); }, -1.0, std::clamp(u, -1.0, 1.0));
      EXPECT_NEAR(k.cdf(u), ref, 1e-12) << k.name() << " u=" << u;
    }
  }
}

TEST(Kernel, SamplerPassesKolmogorovSmirnov)
{
  for (const auto& k : all_kernels()) {
    Rng rng = make_rng(17);
    std::vector<double> draws(20000);
    for (auto& d : draws)
      d = k.sample(rng);
    EXPECT_LT(oracle::ks_statistic(draws, [&](double u) { return k.cdf(u); }),
              oracle::ks_critical(draws.size()))
      << k.name();
  }
}

TEST(Kernel, RejectsUnsupportedOrders)
{
  const auto k = Kernel::triweight();
  EXPECT_THROW(k.moment(-1), ParameterError);
  EXPECT_THROW(k.roughness(-1), ParameterError);
}

TEST(Kernel, ParsesNames)
{
  EXPECT_EQ(parse_kernel_id("triweight"), KernelId::Triweight);
  EXPECT_EQ(parse_kernel_id("biweight"), KernelId::Biweight);
  EXPECT_EQ(parse_kernel_id("epanechnikov"), KernelId::Epanechnikov);
  EXPECT_THROW(parse_kernel_id("gaussian"), ParameterError);
}
