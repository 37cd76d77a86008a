#include "bwclass/error.hpp"
#include "bwclass/nelder_mead.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bwclass;

TEST(NelderMead, FindsQuadraticMinimum)
{
  const auto f = [](std::span<const double> x) {
    return std::pow(x[0] - 1.5, 2) + 3.0 * std::pow(x[1] + 0.25, 2) + 0.5 * x[0] * x[1];
  };
  const auto r = nelder_mead(f, { 0.0, 0.0 });
  // Stationary point of the quadratic, solved by hand.
  const double det = 2.0 * 6.0 - 0.25;
  const double x0 = (3.0 * 6.0 - 0.5 * -1.5) / det;
  const double x1 = (2.0 * -1.5 - 0.5 * 3.0) / det;
  EXPECT_NEAR(r.x[0], x0, 1e-6);
  EXPECT_NEAR(r.x[1], x1, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(NelderMead, SolvesRosenbrock)
{
  const auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead(f, { -1.2, 1.0 });
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
}

TEST(NelderMead, BeatsSurroundingGrid)
{
  const auto f = [](std::span<const double> x) {
    return std::cosh(x[0] - 0.3) + std::exp(x[1]) - 2.0 * x[1] + 0.1 * x[0] * x[1];
  };
  const auto r = nelder_mead(f, { 2.0, -1.0 });
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      const double p[2] = { r.x[0] - 1.0 + 0.02 * i, r.x[1] - 1.0 + 0.02 * j };
      EXPECT_LE(r.value, f(p) + 1e-14);
    }
}

TEST(NelderMead, RejectsEmptyStart)
{
  EXPECT_THROW(nelder_mead([](std::span<const double>) { return 0.0; }, {}), ParameterError);
}
