#include "bwclass/error.hpp"
#include "bwclass/quadrature.hpp"
#include "bwclass/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace bwclass;

TEST(Quadrature, KnownIntegrals)
{
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -inf, inf), std::sqrt(M_PI),
              1e-13);
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, M_PI), 2.0, 1e-13);
  EXPECT_NEAR(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, inf), M_PI / 2, 1e-12);
  EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0), 0.0);
}

TEST(Interval, Predicates)
{
  const Interval whole = Interval::whole_line();
  EXPECT_FALSE(whole.finite());
  EXPECT_TRUE(whole.contains(1e300));
  const Interval I{ -1.0, 2.0 };
  EXPECT_TRUE(I.finite());
  EXPECT_TRUE(I.contains(2.0));
  EXPECT_FALSE(I.contains(2.1));
}

TEST(Random, DerivedSeedsAreStableAndDistinct)
{
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  Rng a = make_rng(5);
  Rng b = make_rng(5);
  EXPECT_EQ(a(), b());
}
