#include "bwclass/error.hpp"
#include "bwclass/study.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bwclass;

namespace {

std::string
slurp(const std::filesystem::path& p)
{
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig
tiny_config()
{
  ExperimentConfig cfg;
  cfg.pair = PairId::Class2a;
  cfg.n_list = { 20, 30, 45 };
  cfg.reps = 3;
  cfg.selector.boot_iters = 5;
  cfg.selector.grid_per_dim = 4;
  cfg.seed = 9;
  cfg.threads = 1;
  return cfg;
}

std::filesystem::path
scratch(const std::string& name)
{
  auto dir = std::filesystem::temp_directory_path() / ("bwclass_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

} // namespace

TEST(FitSlope, ExactLines)
{
  std::vector<std::pair<double, double>> pts;
  for (double x : { 1.0, 2.0, 3.5, 7.0 })
    pts.emplace_back(x, 0.2 * x + 1.0);
  const auto f = fit_slope(pts);
  EXPECT_NEAR(f.slope, 0.2, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  for (auto& [x, y] : pts)
    y = x / 9.0;
  EXPECT_NEAR(fit_slope(pts).slope, 1.0 / 9.0, 1e-15);
}

TEST(FitSlope, ShiftInvariance)
{
  std::vector<std::pair<double, double>> pts{ { 0.0, 0.3 }, { 1.0, 0.1 }, { 2.0, 0.9 }, { 3.0, 0.8 } };
  const double a = fit_slope(pts).slope;
  for (auto& p : pts)
    p.second += 5.0;
  EXPECT_NEAR(fit_slope(pts).slope, a, 1e-13);
}

TEST(FitSlope, ClosedFormCoefficient)
{
  const std::vector<std::pair<double, double>> pts{ { 2.9957, 0.41 }, { 3.2581, 0.47 },
                                                    { 3.4965, 0.50 }, { 4.1897, 0.63 },
                                                    { 5.2983, 0.85 } };
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = pts.size();
  EXPECT_NEAR(fit_slope(pts).slope, (n * sxy - sx * sy) / (n * sxx - sx * sx), 1e-12);
}

TEST(FitSlope, DegenerateInput)
{
  EXPECT_THROW(fit_slope({ { 1.0, 2.0 }, { 1.0, 3.0 } }), DegenerateRegressionError);
  EXPECT_THROW(fit_slope({ { 1.0, 2.0 } }), DegenerateRegressionError);
}

TEST(ReferenceLine, PassesThroughCentre)
{
  const auto f = fit_slope({ { 1.0, 0.5 }, { 2.0, 0.9 }, { 4.0, 1.1 } });
  for (double s : { 0.2, 1.0 / 9.0 }) {
    const auto line = reference_line(f, s);
    EXPECT_EQ(line.slope, s);
    const double cx = f.center_x();
    EXPECT_NEAR(line.intercept + s * cx, f.at(cx), 1e-12);
  }
}

TEST(Study, DefaultSampleSizes)
{
  const std::vector<std::size_t> expect{ 20, 26, 33, 43, 56, 72, 93, 120, 155, 200 };
  EXPECT_EQ(default_n_list(), expect);
}

TEST(Study, ValidatesConfig)
{
  auto cfg = tiny_config();
  cfg.n_list = { 30, 20 };
  EXPECT_THROW(run_study(cfg), ParameterError);
  cfg = tiny_config();
  cfg.reps = 0;
  EXPECT_THROW(run_study(cfg), ParameterError);
}

TEST(Study, SummaryMatchesReplicates)
{
  const auto r = run_study(tiny_config());
  ASSERT_EQ(r.rows.size(), 9u);
  ASSERT_EQ(r.summary.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t rep = 0; rep < 3; ++rep) {
      a += -std::log(r.rows[k * 3 + rep].h1);
      b += -std::log(r.rows[k * 3 + rep].h2);
    }
    EXPECT_NEAR(r.summary[k].mean_neglog_h1, a / 3.0, 1e-12);
    EXPECT_NEAR(r.summary[k].mean_neglog_h2, b / 3.0, 1e-12);
  }
}

TEST(Study, OutputIsByteIdenticalAcrossRunsAndThreads)
{
  auto cfg = tiny_config();
  const auto a = scratch("a");
  const auto b = scratch("b");
  write_study(run_study(cfg), a.string());
  cfg.threads = 3;
  write_study(run_study(cfg), b.string());
  for (const char* name :
       { "class2a_replicates.csv", "class2a_summary.csv", "class2a_slopes.csv", "class2a_plot.dat" }) {
    const auto x = slurp(a / name);
    EXPECT_FALSE(x.empty()) << name;
    EXPECT_EQ(x, slurp(b / name)) << name;
  }
  const auto header = slurp(a / "class2a_replicates.csv").substr(0, 36);
  EXPECT_EQ(header, "pair,n,rep,h1,h2,err_boot_min,seed\nc");
}

TEST(Study, UnwritableDirectoryFails)
{
  const auto r = run_study(tiny_config());
  const auto file = scratch("file");
  std::ofstream(file.string()) << "x";
  EXPECT_ANY_THROW(write_study(r, (file / "sub").string()));
}

TEST(TailStudy, RerunIsIdentical)
{
  const auto a = run_tail_study(2.0, 2.5, { 50 }, 1, 4, std::nullopt, 1);
  const auto b = run_tail_study(2.0, 2.5, { 50 }, 1, 4, std::nullopt, 1);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].tail_mass, b[0].tail_mass);
  EXPECT_NEAR(a[0].x0, 100.0, 1e-9);
  EXPECT_NEAR(a[0].scaled, 50.0 * a[0].h * a[0].tail_mass, 1e-15);
}

TEST(TailStudy, ParameterOrdering)
{
  EXPECT_THROW(run_tail_study(2.5, 2.0, { 50 }, 1, 4), ParameterError);
}

TEST(CvComparison, SelfComparisonAndRowCount)
{
  const std::vector<double> v{ 0.1, 0.5, -0.2, 0.9 };
  EXPECT_EQ(spread_ratio(v, v), 1.0);
  SelectorConfig sel;
  sel.boot_iters = 5;
  sel.grid_per_dim = 4;
  const auto r = run_cv_comparison(PairId::Class1a, 30, 4, 2, sel, 1);
  EXPECT_EQ(r.rows.size(), 4u);
}

TEST(RiskSurface, CoversGrid)
{
  SelectorConfig sel;
  sel.boot_iters = 5;
  sel.grid_per_dim = 3;
  const auto cells = run_risk_surface(PairId::Class1b, 40, 1, sel, 1);
  ASSERT_EQ(cells.size(), 9u);
  for (const auto& c : cells) {
    EXPECT_GE(c.err_boot, 0.0);
    EXPECT_LE(c.err_cv, 1.0);
  }
}
