#include "bwclass/study.hpp"

#include "bwclass/classifier.hpp"
#include "bwclass/error.hpp"
#include "bwclass/parallel.hpp"
#include "bwclass/random.hpp"
#include "bwclass/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

namespace bwclass {

namespace {

std::string
num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream
open_output(const std::string& dir, const std::string& name)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void
close_output(std::ofstream& out, const std::string& name)
{
  out.close();
  if (!out)
    throw std::runtime_error("failed writing '" + name + "'");
}

double
mean_of(const std::vector<double>& v)
{
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double
sd_of(const std::vector<double>& v)
{
  if (v.size() < 2)
    return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v)
    ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

std::vector<std::size_t>
default_n_list()
{
  std::vector<std::size_t> out;
  for (int k = 0; k <= 9; ++k)
    out.push_back(static_cast<std::size_t>(std::lround(20.0 * std::pow(10.0, k / 9.0))));
  return out;
}

void
ExperimentConfig::validate() const
{
  if (n_list.empty())
    throw ParameterError("n_list must not be empty");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw ParameterError("n_list must be strictly increasing");
  if (reps == 0)
    throw ParameterError("reps must be at least 1");
  selector.validate();
}

double
SlopeFit::center_x() const
{
  double s = 0.0;
  for (const auto& [x, y] : points)
    s += x;
  return s / static_cast<double>(points.size());
}

SlopeFit
fit_slope(std::vector<std::pair<double, double>> points, Which which)
{
  if (points.size() < 2)
    throw DegenerateRegressionError("slope fit needs at least two points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0))
    throw DegenerateRegressionError("slope fit needs two distinct x values");
  const double slope = sxy / sxx;
  return { slope, my - slope * mx, std::move(points), which };
}

ReferenceLine
reference_line(const SlopeFit& fit, double slope)
{
  const double cx = fit.center_x();
  return { slope, fit.at(cx) - slope * cx };
}

std::uint64_t
cell_seed(std::uint64_t master, std::size_t n_index, std::size_t rep)
{
  return derive_seed(master, n_index, rep);
}

TrainingData
draw_training(const DensityPair& pair, std::size_t m, std::size_t n, std::uint64_t seed)
{
  Rng rng = make_rng(seed);
  auto x = pair.f.sample(m, rng);
  auto y = pair.g.sample(n, rng);
  return { std::move(x), std::move(y), pair.p };
}

StudyResult
run_study(const ExperimentConfig& cfg)
{
  cfg.validate();
  const DensityPair pair = make_pair(cfg.pair);
  const std::size_t N = cfg.n_list.size();
  std::vector<ReplicateRow> rows(N * cfg.reps);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t cell) {
    const std::size_t k = cell / cfg.reps;
    const std::size_t rep = cell % cfg.reps;
    const std::size_t n = cfg.n_list[k];
    const std::uint64_t seed = cell_seed(cfg.seed, k, rep);
    const auto data = draw_training(pair, n, n, seed);
    const auto sel = select_bandwidths(data, cfg.selector, derive_seed(seed, 1));
    rows[cell] = { n, rep, sel.h1, sel.h2, sel.err_min, seed };
  });

  StudyResult out;
  out.pair = std::string(pair_name(cfg.pair));
  std::vector<std::pair<double, double>> pts1, pts2;
  for (std::size_t k = 0; k < N; ++k) {
    std::vector<double> a, b;
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      const auto& row = rows[k * cfg.reps + rep];
      a.push_back(-std::log(row.h1));
      b.push_back(-std::log(row.h2));
    }
    const std::size_t n = cfg.n_list[k];
    out.summary.push_back({ n, mean_of(a), mean_of(b), sd_of(a), sd_of(b) });
    const double ln = std::log(static_cast<double>(n));
    pts1.emplace_back(ln, out.summary.back().mean_neglog_h1);
    pts2.emplace_back(ln, out.summary.back().mean_neglog_h2);
  }
  out.rows = std::move(rows);
  if (N >= 2) {
    out.fit_h1 = fit_slope(std::move(pts1), Which::H1);
    out.fit_h2 = fit_slope(std::move(pts2), Which::H2);
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.fit_h1 = { nan, nan, std::move(pts1), Which::H1 };
    out.fit_h2 = { nan, nan, std::move(pts2), Which::H2 };
  }
  return out;
}

void
write_study(const StudyResult& r, const std::string& dir)
{
  {
    const std::string name = r.pair + "_replicates.csv";
    auto out = open_output(dir, name);
    out << "pair,n,rep,h1,h2,err_boot_min,seed\n";
    for (const auto& row : r.rows) {
      out << r.pair << ',' << row.n << ',' << row.rep << ',' << num(row.h1) << ','
          << num(row.h2) << ',' << num(row.err_boot_min) << ',' << row.seed << '\n';
    }
    close_output(out, name);
  }
  {
    const std::string name = r.pair + "_summary.csv";
    auto out = open_output(dir, name);
    out << "pair,n,mean_neglog_h1,mean_neglog_h2,sd_neglog_h1,sd_neglog_h2\n";
    for (const auto& s : r.summary) {
      out << r.pair << ',' << s.n << ',' << num(s.mean_neglog_h1) << ','
          << num(s.mean_neglog_h2) << ',' << num(s.sd_neglog_h1) << ','
          << num(s.sd_neglog_h2) << '\n';
    }
    close_output(out, name);
  }
  {
    const std::string name = r.pair + "_slopes.csv";
    auto out = open_output(dir, name);
    out << "pair,which,slope,intercept\n";
    out << r.pair << ",h1," << num(r.fit_h1.slope) << ',' << num(r.fit_h1.intercept) << '\n';
    out << r.pair << ",h2," << num(r.fit_h2.slope) << ',' << num(r.fit_h2.intercept) << '\n';
    close_output(out, name);
  }
  {
    const std::string name = r.pair + "_plot.dat";
    auto out = open_output(dir, name);
    const auto a5 = reference_line(r.fit_h1, 0.2);
    const auto a9 = reference_line(r.fit_h1, 1.0 / 9.0);
    const auto b5 = reference_line(r.fit_h2, 0.2);
    const auto b9 = reference_line(r.fit_h2, 1.0 / 9.0);
    out << "# " << r.pair << "\n";
    out << "# log_n mean_neglog_h1 mean_neglog_h2 fit_h1 fit_h2 ref5_h1 ref9_h1 ref5_h2 ref9_h2\n";
    for (std::size_t k = 0; k < r.summary.size(); ++k) {
      const double x = r.fit_h1.points[k].first;
      out << num(x) << ' ' << num(r.summary[k].mean_neglog_h1) << ' '
          << num(r.summary[k].mean_neglog_h2) << ' ' << num(r.fit_h1.at(x)) << ' '
          << num(r.fit_h2.at(x)) << ' ' << num(a5.intercept + a5.slope * x) << ' '
          << num(a9.intercept + a9.slope * x) << ' ' << num(b5.intercept + b5.slope * x) << ' '
          << num(b9.intercept + b9.slope * x) << '\n';
    }
    close_output(out, name);
  }
}

std::vector<TailRow>
run_tail_study(double alpha,
               double beta,
               const std::vector<std::size_t>& n_list,
               std::size_t reps,
               std::uint64_t seed,
               std::optional<double> x0,
               unsigned threads)
{
  const DensityPair pair = make_pareto_pair(alpha, beta, 0.5);
  if (reps == 0 || n_list.empty())
    throw ParameterError("tail study needs reps >= 1 and at least one sample size");
  const double start = x0.value_or(pair.f.quantile(0.99));
  std::vector<TailRow> out;
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    const std::size_t n = n_list[k];
    const double h = std::pow(static_cast<double>(n), -0.2);
    std::vector<double> mass(reps);
    parallel_for(reps, threads, [&](std::size_t rep) {
      auto data = draw_training(pair, n, n, cell_seed(seed, k, rep));
      const TrainedClassifier c(std::move(data.X), std::move(data.Y), h, h, pair.p);
      double m = 0.0;
      for (const auto& seg : decision_segments(c, AhatWholeLine{})) {
        if (seg.label == Population::G && seg.hi > start)
          m += pair.f.mass(std::max(seg.lo, start), seg.hi);
      }
      mass[rep] = m;
    });
    const double mean = mean_of(mass);
    const double se = sd_of(mass) / std::sqrt(static_cast<double>(reps));
    const double nh = static_cast<double>(n) * h;
    out.push_back({ n, h, start, mean, se, nh * mean });
  }
  return out;
}

LightTailReport
run_light_tail_contrast(std::size_t n,
                        std::size_t reps,
                        std::uint64_t seed,
                        double threshold,
                        unsigned threads)
{
  if (reps == 0 || n < 2)
    throw ParameterError("light-tail contrast needs reps >= 1 and n >= 2");
  const DensityPair pair =
    make_custom_pair(Density::normal(0.0, 1.0), Density::normal(0.0, 1.0 / 3.0), 0.5, "light");
  const double h = std::pow(static_cast<double>(n), -0.2);
  const double total = pair.f.mass(threshold, std::numeric_limits<double>::infinity());
  std::vector<double> frac(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    auto data = draw_training(pair, n, n, cell_seed(seed, 0, rep));
    const TrainedClassifier c(std::move(data.X), std::move(data.Y), h, h, pair.p);
    double m = 0.0;
    for (const auto& seg : decision_segments(c, AhatWholeLine{})) {
      if (seg.label == Population::F && seg.hi > threshold)
        m += pair.f.mass(std::max(seg.lo, threshold), seg.hi);
    }
    frac[rep] = m / total;
  });
  return { n, threshold, mean_of(frac) };
}

void
write_tail_study(const std::vector<TailRow>& rows,
                 const std::optional<LightTailReport>& contrast,
                 const std::string& dir)
{
  const std::string name = "tail.csv";
  auto out = open_output(dir, name);
  out << "n,h,x0,tail_mass,tail_mass_se,scaled\n";
  for (const auto& r : rows) {
    out << r.n << ',' << num(r.h) << ',' << num(r.x0) << ',' << num(r.tail_mass) << ','
        << num(r.tail_mass_se) << ',' << num(r.scaled) << '\n';
  }
  close_output(out, name);
  if (contrast) {
    const std::string cname = "tail_light.csv";
    auto c = open_output(dir, cname);
    c << "n,threshold,fraction_correct\n";
    c << contrast->n << ',' << num(contrast->threshold) << ',' << num(contrast->fraction_correct)
      << '\n';
    close_output(c, cname);
  }
}

double
interquartile_range(std::vector<double> v)
{
  if (v.empty())
    throw ParameterError("interquartile range of an empty sample");
  std::sort(v.begin(), v.end());
  const auto q = [&](double prob) {
    const double pos = prob * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return q(0.75) - q(0.25);
}

double
spread_ratio(const std::vector<double>& boot, const std::vector<double>& cv)
{
  const double a = interquartile_range(boot);
  const double b = interquartile_range(cv);
  if (a == b)
    return 1.0;
  return a > 0.0 ? b / a : std::numeric_limits<double>::infinity();
}

CvComparison
run_cv_comparison(PairId id,
                  std::size_t n,
                  std::size_t reps,
                  std::uint64_t seed,
                  const SelectorConfig& selector,
                  unsigned threads)
{
  if (reps == 0)
    throw ParameterError("reps must be at least 1");
  selector.validate();
  const DensityPair pair = make_pair(id);
  std::vector<CvRow> rows(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    const std::uint64_t s = cell_seed(seed, 0, rep);
    const auto data = draw_training(pair, n, n, s);
    const auto boot = select_bandwidths(data, selector, derive_seed(s, 1));
    const auto cv = cv_select(data, selector);
    rows[rep] = { rep, boot.h1, boot.h2, cv.h1, cv.h2 };
  });
  std::vector<double> lb, lc;
  for (const auto& r : rows) {
    lb.push_back(std::log(r.boot_h1));
    lc.push_back(std::log(r.cv_h1));
  }
  return { std::string(pair_name(id)), n, std::move(rows), interquartile_range(lb),
           interquartile_range(lc), spread_ratio(lb, lc) };
}

void
write_cv_comparison(const CvComparison& r, const std::string& dir)
{
  const std::string name = r.pair + "_cvcheck.csv";
  auto out = open_output(dir, name);
  out << "pair,n,rep,boot_h1,boot_h2,cv_h1,cv_h2\n";
  for (const auto& row : r.rows) {
    out << r.pair << ',' << r.n << ',' << row.rep << ',' << num(row.boot_h1) << ','
        << num(row.boot_h2) << ',' << num(row.cv_h1) << ',' << num(row.cv_h2) << '\n';
  }
  close_output(out, name);
  const std::string sname = r.pair + "_cvcheck_summary.csv";
  auto s = open_output(dir, sname);
  s << "pair,n,reps,iqr_log_boot_h1,iqr_log_cv_h1,ratio\n";
  s << r.pair << ',' << r.n << ',' << r.rows.size() << ',' << num(r.iqr_log_boot_h1) << ','
    << num(r.iqr_log_cv_h1) << ',' << num(r.ratio) << '\n';
  close_output(s, sname);
}

std::vector<SurfaceCell>
run_risk_surface(PairId id,
                 std::size_t n,
                 std::uint64_t seed,
                 const SelectorConfig& selector,
                 unsigned threads)
{
  const DensityPair pair = make_pair(id);
  const auto data = draw_training(pair, n, n, seed);
  const auto grid = selection_grid(n, selector);
  const auto pilots = pilot_bandwidths(data, selector, Kernel::triweight());
  const auto boot = bootstrap_surface(
    data, grid, grid, pilots, selector, derive_seed(seed, 1), Kernel::triweight(), threads);
  std::vector<SurfaceCell> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      out.push_back({ grid[i], grid[j], boot[i * grid.size() + j], cv_err(data, grid[i], grid[j]) });
  return out;
}

void
write_risk_surface(const std::vector<SurfaceCell>& cells,
                   const std::string& pair,
                   std::size_t n,
                   const std::string& dir)
{
  const std::string name = pair + "_surface_n" + std::to_string(n) + ".csv";
  auto out = open_output(dir, name);
  out << "h1,h2,err_boot,err_cv\n";
  for (const auto& c : cells)
    out << num(c.h1) << ',' << num(c.h2) << ',' << num(c.err_boot) << ',' << num(c.err_cv) << '\n';
  close_output(out, name);
}

} // namespace bwclass
