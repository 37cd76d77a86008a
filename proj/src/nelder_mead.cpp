#include "bwclass/nelder_mead.hpp"

#include "bwclass/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bwclass {

namespace {

struct Run
{
  std::vector<double> x;
  double value;
  int evaluations;
  bool converged;
};

Run
simplex_search(const std::function<double(std::span<const double>)>& f,
               const std::vector<double>& start,
               const NelderMeadOptions& opt,
               int budget)
{
  const std::size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  int evals = 0;
  const auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i < n; ++i)
    pts[i + 1][i] += opt.initial_step;
  for (std::size_t i = 0; i <= n; ++i)
    vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  bool converged = false;
  while (evals < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        size = std::max(size, std::abs(pts[i][k] - pts[best][k]));
    const double spread = vals[worst] - vals[best];
    if (size <= opt.x_tol || spread <= opt.f_tol * (std::abs(vals[best]) + opt.f_tol)) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst)
        continue;
      for (std::size_t k = 0; k < n; ++k)
        centroid[k] += pts[i][k] / static_cast<double>(n);
    }
    const auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t k = 0; k < n; ++k)
        out[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
    };

    along(-1.0, trial);
    const double fr = eval(trial);
    if (fr < vals[best]) {
      along(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        vals[worst] = fe;
      } else {
        pts[worst] = trial;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = trial;
      vals[worst] = fr;
      continue;
    }
    // Outside or inside contraction.
    const bool outside = fr < vals[worst];
    along(outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best)
        continue;
      for (std::size_t k = 0; k < n; ++k)
        pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(
    std::distance(vals.begin(), std::min_element(vals.begin(), vals.end())));
  return { pts[best], vals[best], evals, converged };
}

} // namespace

NelderMeadResult
nelder_mead(const std::function<double(std::span<const double>)>& objective,
            std::vector<double> start,
            const NelderMeadOptions& options)
{
  if (start.empty())
    throw ParameterError("Nelder-Mead needs at least one variable");
  int used = 0;
  auto run = simplex_search(objective, start, options, options.max_evaluations);
  used += run.evaluations;
  NelderMeadOptions again = options;
  for (int r = 0; r < options.restarts && used < options.max_evaluations; ++r) {
    again.initial_step = std::max(options.initial_step * 0.1, 1e-6);
    auto next = simplex_search(objective, run.x, again, options.max_evaluations - used);
    used += next.evaluations;
    const bool improved = next.value < run.value;
    if (improved)
      run = std::move(next);
    else
      run.converged = run.converged && next.converged;
    if (!improved)
      break;
  }
  return { run.x, run.value, used, run.converged };
}

} // namespace bwclass
