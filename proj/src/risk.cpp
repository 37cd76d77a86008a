#include "bwclass/risk.hpp"

#include "bwclass/error.hpp"
#include "bwclass/nelder_mead.hpp"
#include "bwclass/parallel.hpp"
#include "bwclass/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bwclass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double
tail_mass_below(const Density& d, double x)
{
  if (d.has_cdf())
    return d.cdf(x);
  return integrate([&](double t) { return d.pdf(t); }, -kInf, x, 1e-11);
}

double
tail_mass_above(const Density& d, double x)
{
  if (d.has_cdf())
    return 1.0 - d.cdf(x);
  return integrate([&](double t) { return d.pdf(t); }, x, kInf, 1e-11);
}

} // namespace

double
bayes_risk(const DensityPair& pair, Interval interval)
{
  const double p = pair.p;
  double lo = interval.lo;
  double hi = interval.hi;
  double tails = 0.0;
  if (!std::isfinite(lo)) {
    lo = pair.pooled_quantile(1e-7);
    const bool f_smaller = p * pair.f.pdf(lo) < (1.0 - p) * pair.g.pdf(lo);
    tails += f_smaller ? p * tail_mass_below(pair.f, lo) : (1.0 - p) * tail_mass_below(pair.g, lo);
  }
  if (!std::isfinite(hi)) {
    hi = pair.pooled_quantile(1.0 - 1e-7);
    const bool f_smaller = p * pair.f.pdf(hi) < (1.0 - p) * pair.g.pdf(hi);
    tails += f_smaller ? p * tail_mass_above(pair.f, hi) : (1.0 - p) * tail_mass_above(pair.g, hi);
  }
  if (hi <= lo)
    return tails;

  // Pieces follow the pooled distribution so heavy tails do not swamp the
  // body; crossings inside each piece are then located by bisection.
  std::vector<double> cuts{ lo, hi };
  for (double q : { 1e-6, 1e-5, 1e-4, 1e-3, 1e-2 }) {
    cuts.push_back(pair.pooled_quantile(q));
    cuts.push_back(pair.pooled_quantile(1.0 - q));
  }
  for (int k = 1; k < 20; ++k)
    cuts.push_back(pair.pooled_quantile(0.05 * k));
  std::erase_if(cuts, [&](double c) { return !(c >= lo && c <= hi); });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> pieces{ cuts.front() };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    constexpr int kScan = 256;
    const double a = cuts[k];
    const double b = cuts[k + 1];
    double xa = a;
    double da = pair.delta(a);
    for (int i = 1; i <= kScan; ++i) {
      const double xb = i == kScan ? b : a + (b - a) * i / kScan;
      const double db = pair.delta(xb);
      if (db == 0.0 && i < kScan) {
        pieces.push_back(xb);
      } else if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
        double u = xa;
        double v = xb;
        while (v - u > 1e-14 * (1.0 + std::abs(u))) {
          const double m = 0.5 * (u + v);
          const double dm = pair.delta(m);
          if ((dm < 0.0) == (da < 0.0) && dm != 0.0)
            u = m;
          else
            v = m;
        }
        pieces.push_back(0.5 * (u + v));
      }
      xa = xb;
      da = db;
    }
    pieces.push_back(b);
  }

  const auto smaller = [&](double x) {
    return std::min(p * pair.f.pdf(x), (1.0 - p) * pair.g.pdf(x));
  };
  double body = 0.0;
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k)
    body += integrate(smaller, pieces[k], pieces[k + 1], 1e-11);
  return body + tails;
}

namespace {

constexpr double kBoundaryTol = 1e-10;

template<class LabelFn>
double
bisect_label_change(const LabelFn& label, double a, double b, Population at_a)
{
  while (b - a > kBoundaryTol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b)
      break;
    (label(mid) == at_a ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

void
push_segment(std::vector<LabeledSegment>& out, double lo, double hi, Population label)
{
  if (!out.empty() && out.back().label == label && out.back().hi == lo) {
    out.back().hi = hi;
    return;
  }
  out.push_back({ lo, hi, label });
}

// Labels `points` (ascending) and appends the segments covering
// [points.front(), points.back()].
template<class LabelFn>
void
scan_points(const LabelFn& label, const std::vector<double>& points, std::vector<LabeledSegment>& out)
{
  Population prev = label(points.front());
  double start = points.front();
  for (std::size_t k = 1; k < points.size(); ++k) {
    const Population cur = label(points[k]);
    if (cur != prev) {
      const double cut = bisect_label_change(label, points[k - 1], points[k], prev);
      push_segment(out, start, cut, prev);
      start = cut;
      prev = cur;
    }
  }
  push_segment(out, start, points.back(), prev);
}

std::vector<double>
uniform_points(double lo, double hi, std::size_t cells)
{
  std::vector<double> xs(cells + 1);
  const double step = (hi - lo) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i)
    xs[i] = (i == cells) ? hi : lo + step * static_cast<double>(i);
  return xs;
}

struct Component
{
  double lo;
  double hi;
};

std::vector<Component>
covered_components(const TrainedClassifier& c)
{
  std::vector<Component> spans;
  spans.reserve(c.fhat().size() + c.ghat().size());
  for (double x : c.fhat().data())
    spans.push_back({ x - c.fhat().radius(), x + c.fhat().radius() });
  for (double y : c.ghat().data())
    spans.push_back({ y - c.ghat().radius(), y + c.ghat().radius() });
  std::sort(spans.begin(), spans.end(), [](auto a, auto b) { return a.lo < b.lo; });
  std::vector<Component> merged;
  for (const auto& s : spans) {
    if (!merged.empty() && s.lo <= merged.back().hi)
      merged.back().hi = std::max(merged.back().hi, s.hi);
    else
      merged.push_back(s);
  }
  return merged;
}

} // namespace

std::vector<LabeledSegment>
decision_segments(const TrainedClassifier& c, const RiskRule& rule)
{
  std::vector<LabeledSegment> out;
  if (const auto* body = std::get_if<A1Body>(&rule)) {
    const Interval I = body->interval;
    if (!I.finite() || !(I.hi > I.lo))
      throw ParameterError("A1 body rule needs a finite nondegenerate interval");
    const auto label = [&](double x) {
      const auto l = c.classify_a1(x);
      return l ? l->value : Population::F;
    };
    scan_points(label, uniform_points(I.lo, I.hi, 2048), out);
    return out;
  }

  const auto label = [&](double x) { return c.classify(x).value; };
  const auto comps = covered_components(c);
  const double span = comps.back().hi - comps.front().lo;
  const double step =
    std::min(span / 2048.0, 0.25 * std::min(c.fhat().radius(), c.ghat().radius()));

  push_segment(out, -kInf, comps.front().lo, label(comps.front().lo - 1.0));
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& comp = comps[k];
    if (k > 0) {
      const double gap_mid = 0.5 * (comps[k - 1].hi + comp.lo);
      push_segment(out, comps[k - 1].hi, comp.lo, label(gap_mid));
    }
    const auto cells =
      std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((comp.hi - comp.lo) / step)));
    scan_points(label, uniform_points(comp.lo, comp.hi, cells), out);
  }
  push_segment(out, comps.back().hi, kInf, label(comps.back().hi + 1.0));
  return out;
}

double
conditional_risk(const DensityPair& pair, const TrainedClassifier& c, const RiskRule& rule)
{
  double risk = 0.0;
  for (const auto& seg : decision_segments(c, rule)) {
    if (seg.label == Population::G)
      risk += pair.p * pair.f.mass(seg.lo, seg.hi);
    else
      risk += (1.0 - pair.p) * pair.g.mass(seg.lo, seg.hi);
  }
  return risk;
}

RiskReport
empirical_risk(const DensityPair& pair,
               std::size_t m,
               std::size_t n,
               double h1,
               double h2,
               std::size_t reps,
               std::uint64_t seed,
               const RiskRule& rule,
               const Kernel& kernel,
               unsigned threads)
{
  if (reps == 0)
    throw ParameterError("empirical risk needs at least one replicate");
  std::vector<double> risks(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng rng = make_rng(derive_seed(seed, r));
    auto xs = pair.f.sample(m, rng);
    auto ys = pair.g.sample(n, rng);
    const TrainedClassifier c(std::move(xs), std::move(ys), h1, h2, pair.p, kernel);
    risks[r] = conditional_risk(pair, c, rule);
  });

  const Interval domain =
    std::holds_alternative<A1Body>(rule) ? std::get<A1Body>(rule).interval : Interval::whole_line();
  const double err_a0 = bayes_risk(pair, domain);
  const double mean = std::accumulate(risks.begin(), risks.end(), 0.0) / static_cast<double>(reps);
  double ss = 0.0;
  for (double v : risks)
    ss += (v - mean) * (v - mean);
  const double se =
    reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps)) : 0.0;
  return { err_a0, mean, mean - err_a0, se, reps };
}

double
expansion_excess(const DensityPair& pair,
                 const CrossingSet& cs,
                 std::size_t m,
                 std::size_t n,
                 double h1,
                 double h2,
                 const Kernel& kernel)
{
  const double p = pair.p;
  double total = 0.0;
  for (const auto& pt : cs.points) {
    const auto fm = kde_mean_var(pair.f, h1, m, pt.y, kernel);
    const auto gm = kde_mean_var(pair.g, h2, n, pt.y, kernel);
    const double mean = p * fm.mean - (1.0 - p) * gm.mean;
    const double var = p * p * fm.variance + (1.0 - p) * (1.0 - p) * gm.variance;
    total += 0.5 / std::abs(pt.delta_prime) * (mean * mean + var);
  }
  return total;
}

ClassOneCoefficients
expansion_b1_b2(const DensityPair& pair,
                const CrossingSet& cs,
                double H1,
                double H2,
                double r,
                const Kernel& kernel)
{
  if (!(H1 > 0.0 && H2 > 0.0 && r > 0.0))
    throw ParameterError("H1, H2 and r must be positive");
  const double p = pair.p;
  const double kappa = kernel.roughness(0);
  const double kappa2 = kernel.moment(2);
  double b1 = 0.0;
  double b2 = 0.0;
  for (const auto& pt : cs.points) {
    const double w = 1.0 / std::abs(pt.delta_prime);
    b1 += w * (p * p * pair.f.pdf(pt.y) / (r * H1) + (1.0 - p) * (1.0 - p) * pair.g.pdf(pt.y) / H2);
    const double bias = H1 * H1 * p * pt.f2 - H2 * H2 * (1.0 - p) * pt.g2;
    b2 += w * bias * bias;
  }
  return { 0.5 * kappa * b1, 0.125 * kappa2 * kappa2 * b2 };
}

double
predicted_excess_class1(const DensityPair& pair,
                        const CrossingSet& cs,
                        std::size_t m,
                        std::size_t n,
                        double h1,
                        double h2,
                        const Kernel& kernel)
{
  const double nn = static_cast<double>(n);
  const double h = std::pow(nn, -0.2);
  const auto [b1, b2] =
    expansion_b1_b2(pair, cs, h1 / h, h2 / h, static_cast<double>(m) / nn, kernel);
  return b1 / (nn * h) + b2 * std::pow(h, 4);
}

ClassTwoCoefficients
expansion_b3_b4(const DensityPair& pair, const CrossingSet& cs, double r, const Kernel& kernel)
{
  if (cs.points.empty() || regime_detect(cs) != Regime::Class2)
    throw RegimeError("B3/B4 coefficients need a Class2 crossing set");
  if (!(r > 0.0))
    throw ParameterError("r must be positive");
  const double p = pair.p;
  const double kappa = kernel.roughness(0);
  const double kappa4 = kernel.moment(4);
  const auto& y1 = cs.points.front();
  const double R = p * y1.f2 / ((1.0 - p) * y1.g2);
  double c1 = 0.0;
  double c2 = 0.0;
  for (const auto& pt : cs.points) {
    const double w = 1.0 / std::abs(pt.delta_prime);
    c1 += 0.5 * kappa * w *
          (p * p * pair.f.pdf(pt.y) / r + (1.0 - p) * (1.0 - p) * pair.g.pdf(pt.y) / std::sqrt(R));
    double T = p * pt.f4 - R * R * (1.0 - p) * pt.g4;
    const double scale = std::abs(p * pt.f4) + R * R * (1.0 - p) * std::abs(pt.g4);
    if (std::abs(T) <= 1e-9 * scale)
      T = 0.0;
    c2 += kappa4 * kappa4 / 1152.0 * w * T * T;
  }
  return { c1, c2, R, c2 == 0.0 };
}

double
class1_objective(const DensityPair& pair,
                 const CrossingSet& cs,
                 double H1,
                 double H2,
                 double r,
                 const Kernel& kernel)
{
  // Twice B1 + B2.
  const auto [b1, b2] = expansion_b1_b2(pair, cs, H1, H2, r, kernel);
  return 2.0 * (b1 + b2);
}

BandwidthPlan
optimal_bandwidths(const DensityPair& pair,
                   const CrossingSet& cs,
                   std::size_t n,
                   double r,
                   const Kernel& kernel)
{
  if (cs.points.empty())
    throw ParameterError("optimal bandwidths need at least one crossing");
  if (n == 0)
    throw ParameterError("sample size must be positive");
  const double nn = static_cast<double>(n);
  const Regime regime = regime_detect(cs);

  if (regime == Regime::Class2) {
    const auto coef = expansion_b3_b4(pair, cs, r, kernel);
    BandwidthPlan plan{};
    plan.regime = regime;
    plan.r = r;
    plan.n = n;
    if (coef.degenerate) {
      // The h^8 bias term vanishes; its h^12 replacement has no closed-form
      // constant here, so the unit constant is reported with rate 1/13.
      plan.degenerate = true;
      plan.rho = 1.0 / 13.0;
      plan.H1 = 1.0;
      plan.objective = coef.c1 / plan.H1;
    } else {
      plan.degenerate = false;
      plan.rho = 1.0 / 9.0;
      plan.H1 = std::pow(coef.c1 / (8.0 * coef.c2), 1.0 / 9.0);
      plan.objective = coef.c1 / plan.H1 + coef.c2 * std::pow(plan.H1, 8);
    }
    plan.H2 = std::sqrt(coef.R) * plan.H1;
    plan.h1 = plan.H1 * std::pow(nn, -plan.rho);
    plan.h2 = plan.H2 * std::pow(nn, -plan.rho);
    return plan;
  }

  const auto objective = [&](std::span<const double> logH) {
    return class1_objective(pair, cs, std::exp(logH[0]), std::exp(logH[1]), r, kernel);
  };
  const double lo = std::log(0.1);
  const double hi = std::log(10.0);
  std::vector<NelderMeadResult> runs;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const std::vector<double> start{ lo + (hi - lo) * a / 3.0, lo + (hi - lo) * b / 3.0 };
      runs.push_back(nelder_mead(objective, start));
    }
  }
  const auto best = std::min_element(
    runs.begin(), runs.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
  double worst = best->value;
  for (const auto& run : runs)
    worst = std::max(worst, run.value);
  if (worst - best->value > 1e-8 * std::max(1.0, std::abs(best->value))) {
    throw OptimizationError("Class1 bandwidth objective disagrees across restarts (spread " +
                            std::to_string(worst - best->value) + ")");
  }
  BandwidthPlan plan{};
  plan.regime = regime;
  plan.rho = 0.2;
  plan.H1 = std::exp(best->x[0]);
  plan.H2 = std::exp(best->x[1]);
  plan.h1 = plan.H1 * std::pow(nn, -plan.rho);
  plan.h2 = plan.H2 * std::pow(nn, -plan.rho);
  plan.r = r;
  plan.n = n;
  plan.degenerate = false;
  plan.objective = best->value;
  return plan;
}

BandwidthPlan
rescale_plan(const BandwidthPlan& plan, std::size_t n)
{
  BandwidthPlan out = plan;
  out.n = n;
  const double scale = std::pow(static_cast<double>(n), -plan.rho);
  out.h1 = plan.H1 * scale;
  out.h2 = plan.H2 * scale;
  return out;
}

namespace {

void
validate_table(const MultiPopulationModel& model, const std::vector<PairCrossing>& table)
{
  const std::size_t N = model.densities.size();
  if (N < 2 || model.priors.size() != N)
    throw ParameterError("multi-population model needs N >= 2 densities with priors");
  for (const auto& e : table) {
    if (e.i >= N || e.j >= N || e.i == e.j)
      throw ParameterError("crossing table refers to an invalid population pair");
  }
  std::vector<PairCrossing> sorted = table;
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a.y < b.y; });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (std::abs(sorted[k].y - sorted[k - 1].y) <= 1e-9 * (1.0 + std::abs(sorted[k].y))) {
      throw UnsupportedConfigurationError("crossing points are not distinct at y = " +
                                          std::to_string(sorted[k].y));
    }
  }
}

} // namespace

MultiRiskTerms
multi_T(const MultiPopulationModel& model,
        const std::vector<PairCrossing>& table,
        const std::vector<double>& H,
        const std::vector<double>& r,
        const Kernel& kernel)
{
  validate_table(model, table);
  const std::size_t N = model.densities.size();
  if (H.size() != N || r.size() != N)
    throw ParameterError("H and r must have one entry per population");
  const double kappa = kernel.roughness(0);
  const double kappa2 = kernel.moment(2);
  const auto& f = model.densities;
  const auto& p = model.priors;
  double var = 0.0;
  double bias = 0.0;
  for (const auto& e : table) {
    const double y = e.y;
    const double slope = p[e.i] * f[e.i].derivative(1, y) - p[e.j] * f[e.j].derivative(1, y);
    const double w = 1.0 / std::abs(slope);
    var += w * (p[e.i] * p[e.i] * f[e.i].pdf(y) / (r[e.i] * H[e.i]) +
                p[e.j] * p[e.j] * f[e.j].pdf(y) / (r[e.j] * H[e.j]));
    const double b = H[e.i] * H[e.i] * p[e.i] * f[e.i].derivative(2, y) -
                     H[e.j] * H[e.j] * p[e.j] * f[e.j].derivative(2, y);
    bias += w * b * b;
  }
  // Each unordered crossing appears twice in the i != j double sum.
  return { 2.0 * kappa / 4.0 * var, 2.0 * kappa2 * kappa2 / 16.0 * bias };
}

MultiBandwidthPlan
minimize_multi_T(const MultiPopulationModel& model,
                 const std::vector<PairCrossing>& table,
                 const std::vector<double>& r,
                 const Kernel& kernel)
{
  validate_table(model, table);
  const std::size_t N = model.densities.size();
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < N; ++j) {
    if (std::any_of(table.begin(), table.end(), [&](auto e) { return e.i == j || e.j == j; }))
      active.push_back(j);
  }
  const auto expand = [&](std::span<const double> logH) {
    std::vector<double> H(N, 1.0);
    for (std::size_t k = 0; k < active.size(); ++k)
      H[active[k]] = std::exp(logH[k]);
    return H;
  };
  const auto objective = [&](std::span<const double> logH) {
    return multi_T(model, table, expand(logH), r, kernel).total();
  };
  std::optional<NelderMeadResult> best;
  for (double t : { 0.1, 0.3, 1.0, 3.0, 10.0 }) {
    auto run = nelder_mead(objective, std::vector<double>(active.size(), std::log(t)));
    if (!best || run.value < best->value)
      best = std::move(run);
  }
  return { expand(best->x), best->value };
}

} // namespace bwclass
