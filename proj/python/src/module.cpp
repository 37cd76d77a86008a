#include "bwclass/classifier.hpp"
#include "bwclass/densities.hpp"
#include "bwclass/error.hpp"
#include "bwclass/kernels.hpp"
#include "bwclass/risk.hpp"
#include "bwclass/selector.hpp"
#include "bwclass/study.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace bwclass;

namespace {

Kernel
kernel_by_name(const std::string& name)
{
  if (name == "triweight")
    return Kernel::triweight();
  if (name == "biweight")
    return Kernel::biweight();
  if (name == "epanechnikov")
    return Kernel::epanechnikov();
  throw ParameterError("unknown kernel: " + name);
}

const char*
population_name(Population p)
{
  return p == Population::F ? "F" : "G";
}

Interval
to_interval(const std::optional<std::pair<double, double>>& iv)
{
  return iv ? Interval{ iv->first, iv->second } : Interval::whole_line();
}

} // namespace

PYBIND11_MODULE(_bwclass, m)
{
  m.doc() = "Bandwidth selection for kernel discriminant analysis";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<RegimeError>(m, "RegimeError", PyExc_RuntimeError);
  py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", PyExc_RuntimeError);
  py::register_exception<OptimizationError>(m, "OptimizationError", PyExc_RuntimeError);

  py::class_<Kernel>(m, "Kernel")
    .def(py::init(&kernel_by_name), py::arg("name") = "triweight")
    .def("__call__", &Kernel::eval)
    .def("moment", &Kernel::moment)
    .def("roughness", &Kernel::roughness, py::arg("r") = 0)
    .def_property_readonly("name", [](const Kernel& k) { return std::string(k.name()); });

  py::class_<Density>(m, "Density")
    .def_static("normal", &Density::normal, py::arg("mean") = 0.0, py::arg("sd") = 1.0)
    .def_static("cauchy", &Density::cauchy, py::arg("location") = 0.0, py::arg("scale") = 1.0)
    .def_static("pareto", &Density::pareto, py::arg("alpha"))
    .def_static(
      "normal_mixture",
      [](const std::vector<std::tuple<double, double, double>>& comps) {
        std::vector<MixtureComponent> out;
        for (const auto& [w, mu, sd] : comps)
          out.push_back({ w, mu, sd });
        return Density::normal_mixture(std::move(out));
      },
      py::arg("components"))
    .def("pdf", &Density::pdf)
    .def("derivative", &Density::derivative, py::arg("order"), py::arg("x"))
    .def("cdf", &Density::cdf)
    .def("quantile", &Density::quantile)
    .def("sample",
         [](const Density& d, std::size_t count, std::uint64_t seed) {
           Rng rng = make_rng(seed);
           return d.sample(count, rng);
         },
         py::arg("count"),
         py::arg("seed"))
    .def("__repr__", &Density::describe);

  py::class_<DensityPair>(m, "DensityPair")
    .def(py::init([](Density f, Density g, double p, std::string label) {
           return make_custom_pair(std::move(f), std::move(g), p, std::move(label));
         }),
         py::arg("f"),
         py::arg("g"),
         py::arg("p") = 0.5,
         py::arg("label") = "custom")
    .def_readonly("f", &DensityPair::f)
    .def_readonly("g", &DensityPair::g)
    .def_readonly("p", &DensityPair::p)
    .def_readonly("label", &DensityPair::label)
    .def("delta", &DensityPair::delta);

  m.def("reference_pair",
        [](const std::string& name) { return make_pair(parse_pair_id(name)); },
        py::arg("name"));
  m.def("pareto_pair", &make_pareto_pair, py::arg("alpha"), py::arg("beta"), py::arg("p") = 0.5);

  py::class_<CrossingPoint>(m, "CrossingPoint")
    .def_readonly("y", &CrossingPoint::y)
    .def_readonly("delta_prime", &CrossingPoint::delta_prime)
    .def_readonly("f2", &CrossingPoint::f2)
    .def_readonly("g2", &CrossingPoint::g2);

  py::class_<CrossingSet>(m, "CrossingSet")
    .def_readonly("points", &CrossingSet::points)
    .def_property_readonly("regime",
                           [](const CrossingSet& cs) { return std::string(regime_name(cs.regime)); })
    .def_readonly("R", &CrossingSet::R)
    .def_readonly("T", &CrossingSet::T);

  m.def(
    "crossings",
    [](const DensityPair& pair, const std::optional<std::pair<double, double>>& interval) {
      return interval ? crossings(pair, to_interval(interval)) : crossings(pair);
    },
    py::arg("pair"),
    py::arg("interval") = py::none());

  m.def(
    "bayes_risk",
    [](const DensityPair& pair, const std::optional<std::pair<double, double>>& interval) {
      return bayes_risk(pair, to_interval(interval));
    },
    py::arg("pair"),
    py::arg("interval") = py::none());

  py::class_<BandwidthPlan>(m, "BandwidthPlan")
    .def_property_readonly("regime",
                           [](const BandwidthPlan& b) { return std::string(regime_name(b.regime)); })
    .def_readonly("rho", &BandwidthPlan::rho)
    .def_readonly("H1", &BandwidthPlan::H1)
    .def_readonly("H2", &BandwidthPlan::H2)
    .def_readonly("h1", &BandwidthPlan::h1)
    .def_readonly("h2", &BandwidthPlan::h2)
    .def_readonly("degenerate", &BandwidthPlan::degenerate);

  m.def(
    "optimal_bandwidths",
    [](const DensityPair& pair, const CrossingSet& cs, std::size_t n, double r, const std::string& kernel) {
      return optimal_bandwidths(pair, cs, n, r, kernel_by_name(kernel));
    },
    py::arg("pair"),
    py::arg("crossings"),
    py::arg("n"),
    py::arg("r") = 1.0,
    py::arg("kernel") = "triweight");

  py::class_<TrainedClassifier>(m, "Classifier")
    .def(py::init([](std::vector<double> x, std::vector<double> y, double h1, double h2, double p,
                     const std::string& kernel) {
           return TrainedClassifier(std::move(x), std::move(y), h1, h2, p, kernel_by_name(kernel));
         }),
         py::arg("x"),
         py::arg("y"),
         py::arg("h1"),
         py::arg("h2"),
         py::arg("p") = 0.5,
         py::arg("kernel") = "triweight")
    .def("fhat", [](const TrainedClassifier& c, double x) { return c.fhat()(x); })
    .def("ghat", [](const TrainedClassifier& c, double x) { return c.ghat()(x); })
    .def("classify",
         [](const TrainedClassifier& c, const std::vector<double>& xs) {
           std::vector<std::string> out;
           out.reserve(xs.size());
           for (double x : xs)
             out.emplace_back(population_name(c.classify(x).value));
           return out;
         })
    .def(
      "risk",
      [](const TrainedClassifier& c, const DensityPair& pair) {
        return conditional_risk(pair, c, AhatWholeLine{});
      },
      py::arg("pair"));

  py::class_<RiskReport>(m, "RiskReport")
    .def_readonly("err_a0", &RiskReport::err_a0)
    .def_readonly("err_emp", &RiskReport::err_emp)
    .def_readonly("excess", &RiskReport::excess)
    .def_readonly("se", &RiskReport::se)
    .def_readonly("n_reps", &RiskReport::n_reps);

  m.def(
    "empirical_risk",
    [](const DensityPair& pair, std::size_t m_, std::size_t n, double h1, double h2, std::size_t reps,
       std::uint64_t seed, const std::optional<std::pair<double, double>>& interval) {
      const RiskRule rule =
        interval ? RiskRule{ A1Body{ to_interval(interval) } } : RiskRule{ AhatWholeLine{} };
      return empirical_risk(pair, m_, n, h1, h2, reps, seed, rule);
    },
    py::arg("pair"),
    py::arg("m"),
    py::arg("n"),
    py::arg("h1"),
    py::arg("h2"),
    py::arg("reps"),
    py::arg("seed"),
    py::arg("interval") = py::none());

  py::class_<SelectorConfig>(m, "SelectorConfig")
    .def(py::init<>())
    .def_readwrite("boot_iters", &SelectorConfig::boot_iters)
    .def_readwrite("grid_per_dim", &SelectorConfig::grid_per_dim)
    .def_readwrite("c1", &SelectorConfig::c1)
    .def_readwrite("c2", &SelectorConfig::c2)
    .def_readwrite("window_scale", &SelectorConfig::window_scale)
    .def_readwrite("pilot_r", &SelectorConfig::pilot_r)
    .def_readwrite("quad_points", &SelectorConfig::quad_points)
    .def_property(
      "scale_rule",
      [](const SelectorConfig& c) { return std::string(scale_rule_name(c.scale_rule)); },
      [](SelectorConfig& c, const std::string& s) { c.scale_rule = parse_scale_rule(s); });

  py::class_<Selection>(m, "Selection")
    .def_readonly("h1", &Selection::h1)
    .def_readonly("h2", &Selection::h2)
    .def_readonly("h3", &Selection::h3)
    .def_readonly("h4", &Selection::h4)
    .def_readonly("err_min", &Selection::err_min)
    .def_readonly("grid1", &Selection::grid1)
    .def_readonly("grid2", &Selection::grid2)
    .def_readonly("surface", &Selection::surface);

  m.def(
    "select_bandwidths",
    [](std::vector<double> x, std::vector<double> y, double p, const SelectorConfig& cfg,
       std::uint64_t seed, unsigned threads) {
      py::gil_scoped_release release;
      return select_bandwidths({ std::move(x), std::move(y), p }, cfg, seed, Kernel::triweight(), threads);
    },
    py::arg("x"),
    py::arg("y"),
    py::arg("p") = 0.5,
    py::arg("config") = SelectorConfig{},
    py::arg("seed") = 20240601,
    py::arg("threads") = 1);

  m.def(
    "cv_err",
    [](std::vector<double> x, std::vector<double> y, double h1, double h2, double p) {
      return cv_err({ std::move(x), std::move(y), p }, h1, h2);
    },
    py::arg("x"),
    py::arg("y"),
    py::arg("h1"),
    py::arg("h2"),
    py::arg("p") = 0.5);

  m.def(
    "cv_select",
    [](std::vector<double> x, std::vector<double> y, double p, const SelectorConfig& cfg) {
      const auto s = cv_select({ std::move(x), std::move(y), p }, cfg);
      return py::make_tuple(s.h1, s.h2, s.err_min);
    },
    py::arg("x"),
    py::arg("y"),
    py::arg("p") = 0.5,
    py::arg("config") = SelectorConfig{});

  m.def(
    "draw_training",
    [](const DensityPair& pair, std::size_t m_, std::size_t n, std::uint64_t seed) {
      auto d = draw_training(pair, m_, n, seed);
      return py::make_tuple(d.X, d.Y);
    },
    py::arg("pair"),
    py::arg("m"),
    py::arg("n"),
    py::arg("seed"));
}
