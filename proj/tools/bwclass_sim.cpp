#include "bwclass/densities.hpp"
#include "bwclass/error.hpp"
#include "bwclass/study.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace bwclass;

namespace {

std::vector<std::size_t>
parse_n_list(const std::string& text)
{
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(static_cast<std::size_t>(std::stoull(item)));
  return out;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Bandwidth selection experiments for kernel classifiers" };
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring the flags");

  std::string pair = "class1a";
  std::string n_list_text;
  std::size_t reps = 100;
  SelectorConfig sel;
  std::string scale = "robust";
  std::uint64_t seed = 20240601;
  std::string out_dir = "results";
  unsigned threads = 0;
  std::size_t n_single = 100;
  double alpha = 2.0;
  double beta = 2.5;
  double x0 = NAN;
  std::size_t light_n = 500;

  app.add_option("--pair", pair, "class1a, class1b, class2a or class2b")->capture_default_str();
  app.add_option("--n-list", n_list_text, "comma-separated sample sizes");
  app.add_option("--reps", reps, "replicates per sample size")->capture_default_str();
  app.add_option("--boot-iters", sel.boot_iters, "bootstrap iterations")->capture_default_str();
  app.add_option("--grid", sel.grid_per_dim, "grid points per bandwidth")->capture_default_str();
  app.add_option("--c1", sel.c1, "upper window exponent")->capture_default_str();
  app.add_option("--c2", sel.c2, "lower window exponent")->capture_default_str();
  app.add_option("--window-scale", sel.window_scale, "window multiplier")->capture_default_str();
  app.add_option("--quad-points", sel.quad_points, "abscissae for the error integral")
    ->capture_default_str();
  app.add_option("--scale-rule", scale, "pilot scale: sd, iqr or robust")->capture_default_str();
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();

  auto* study = app.add_subcommand("study", "replicated bandwidth selection and slope fit");
  auto* tail = app.add_subcommand("tail", "tail misclassification for a Pareto pair");
  tail->add_option("--alpha", alpha, "tail exponent of f")->capture_default_str();
  tail->add_option("--beta", beta, "tail exponent of g")->capture_default_str();
  tail->add_option("--x0", x0, "tail start (default: F 0.99 quantile)");
  tail->add_option("--light-n", light_n, "sample size of the light-tailed contrast (0 skips)")
    ->capture_default_str();
  auto* cvcheck = app.add_subcommand("cvcheck", "spread of bootstrap vs cross-validation choices");
  cvcheck->add_option("--n", n_single)->capture_default_str();
  auto* surface = app.add_subcommand("risk-surface", "error surfaces for one training sample");
  surface->add_option("--n", n_single)->capture_default_str();
  for (auto* sub : { study, tail, cvcheck, surface })
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    sel.scale_rule = parse_scale_rule(scale);
    sel.validate();
    const PairId id = parse_pair_id(pair);

    if (*study) {
      ExperimentConfig cfg;
      cfg.pair = id;
      if (!n_list_text.empty())
        cfg.n_list = parse_n_list(n_list_text);
      cfg.reps = reps;
      cfg.selector = sel;
      cfg.seed = seed;
      cfg.threads = threads;
      const auto result = run_study(cfg);
      write_study(result, out_dir);
      std::printf("%s slope h1 %.4f  h2 %.4f\n", result.pair.c_str(), result.fit_h1.slope,
                  result.fit_h2.slope);
    } else if (*tail) {
      const auto n_list = n_list_text.empty() ? std::vector<std::size_t>{ 100, 400, 1600 }
                                              : parse_n_list(n_list_text);
      const std::optional<double> start =
        std::isnan(x0) ? std::nullopt : std::optional<double>(x0);
      const auto rows = run_tail_study(alpha, beta, n_list, reps, seed, start, threads);
      std::optional<LightTailReport> light;
      if (light_n > 0)
        light = run_light_tail_contrast(light_n, reps, seed, 3.0, threads);
      write_tail_study(rows, light, out_dir);
      for (const auto& r : rows)
        std::printf("n %zu  tail mass %.6g  scaled %.6g\n", r.n, r.tail_mass, r.scaled);
      if (light)
        std::printf("light tail n %zu  fraction correct %.4f\n", light->n,
                    light->fraction_correct);
    } else if (*cvcheck) {
      const auto r = run_cv_comparison(id, n_single, reps, seed, sel, threads);
      write_cv_comparison(r, out_dir);
      std::printf("%s n %zu  iqr boot %.4f  iqr cv %.4f  ratio %.3f\n", r.pair.c_str(), r.n,
                  r.iqr_log_boot_h1, r.iqr_log_cv_h1, r.ratio);
    } else if (*surface) {
      const auto cells = run_risk_surface(id, n_single, seed, sel, threads);
      write_risk_surface(cells, pair, n_single, out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
