#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bwclass {

struct NelderMeadOptions
{
  double initial_step = 0.5;
  //! Stop when the simplex values span at most f_tol * (|f_best| + f_tol).
  double f_tol = 1e-15;
  double x_tol = 1e-12;
  int max_evaluations = 50000;
  //! Fresh simplexes built around the incumbent after convergence.
  int restarts = 2;
};

struct NelderMeadResult
{
  std::vector<double> x;
  double value;
  int evaluations;
  bool converged;
};

//! Derivative-free simplex minimisation (reflection 1, expansion 2,
//! contraction 1/2, shrink 1/2).
NelderMeadResult
nelder_mead(const std::function<double(std::span<const double>)>& objective,
            std::vector<double> start,
            const NelderMeadOptions& options = {});

} // namespace bwclass
