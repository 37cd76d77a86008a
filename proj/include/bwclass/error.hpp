#pragma once

#include <stdexcept>
#include <string>

namespace bwclass {

//! Invalid argument values (bad Pareto ordering, dimension mismatch, ...).
class ParameterError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Quadrature or root finding failed to meet its tolerance.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! A crossing-search grid cell holds more than one root.
class ResolutionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Delta'(y) vanishes (or nearly) at a crossing point.
class DegenerateCrossingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! f'' and g'' both vanish at a crossing, so the regime is undefined.
class UnsupportedCurvatureError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! A Class2-only quantity was requested for a Class1 crossing set.
class RegimeError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! No training support endpoint exists on the side the tail rule needs.
class EmptyTailError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Multi-start minimisation did not agree across restarts.
class OptimizationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Sample has zero spread, so no scale estimate exists.
class DegenerateSampleError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Crossing table violates the distinctness requirement.
class UnsupportedConfigurationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Least squares with all abscissae equal.
class DegenerateRegressionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace bwclass
