#pragma once

#include <stdexcept>
#include <string>

namespace hombeat {

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what), achieved_tolerance(achieved), requested_tolerance(requested) {}

  double achieved_tolerance;
  double requested_tolerance;
};

/// Maximum-likelihood search could not produce an estimate (e.g. every
/// candidate has zero likelihood, or an empty input).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hombeat
