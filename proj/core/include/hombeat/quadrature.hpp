#pragma once

#include <functional>

namespace hombeat::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  ///< absolute error estimate
};

/// Adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Throws QuadratureError when the error estimate stays above
/// max(fail_factor * rel_tol * |value|, abs_floor).
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9, unsigned max_depth = 15);

}  // namespace hombeat::quad
