#include <hombeat/quadrature.hpp>

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <hombeat/errors.hpp>

namespace hombeat::quad {

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 unsigned max_depth) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &err);

  // The requested tolerance drives the subdivision; only gross failure is an
  // error. Near-zero integrals (odd integrands and the like) are accepted on
  // an absolute floor.
  const double scale = std::max(std::abs(value), 1e-3);
  const double limit = std::max(1e3 * rel_tol * scale, 1e-12);
  if (!std::isfinite(value) || err > limit) {
    const double achieved = std::abs(value) > 0 ? err / std::abs(value) : err;
    throw QuadratureError("quadrature did not converge", achieved, rel_tol);
  }
  return {value, err};
}

}  // namespace hombeat::quad
