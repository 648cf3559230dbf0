#include <hombeat/fisher.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hombeat {

namespace {

// Integrand ratios (integrand / C). The common denominator
// 1 - cos^2(a) cos^2(b) is expanded as sin^2 a + cos^2 a sin^2 b, a sum of
// nonnegative terms, so it loses no precision near its roots. Joint roots
// (a and b both multiples of pi) are removable along delta_k; there the
// ratios take their directional limits with weights (dx/2)^2 and m^2.
struct Ratios {
  double r11, r12, r22;
};

Ratios integrand_ratios(double delta_x, double m, double dk) {
  const double a = dk * delta_x / 2.0;
  const double b = dk * m;
  const double sa = std::sin(a), ca = std::cos(a);
  const double sb = std::sin(b), cb = std::cos(b);
  const double denom = sa * sa + ca * ca * sb * sb;
  const double dk2 = dk * dk;

  if (denom < 1e-18) {
    const double wu = delta_x * delta_x / 4.0;
    const double wv = m * m;
    const double w = wu + wv;
    if (w == 0.0) {
      // delta_x = m = 0: the aligned-estimation limit (delta_x -> 0 at m = 0)
      return {dk2 / 4.0, 0.0, 0.0};
    }
    return {dk2 / 4.0 * wu / w, -dk2 / 2.0 * (delta_x / 2.0) * m / w, dk2 * wv / w};
  }

  const double r11 = dk2 / 4.0 * sa * sa * cb * cb / denom;
  const double r12 = -dk2 / 2.0 * sa * ca * sb * cb / denom;
  const double r22 = dk2 * ca * ca * sb * sb / denom;
  return {r11, r12, r22};
}

}  // namespace

FisherIntegrand fisher_integrand(const Scene& scene, double delta_k) {
  const Ratios r = integrand_ratios(scene.delta_x(), scene.misalignment(), delta_k);
  const double c = scene.envelope()(delta_k);
  return {c * r.r11, c * r.r12, c * r.r22};
}

FisherMatrix fisher_matrix(const Scene& scene, double rel_tol) {
  FisherMatrix out;
  if (scene.aligned()) {
    // The sin^2 / (1 - cos^2) factor of f11 cancels identically at m = 0,
    // leaving C dk^2 / 4, whose integral is sigma_k^2 / 2 for any wavepacket.
    const double s = scene.sigma_k();
    out.f11 = s * s / 2.0;
    return out;
  }
  const double dx = scene.delta_x();
  const double m = scene.misalignment();
  const Envelope& env = scene.envelope();

  auto entry = [&](auto pick) {
    return env.integrate_weighted(
        [&](double dk) { return pick(integrand_ratios(dx, m, dk)); }, rel_tol);
  };
  const auto e11 = entry([](const Ratios& r) { return r.r11; });
  const auto e12 = entry([](const Ratios& r) { return r.r12; });
  const auto e22 = entry([](const Ratios& r) { return r.r22; });
  out.f11 = e11.value;
  out.f12 = e12.value;
  out.f22 = e22.value;
  out.err11 = e11.error;
  out.err12 = e12.error;
  out.err22 = e22.error;
  return out;
}

double fisher_aligned(const WavepacketSpec& spec) {
  const double s = sigma_k_of(spec);
  return s * s / 2.0;
}

double fisher_bucket(const Scene& scene, double rel_tol) {
  if (!scene.aligned())
    throw std::invalid_argument("fisher_bucket: requires an aligned scene (x0 == centroid)");
  const double dx = std::abs(scene.delta_x());
  const double s = scene.sigma_k();
  if (dx == 0.0) return s * s / 2.0;

  const Envelope& env = scene.envelope();
  // 1 - (int C cos)^2 evaluated as T (2 - T) with T = int C (1 - cos) >= 0,
  // so the separation -> 0 regime keeps full relative precision.
  const double amp =
      env.integrate_weighted([&](double dk) { return dk * std::sin(dk * dx / 2.0); }, rel_tol)
          .value;
  const double t = env.integrate_weighted(
                          [&](double dk) {
                            const double h = std::sin(dk * dx / 4.0);
                            return 2.0 * h * h;
                          },
                          rel_tol)
                       .value;
  if (t <= 1e-30) return s * s / 2.0;  // below quadrature resolution of the limit
  return 0.25 * amp * amp / (t * (2.0 - t));
}

double crb(double information, std::size_t n) {
  if (n < 1) throw std::invalid_argument("crb: n must be >= 1");
  if (information < 0.0 || !std::isfinite(information))
    throw std::invalid_argument("crb: information must be finite and >= 0");
  if (information == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (static_cast<double>(n) * information);
}

}  // namespace hombeat
