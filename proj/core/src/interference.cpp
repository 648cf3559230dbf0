#include <hombeat/interference.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <hombeat/quadrature.hpp>

namespace hombeat {

namespace {

// |phi(k)|^2 seen as a plain function, for the brute-force route.
double intensity_at(const WavepacketSpec& spec, double k) {
  if (const auto* g = std::get_if<GaussianSpec>(&spec)) {
    const double s2 = g->sigma_k * g->sigma_k;
    return std::exp(-k * k / (2.0 * s2)) / std::sqrt(2.0 * std::numbers::pi * s2);
  }
  const auto& t = std::get<TabulatedSpec>(spec);
  if (k <= t.grid.front() || k >= t.grid.back()) return 0.0;
  const auto it = std::upper_bound(t.grid.begin(), t.grid.end(), k);
  const auto j = static_cast<std::size_t>(std::distance(t.grid.begin(), it));
  const double u = (k - t.grid[j - 1]) / (t.grid[j] - t.grid[j - 1]);
  return t.amplitude_sq[j - 1] + u * (t.amplitude_sq[j] - t.amplitude_sq[j - 1]);
}

void require_aligned(const Scene& scene, const char* who) {
  if (!scene.aligned())
    throw std::invalid_argument(std::string(who) + ": requires an aligned scene (x0 == centroid)");
}

}  // namespace

Tag tag_from_char(char c) {
  if (c == 'B' || c == 'b') return Tag::Bunch;
  if (c == 'A' || c == 'a') return Tag::Antibunch;
  throw std::invalid_argument("tag must be 'A' or 'B'");
}

Scene::Scene(WavepacketSpec spec, double delta_x, double centroid, double x0)
    : spec_(std::move(spec)), delta_x_(delta_x), centroid_(centroid), x0_(x0) {
  if (!std::isfinite(delta_x) || !std::isfinite(centroid) || !std::isfinite(x0))
    throw std::invalid_argument("scene: positions must be finite");
  envelope_ = std::make_shared<Envelope>(build_envelope(spec_));
  sigma_k_ = sigma_k_of(spec_);
}

Scene Scene::with_delta_x(double delta_x) const {
  if (!std::isfinite(delta_x)) throw std::invalid_argument("scene: positions must be finite");
  Scene s = *this;
  s.delta_x_ = delta_x;
  return s;
}

DetectorGeometry::DetectorGeometry(double k0_, double d_) : k0(k0_), d(d_) {
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw std::invalid_argument("geometry: k0 must be > 0");
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("geometry: d must be > 0");
}

double momentum_from_pixel(const DetectorGeometry& geometry, double y) {
  return y * geometry.k0 / geometry.d;
}

double joint_density(const Scene& scene, const Outcome& outcome) {
  const double dk = outcome.delta_k;
  const double beat = std::cos(dk * scene.delta_x() / 2.0) * std::cos(dk * scene.misalignment());
  return 0.5 * scene.envelope()(dk) * (1.0 + tag_sign(outcome.tag) * beat);
}

double aligned_density(const Scene& scene, const Outcome& outcome) {
  require_aligned(scene, "aligned_density");
  const double dk = outcome.delta_k;
  const double beat = std::cos(dk * scene.delta_x() / 2.0);
  return 0.5 * scene.envelope()(dk) * (1.0 + tag_sign(outcome.tag) * beat);
}

double bunch_probability(const Envelope& envelope, double delta_x, double rel_tol) {
  double overlap;  // integral of C(dk) cos(dk dx / 2)
  if (envelope.is_gaussian()) {
    const double s = envelope.gaussian_sigma_k();
    overlap = std::exp(-s * s * delta_x * delta_x / 4.0);
  } else {
    overlap =
        envelope.integrate_weighted([&](double dk) { return std::cos(dk * delta_x / 2.0); }, rel_tol)
            .value;
  }
  return std::clamp(0.5 * (1.0 + overlap), 0.0, 1.0);
}

double bucket_probability(const Scene& scene, Tag tag) {
  require_aligned(scene, "bucket_probability");
  const double p_bunch = bunch_probability(scene.envelope(), scene.delta_x());
  return tag == Tag::Bunch ? p_bunch : 1.0 - p_bunch;
}

double oracle_density(const Scene& scene, const Outcome& outcome, const OracleOptions& opts) {
  const double dk = outcome.delta_k;
  const double x1 = scene.centroid() + scene.delta_x() / 2.0;
  const double x2 = scene.centroid() - scene.delta_x() / 2.0;
  const double dx1 = scene.x0() - x1;
  const double dx2 = scene.x0() - x2;
  const double alpha = tag_sign(outcome.tag);

  // P(k, k', X) with k = K + dk/2, k' = K - dk/2, marginalized over K.
  auto per_pair = [&](double K) {
    const double k = K + dk / 2.0;
    const double kp = K - dk / 2.0;
    const double beats = 0.5 * (std::cos((k - kp) * dx1) + std::cos((k - kp) * dx2));
    return 0.5 * intensity_at(scene.wavepacket(), k) * intensity_at(scene.wavepacket(), kp) *
           (1.0 + alpha * beats);
  };

  if (const auto* g = std::get_if<GaussianSpec>(&scene.wavepacket())) {
    const double span = 8.0 * g->sigma_k;
    return quad::integrate(per_pair, -span, span, opts.rel_tol, opts.max_depth).value;
  }

  // Tabulated: the product of the two shifted interpolants is piecewise
  // quadratic between knots of either factor; 2-point Gauss is exact there.
  const auto& t = std::get<TabulatedSpec>(scene.wavepacket());
  const double lo = t.grid.front() + std::abs(dk) / 2.0;
  const double hi = t.grid.back() - std::abs(dk) / 2.0;
  if (!(lo < hi)) return 0.0;
  std::vector<double> knots;
  knots.reserve(2 * t.grid.size() + 2);
  knots.push_back(lo);
  for (double k : t.grid) {
    const double a = k - dk / 2.0, b = k + dk / 2.0;
    if (a > lo && a < hi) knots.push_back(a);
    if (b > lo && b < hi) knots.push_back(b);
  }
  knots.push_back(hi);
  std::sort(knots.begin(), knots.end());

  static constexpr double gl2 = 0.5773502691896257;
  double total = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double mid = 0.5 * (knots[i] + knots[i - 1]);
    const double half = 0.5 * (knots[i] - knots[i - 1]);
    if (half <= 0.0) continue;
    total += half * (per_pair(mid - half * gl2) + per_pair(mid + half * gl2));
  }
  return total;
}

}  // namespace hombeat
