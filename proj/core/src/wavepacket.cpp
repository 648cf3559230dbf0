#include <hombeat/wavepacket.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace hombeat {

namespace {

constexpr double kMassTail = 1e-10;  // mass left outside [-b, b]
constexpr std::size_t kMinPoints = 16;
constexpr std::size_t kMaxPoints = 8192;
constexpr std::size_t kQuantileKnots = 8192;

double trapezoid_mass(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) m += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return m;
}

// 4-point Lagrange interpolation on a strictly increasing grid, clamped to
// zero since the values are intensities. Falls back to linear at the ends.
double cubic_interp(const std::vector<double>& x, const std::vector<double>& y, double xi) {
  const auto it = std::upper_bound(x.begin(), x.end(), xi);
  std::size_t j = static_cast<std::size_t>(std::distance(x.begin(), it));
  if (j == 0) return y.front();
  if (j >= x.size()) return y.back();
  if (j < 2 || j + 1 >= x.size()) {
    const double t = (xi - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + t * (y[j] - y[j - 1]);
  }
  const std::size_t i0 = j - 2;
  double val = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    double term = y[i0 + a];
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      term *= (xi - x[i0 + b]) / (x[i0 + a] - x[i0 + b]);
    }
    val += term;
  }
  return std::max(val, 0.0);
}

const TabulatedSpec& as_tabulated(const WavepacketSpec& spec) {
  return std::get<TabulatedSpec>(spec);
}

}  // namespace

WavepacketSpec make_gaussian(double sigma_k) {
  if (!(sigma_k > 0.0) || !std::isfinite(sigma_k))
    throw std::invalid_argument("gaussian wavepacket: sigma_k must be finite and > 0");
  return GaussianSpec{sigma_k};
}

WavepacketSpec make_tabulated(std::vector<double> grid, std::vector<double> amplitude_sq) {
  if (grid.size() != amplitude_sq.size())
    throw std::invalid_argument("tabulated wavepacket: grid/value size mismatch");
  if (grid.size() < kMinPoints || grid.size() > kMaxPoints)
    throw std::invalid_argument("tabulated wavepacket: need 16..8192 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(amplitude_sq[i]))
      throw std::invalid_argument("tabulated wavepacket: non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("tabulated wavepacket: grid must be strictly increasing");
    if (amplitude_sq[i] < 0.0)
      throw std::invalid_argument("tabulated wavepacket: negative |phi|^2");
  }
  const double mass = trapezoid_mass(grid, amplitude_sq);
  if (!(mass > 0.0))
    throw std::invalid_argument("tabulated wavepacket: |phi|^2 is not normalizable");
  for (double& v : amplitude_sq) v /= mass;
  return TabulatedSpec{std::move(grid), std::move(amplitude_sq)};
}

WavepacketSpec load_wavepacket_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open wavepacket CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("wavepacket CSV is empty: " + path.string());
  // header row required; not interpreted
  std::vector<double> k, a;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double ki = 0.0, ai = 0.0;
    if (!(row >> ki >> ai))
      throw std::runtime_error("wavepacket CSV: bad row " + std::to_string(lineno) + " in " +
                               path.string());
    k.push_back(ki);
    a.push_back(ai);
  }
  return make_tabulated(std::move(k), std::move(a));
}

void validate(const WavepacketSpec& spec) {
  if (const auto* g = std::get_if<GaussianSpec>(&spec)) {
    if (!(g->sigma_k > 0.0) || !std::isfinite(g->sigma_k))
      throw std::invalid_argument("gaussian wavepacket: sigma_k must be finite and > 0");
    return;
  }
  const auto& t = as_tabulated(spec);
  // Reuse the constructor checks; also verifies the unit-mass invariant.
  make_tabulated(t.grid, t.amplitude_sq);
  const double mass = trapezoid_mass(t.grid, t.amplitude_sq);
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("tabulated wavepacket: not normalized (use make_tabulated)");
}

double sigma_k_of(const WavepacketSpec& spec) {
  if (const auto* g = std::get_if<GaussianSpec>(&spec)) {
    if (!(g->sigma_k > 0.0)) throw std::invalid_argument("sigma_k must be > 0");
    return g->sigma_k;
  }
  const auto& t = as_tabulated(spec);
  // trapezoid moments of the piecewise-linear density
  double mass = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i < t.grid.size(); ++i) {
    const double h = t.grid[i] - t.grid[i - 1];
    mass += 0.5 * h * (t.amplitude_sq[i] + t.amplitude_sq[i - 1]);
    m1 += 0.5 * h * (t.grid[i] * t.amplitude_sq[i] + t.grid[i - 1] * t.amplitude_sq[i - 1]);
    m2 += 0.5 * h *
          (t.grid[i] * t.grid[i] * t.amplitude_sq[i] +
           t.grid[i - 1] * t.grid[i - 1] * t.amplitude_sq[i - 1]);
  }
  if (!(mass > 0.0)) throw std::invalid_argument("tabulated wavepacket: zero mass");
  const double mean = m1 / mass;
  const double var = m2 / mass - mean * mean;
  return std::sqrt(std::max(var, 0.0));
}

double Envelope::operator()(double delta_k) const {
  if (is_gaussian()) {
    const double s2 = gaussian_sigma_k_ * gaussian_sigma_k_;
    return std::exp(-delta_k * delta_k / (4.0 * s2)) / std::sqrt(4.0 * std::numbers::pi * s2);
  }
  const double x = std::abs(delta_k) / grid_step_;  // symmetric: evaluate at |dk|
  const auto j = static_cast<std::size_t>(x);
  if (j + 1 >= values_.size()) return 0.0;
  const double t = x - static_cast<double>(j);
  return values_[j] + t * (values_[j + 1] - values_[j]);
}

double Envelope::quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0)) throw std::invalid_argument("quantile: u must be in (0, 1)");
  if (is_gaussian()) {
    // C is a normal density with variance 2 sigma_k^2
    return 2.0 * gaussian_sigma_k_ * boost::math::erf_inv(2.0 * u - 1.0);
  }
  const double v = u >= 0.5 ? u : 1.0 - u;
  const double pos = (v - 0.5) * 2.0 * static_cast<double>(quantile_knots_.size() - 1);
  auto j = static_cast<std::size_t>(pos);
  if (j + 1 >= quantile_knots_.size()) j = quantile_knots_.size() - 2;
  const double t = pos - static_cast<double>(j);
  const double q = quantile_knots_[j] + t * (quantile_knots_[j + 1] - quantile_knots_[j]);
  return u >= 0.5 ? q : -q;
}

quad::Result Envelope::integrate_weighted(const std::function<double(double)>& weight,
                                          double rel_tol) const {
  if (is_gaussian()) {
    return quad::integrate([&](double x) { return (*this)(x)*weight(x); }, -halfwidth_,
                           halfwidth_, rel_tol);
  }
  // C is exactly piecewise linear on the stored grid; 3-point Gauss-Legendre
  // per cell integrates (linear) * (smooth weight) with negligible error. The
  // 2-point rule provides the error estimate.
  static constexpr double gl3_x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double gl3_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  static constexpr double gl2_x[2] = {-0.5773502691896257, 0.5773502691896257};

  double total = 0.0, err = 0.0;
  const std::size_t cells = values_.size() - 1;
  for (int side = -1; side <= 1; side += 2) {
    for (std::size_t c = 0; c < cells; ++c) {
      // cell [lo, hi] in increasing order; C mirrors onto negative dk
      const double lo = side > 0 ? static_cast<double>(c) * grid_step_
                                 : -static_cast<double>(c + 1) * grid_step_;
      const double hi = lo + grid_step_;
      const double clo = side > 0 ? values_[c] : values_[c + 1];
      const double chi = side > 0 ? values_[c + 1] : values_[c];
      const double mid = 0.5 * (lo + hi), half = 0.5 * grid_step_;
      auto f = [&](double xi) {
        const double x = mid + half * xi;
        const double lin = clo + (chi - clo) * ((x - lo) / grid_step_);
        return lin * weight(x);
      };
      double s3 = 0.0;
      for (int q = 0; q < 3; ++q) s3 += gl3_w[q] * f(gl3_x[q]);
      const double s2 = f(gl2_x[0]) + f(gl2_x[1]);
      total += half * s3;
      err += half * std::abs(s3 - s2);
    }
  }
  return {total, err};
}

Envelope build_envelope(const WavepacketSpec& spec) {
  validate(spec);
  Envelope env;

  if (const auto* g = std::get_if<GaussianSpec>(&spec)) {
    env.gaussian_sigma_k_ = g->sigma_k;
    env.second_moment_ = 2.0 * g->sigma_k * g->sigma_k;
    // erf(b / 2 sigma_k) = 1 - 1e-10
    env.halfwidth_ = 2.0 * g->sigma_k * boost::math::erf_inv(1.0 - kMassTail);
    return env;
  }

  const auto& tab = as_tabulated(spec);
  const std::size_t n = tab.grid.size();

  // Resample |phi|^2 onto a uniform grid at 4x the input resolution.
  const std::size_t m = 4 * (n - 1) + 1;
  const double lo = tab.grid.front(), hi = tab.grid.back();
  const double h = (hi - lo) / static_cast<double>(m - 1);
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i)
    g[i] = cubic_interp(tab.grid, tab.amplitude_sq, lo + static_cast<double>(i) * h);

  // Direct correlation: C(j h) = h * sum_i g_i g_{i-j}; symmetric in j.
  std::vector<double> corr(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = j; i < m; ++i) s += g[i] * g[i - j];
    corr[j] = h * s;
  }

  // renormalize to unit mass over [-span, span]
  double half_mass = 0.0;
  for (std::size_t j = 1; j < m; ++j) half_mass += 0.5 * h * (corr[j] + corr[j - 1]);
  const double mass = 2.0 * half_mass;
  if (!(mass > 0.0)) throw std::invalid_argument("envelope: degenerate autocorrelation");
  for (double& v : corr) v /= mass;

  env.grid_step_ = h;
  env.values_ = std::move(corr);

  // Second moment of the stored piecewise-linear density (exact per cell).
  double m2 = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    const double a = static_cast<double>(j - 1) * h, b = static_cast<double>(j) * h;
    const double c0 = env.values_[j - 1], c1 = env.values_[j];
    // int_a^b x^2 (c0 + (c1-c0)(x-a)/h) dx, doubled for the mirror half
    const double i2 = (b * b * b - a * a * a) / 3.0;
    const double i3 = (b * b * b * b - a * a * a * a) / 4.0;
    m2 += 2.0 * (c0 * i2 + (c1 - c0) / h * (i3 - a * i2));
  }
  env.second_moment_ = m2;

  // Smallest grid bound with >= 1 - 1e-10 of the mass; also the CDF table.
  std::vector<double> cdf(m);  // CDF at +j h, from 0.5 upward
  cdf[0] = 0.5;
  for (std::size_t j = 1; j < m; ++j) cdf[j] = cdf[j - 1] + 0.5 * h * (env.values_[j] + env.values_[j - 1]);
  const double top = cdf[m - 1];
  for (double& v : cdf) v = 0.5 + (v - 0.5) / (top - 0.5) * 0.5;  // force CDF(span) = 1
  std::size_t jb = m - 1;
  while (jb > 1 && 2.0 * (cdf[jb - 1] - 0.5) >= 1.0 - kMassTail) --jb;
  env.halfwidth_ = static_cast<double>(jb) * h;

  // Inverse-CDF knots, uniform in u over [0.5, 1]; monotone by construction.
  env.quantile_knots_.resize(kQuantileKnots);
  std::size_t seg = 0;
  for (std::size_t q = 0; q < kQuantileKnots; ++q) {
    const double u = 0.5 + 0.5 * static_cast<double>(q) / static_cast<double>(kQuantileKnots - 1);
    while (seg + 1 < m && cdf[seg + 1] < u) ++seg;
    const double du = cdf[seg + 1] - cdf[seg];
    const double t = du > 0.0 ? (u - cdf[seg]) / du : 0.0;
    env.quantile_knots_[q] =
        (static_cast<double>(seg) + std::clamp(t, 0.0, 1.0)) * h;
  }
  return env;
}

}  // namespace hombeat
