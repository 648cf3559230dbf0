#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <variant>
#include <vector>

#include <hombeat/quadrature.hpp>

namespace hombeat {

/// Gaussian momentum-space intensity |phi(k)|^2 with standard deviation
/// sigma_k (units 1/length). The real-space width is sigma_x = 1/(2 sigma_k).
struct GaussianSpec {
  double sigma_k = 1.0;
};

/// |phi(k)|^2 sampled on a strictly increasing momentum grid, interpreted as
/// piecewise linear. Normalized to unit trapezoid mass by make_tabulated().
struct TabulatedSpec {
  std::vector<double> grid;          ///< momenta k_i (1/length)
  std::vector<double> amplitude_sq;  ///< |phi(k_i)|^2 >= 0
};

using WavepacketSpec = std::variant<GaussianSpec, TabulatedSpec>;

/// Validated Gaussian spec; throws std::invalid_argument for sigma_k <= 0.
WavepacketSpec make_gaussian(double sigma_k);

/// Validated, renormalized tabulated spec. Requires 16..8192 grid points,
/// strictly increasing finite momenta, nonnegative values with positive mass.
WavepacketSpec make_tabulated(std::vector<double> grid, std::vector<double> amplitude_sq);

/// Reads a tabulated spec from a two-column CSV (k, amplitude_sq). A header
/// row is required and skipped.
WavepacketSpec load_wavepacket_csv(const std::filesystem::path& path);

/// Throws std::invalid_argument when the spec violates its invariants.
void validate(const WavepacketSpec& spec);

/// Standard deviation of the momentum distribution |phi(k)|^2. Gaussian specs
/// return the stored parameter; tabulated specs the central second moment.
double sigma_k_of(const WavepacketSpec& spec);

/// Probability density of the momentum difference DeltaK of a detected pair:
/// the autocorrelation C of |phi|^2. Symmetric, unit mass, immutable.
class Envelope {
 public:
  /// Density value C(delta_k); zero outside the tabulated support.
  double operator()(double delta_k) const;

  /// Second moment of C; equals twice the momentum variance of |phi|^2.
  double second_moment() const { return second_moment_; }

  /// Half-width b of the symmetric interval holding >= 1 - 1e-10 of the mass.
  /// Quadrature and sampling truncate to [-b, b].
  double support_halfwidth() const { return halfwidth_; }

  /// Inverse CDF for u in (0, 1); the exact sampling route for delta_k.
  double quantile(double u) const;

  /// Integral of C(x) * weight(x) over the support, with an absolute error
  /// estimate. Gaussian envelopes use adaptive quadrature, tabulated ones an
  /// exact per-cell rule on the autocorrelation grid.
  quad::Result integrate_weighted(const std::function<double(double)>& weight,
                                  double rel_tol = 1e-9) const;

  bool is_gaussian() const { return grid_step_ == 0.0; }

  /// sigma_k of the underlying Gaussian spec; only valid for Gaussian form.
  double gaussian_sigma_k() const { return gaussian_sigma_k_; }

 private:
  friend Envelope build_envelope(const WavepacketSpec&);
  Envelope() = default;

  // Gaussian form: closed-form evaluation with gaussian_sigma_k_.
  // Tabulated form: values_[j] = C(j * grid_step_), mirrored to negative j.
  double gaussian_sigma_k_ = 0.0;
  double grid_step_ = 0.0;
  std::vector<double> values_;
  std::vector<double> quantile_knots_;  // dk at u = 0.5 .. 1, uniform in u
  double second_moment_ = 0.0;
  double halfwidth_ = 0.0;
};

/// Builds the envelope C for a valid spec. Gaussian specs use the closed form
/// exp(-dk^2 / (4 sigma_k^2)) / sqrt(4 pi sigma_k^2); tabulated specs are
/// autocorrelated numerically on a grid at 4x the input resolution.
Envelope build_envelope(const WavepacketSpec& spec);

}  // namespace hombeat
