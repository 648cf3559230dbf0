#pragma once

#include <cstddef>

#include <hombeat/interference.hpp>

namespace hombeat {

/// Information matrix over the parameters (delta_x, centroid), in 1/length^2.
/// Symmetric; f12 stored once. err* are absolute quadrature error estimates.
struct FisherMatrix {
  double f11 = 0.0;
  double f12 = 0.0;
  double f22 = 0.0;
  double err11 = 0.0;
  double err12 = 0.0;
  double err22 = 0.0;
};

/// Pointwise values of the three information integrands at one delta_k.
/// Ratios with vanishing numerator and denominator are replaced by their
/// directional limits along delta_k.
struct FisherIntegrand {
  double f11 = 0.0;
  double f12 = 0.0;
  double f22 = 0.0;
};
FisherIntegrand fisher_integrand(const Scene& scene, double delta_k);

/// Information matrix by adaptive quadrature of the integrands over the
/// envelope support. Aligned scenes (m = 0) reduce analytically to
/// diag(sigma_k^2 / 2, 0); that path is exact and used directly.
FisherMatrix fisher_matrix(const Scene& scene, double rel_tol = 1e-9);

/// Information for delta_x at alignment: sigma_k^2 / 2, independent of the
/// separation and of the wavepacket shape.
double fisher_aligned(const WavepacketSpec& spec);

/// Information available from bucket (non-resolving) detection of an aligned
/// scene. Tends to sigma_k^2 / 2 as delta_x -> 0 and decays for separations
/// beyond the wavepacket width. delta_x = 0 returns the analytic limit.
double fisher_bucket(const Scene& scene, double rel_tol = 1e-9);

/// Cramer-Rao variance bound 1/(n * information) for n detected pairs.
/// information == 0 yields +infinity rather than an error.
double crb(double information, std::size_t n);

}  // namespace hombeat
