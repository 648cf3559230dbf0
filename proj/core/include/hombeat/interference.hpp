#pragma once

#include <cstdint>
#include <memory>

#include <hombeat/wavepacket.hpp>

namespace hombeat {

/// Which-port record of one detected pair: both photons on the same camera
/// (bunch) or on opposite cameras (antibunch).
enum class Tag : std::uint8_t { Antibunch, Bunch };

/// Sign alpha(X) entering the beat term: +1 for bunching, -1 for antibunching.
constexpr double tag_sign(Tag t) { return t == Tag::Bunch ? 1.0 : -1.0; }

constexpr char tag_char(Tag t) { return t == Tag::Bunch ? 'B' : 'A'; }
Tag tag_from_char(char c);

/// One sampling outcome: transverse-momentum difference and port tag.
struct Outcome {
  double delta_k = 0.0;
  Tag tag = Tag::Bunch;
};

/// Physical configuration of the interferometer: two sources separated by
/// delta_x around a centroid, a reference photon centered at x0, and the
/// common wavepacket. Immutable; cheap to copy (the envelope is shared).
class Scene {
 public:
  Scene(WavepacketSpec spec, double delta_x, double centroid, double x0);

  double delta_x() const { return delta_x_; }
  double centroid() const { return centroid_; }
  double x0() const { return x0_; }
  /// Reference offset from the centroid, m = x0 - x_s.
  double misalignment() const { return x0_ - centroid_; }
  bool aligned() const { return misalignment() == 0.0; }

  const WavepacketSpec& wavepacket() const { return spec_; }
  const Envelope& envelope() const { return *envelope_; }
  double sigma_k() const { return sigma_k_; }
  /// Diffraction-limited spot size, sigma_x = 1/(2 sigma_k).
  double sigma_x() const { return 0.5 / sigma_k_; }

  /// Same physics with a different separation; the envelope is reused.
  Scene with_delta_x(double delta_x) const;

 private:
  WavepacketSpec spec_;
  std::shared_ptr<const Envelope> envelope_;
  double delta_x_, centroid_, x0_, sigma_k_;
};

/// Far-field mapping between camera pixels and transverse momenta.
struct DetectorGeometry {
  DetectorGeometry(double k0, double d);
  double k0;  ///< longitudinal wavenumber, > 0
  double d;   ///< propagation distance, > 0
};

/// k = y * k0 / d for a pixel at transverse position y.
double momentum_from_pixel(const DetectorGeometry& geometry, double y);

/// Probability density over (delta_k, tag) of one detected pair:
/// (1/2) C(dk) (1 + alpha(X) cos(dk dx/2) cos(dk (x0 - x_s))).
double joint_density(const Scene& scene, const Outcome& outcome);

/// joint_density specialized to an aligned scene (x0 == centroid); the
/// bunching curve beats with period 4 pi / delta_x. Throws if misaligned.
double aligned_density(const Scene& scene, const Outcome& outcome);

/// P(B) for an aligned scene read out with non-resolving bucket detectors.
/// Gaussian envelopes use the closed form (1 + exp(-sigma_k^2 dx^2 / 4)) / 2.
double bunch_probability(const Envelope& envelope, double delta_x, double rel_tol = 1e-9);

/// Bucket-detector probability of tag X for an aligned scene.
double bucket_probability(const Scene& scene, Tag tag);

struct OracleOptions {
  double rel_tol = 1e-9;
  unsigned max_depth = 15;
};

/// Brute-force reference density: assembles the per-(k, k') correlation
/// probabilities from the Fraunhofer-propagated fields and marginalizes the
/// mean momentum K numerically. Slow; exists to cross-check joint_density.
double oracle_density(const Scene& scene, const Outcome& outcome, const OracleOptions& opts = {});

}  // namespace hombeat
