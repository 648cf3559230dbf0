#pragma once

#include <cstdint>
#include <vector>

#include <hombeat/interference.hpp>

namespace hombeat {

/// An i.i.d. set of detection events drawn from the pair distribution, with
/// enough context to regenerate it bit-for-bit.
struct SampleBatch {
  Scene scene;
  std::uint64_t seed = 0;
  std::vector<Outcome> outcomes;
};

/// Seed for stream `index` derived from `base`. Streams with distinct indices
/// are statistically independent; the study harness hands stream i to trial i
/// so results do not depend on how trials are distributed over workers.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Draws n outcomes exactly: delta_k from the marginal C via inverse CDF, then
/// the tag as a Bernoulli with p(B | dk) = (1 + cos(dk dx/2) cos(dk m)) / 2.
/// No rejection step; (scene, seed, n) fully determines the batch.
SampleBatch draw(const Scene& scene, std::uint64_t seed, std::size_t n);

/// Bucket-detector run: n i.i.d. tags with P(B) from bucket_probability.
/// Requires an aligned scene; same determinism contract as draw().
std::vector<Tag> draw_bucket(const Scene& scene, std::uint64_t seed, std::size_t n);

}  // namespace hombeat
