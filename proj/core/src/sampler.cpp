#include <hombeat/sampler.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace hombeat {

namespace {

// Uniform double in the open interval (0, 1): cell midpoints of a 2^53 grid,
// so the quantile transform never sees 0 or 1.
double unit_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over base ^ index
  std::uint64_t z = (base ^ index) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SampleBatch draw(const Scene& scene, std::uint64_t seed, std::size_t n) {
  if (n < 1) throw std::invalid_argument("draw: n must be >= 1");
  const Envelope& env = scene.envelope();
  const double half_dx = scene.delta_x() / 2.0;
  const double m = scene.misalignment();

  SampleBatch batch{scene, seed, {}};
  batch.outcomes.reserve(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double dk = env.quantile(unit_open(rng));
    const double p_bunch = 0.5 * (1.0 + std::cos(dk * half_dx) * std::cos(dk * m));
    const Tag tag = unit_open(rng) < p_bunch ? Tag::Bunch : Tag::Antibunch;
    batch.outcomes.push_back({dk, tag});
  }
  return batch;
}

std::vector<Tag> draw_bucket(const Scene& scene, std::uint64_t seed, std::size_t n) {
  if (n < 1) throw std::invalid_argument("draw_bucket: n must be >= 1");
  const double p_bunch = bucket_probability(scene, Tag::Bunch);

  std::vector<Tag> tags;
  tags.reserve(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    tags.push_back(unit_open(rng) < p_bunch ? Tag::Bunch : Tag::Antibunch);
  return tags;
}

}  // namespace hombeat
