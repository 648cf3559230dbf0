#include <doctest.h>

#include <cmath>

#include <hombeat/interference.hpp>

#include "testutil.hpp"

using namespace hombeat;

namespace {
const double pi = 3.14159265358979323846;

Scene gaussian_scene(double sigma_k, double dx, double xs = 0.0, double m = 0.0) {
  return Scene(make_gaussian(sigma_k), dx, xs, xs + m);
}
}  // namespace

TEST_CASE("scene basics") {
  const Scene s = gaussian_scene(1.0, 2.0, 0.4, 0.7);
  CHECK(s.misalignment() == doctest::Approx(0.7));
  CHECK_FALSE(s.aligned());
  CHECK(s.sigma_x() == doctest::Approx(0.5));
  CHECK(gaussian_scene(1.0, 2.0).aligned());
  CHECK_THROWS_AS(Scene(make_gaussian(1.0), std::nan(""), 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("momentum from pixel") {
  const DetectorGeometry g(2.0, 4.0);
  CHECK(momentum_from_pixel(g, 0.0) == 0.0);
  CHECK(momentum_from_pixel(g, 1.0) == doctest::Approx(0.5));
  const DetectorGeometry far(2.0, 8.0);
  CHECK(momentum_from_pixel(far, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(DetectorGeometry(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DetectorGeometry(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("joint density fixed points") {
  const Scene hom = gaussian_scene(1.0, 0.0);
  // identical photons always bunch
  for (double dk : {0.0, 0.3, 1.7, 4.0}) CHECK(joint_density(hom, {dk, Tag::Antibunch}) == 0.0);
  CHECK(joint_density(hom, {0.0, Tag::Bunch}) ==
        doctest::Approx(hom.envelope()(0.0)).epsilon(1e-14));

  // beat node of the bunching curve at dk = 2 pi / dx
  const Scene s = gaussian_scene(1.0, 1.3);
  const double node = 2.0 * pi / 1.3;
  CHECK(joint_density(s, {node, Tag::Bunch}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("aligned density beats") {
  const Scene a4 = gaussian_scene(1.0, 4.0);
  // first node of P(., B) at dk = pi/2; antibunch peaks there
  CHECK(aligned_density(a4, {pi / 2.0, Tag::Bunch}) < 1e-15);
  CHECK(aligned_density(a4, {pi / 2.0, Tag::Antibunch}) ==
        doctest::Approx(a4.envelope()(pi / 2.0)).epsilon(1e-12));

  // doubling the separation halves the node spacing
  const Scene a8 = gaussian_scene(1.0, 8.0);
  CHECK(aligned_density(a8, {pi / 4.0, Tag::Bunch}) < 1e-15);

  // period 4 pi / dx
  const double period = 4.0 * pi / 4.0;
  for (double dk : {0.2, 0.9, 1.4}) {
    const double lhs = aligned_density(a4, {dk, Tag::Bunch}) / a4.envelope()(dk);
    const double rhs = aligned_density(a4, {dk + period, Tag::Bunch}) / a4.envelope()(dk + period);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }

  // tags sum to the envelope
  for (double dk : {0.0, 0.31, 2.2, 5.5})
    CHECK(aligned_density(a4, {dk, Tag::Bunch}) + aligned_density(a4, {dk, Tag::Antibunch}) ==
          doctest::Approx(a4.envelope()(dk)).epsilon(1e-13));

  CHECK_THROWS_AS(aligned_density(gaussian_scene(1.0, 1.0, 0.0, 0.2), {0.0, Tag::Bunch}),
                  std::invalid_argument);
}

TEST_CASE("bucket probability") {
  CHECK(bucket_probability(gaussian_scene(1.0, 0.0), Tag::Bunch) == doctest::Approx(1.0));
  CHECK(bucket_probability(gaussian_scene(1.0, 0.0), Tag::Antibunch) == doctest::Approx(0.0));

  // (1 + e^{-1}) / 2, frozen from the characteristic-function integral
  CHECK(bucket_probability(gaussian_scene(1.0, 2.0), Tag::Bunch) ==
        doctest::Approx(0.6839397205857212).epsilon(1e-12));

  // far-separated sources bunch at chance level
  CHECK(bucket_probability(gaussian_scene(1.0, 60.0), Tag::Bunch) ==
        doctest::Approx(0.5).epsilon(1e-9));

  // tabulated route goes through quadrature
  testutil::Gen gen(0x5eed0002);
  const Scene tab(gen.tabulated_spec(), 2.0, 0.0, 0.0);
  const double sk = tab.sigma_k();
  const double direct = testutil::riemann(
      [&](double dk) { return tab.envelope()(dk) * std::cos(dk * 1.0); },
      -tab.envelope().support_halfwidth(), tab.envelope().support_halfwidth());
  CHECK(bucket_probability(tab, Tag::Bunch) == doctest::Approx(0.5 * (1.0 + direct)).epsilon(1e-7));
  CHECK(bucket_probability(tab, Tag::Bunch) + bucket_probability(tab, Tag::Antibunch) ==
        doctest::Approx(1.0));
  CHECK(sk > 0.0);

  CHECK_THROWS_AS(bucket_probability(gaussian_scene(1.0, 1.0, 0.0, 0.3), Tag::Bunch),
                  std::invalid_argument);
}

TEST_CASE("oracle density agrees with the closed form") {
  // fixed spots from the module contract
  const Scene s1 = gaussian_scene(1.0, 1.0);
  CHECK(std::abs(oracle_density(s1, {1.0, Tag::Bunch}) - joint_density(s1, {1.0, Tag::Bunch})) <
        1e-6);

  const Scene hom = gaussian_scene(1.0, 0.0);
  for (double dk : {0.0, 0.8, 2.9}) CHECK(std::abs(oracle_density(hom, {dk, Tag::Antibunch})) < 1e-8);

  const Scene mis = gaussian_scene(1.0, 1.3, 0.0, 0.7);
  for (Tag tag : {Tag::Bunch, Tag::Antibunch})
    CHECK(std::abs(oracle_density(mis, {2.0, tag}) - joint_density(mis, {2.0, tag})) < 1e-6);
}

TEST_CASE("oracle equivalence over random scenes") {
  testutil::Gen gen(0x5eed0003);
  for (int trial = 0; trial < 20; ++trial) {
    const Scene scene = gen.gaussian_scene(trial % 2 == 1);
    const double b = scene.envelope().support_halfwidth();
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double dk = -b + 2.0 * b * (static_cast<double>(i) + 0.5) / 64.0;
      for (Tag tag : {Tag::Bunch, Tag::Antibunch}) {
        const double d = std::abs(oracle_density(scene, {dk, tag}) - joint_density(scene, {dk, tag}));
        worst = std::max(worst, d);
      }
    }
    CHECK(worst <= 1e-6);
  }

  // tabulated wavepackets take the exact per-cell route
  const Scene tab(testutil::Gen(0x5eed0004).tabulated_spec(), 0.9, 0.1, 0.6);
  for (double dk : {0.0, 0.5, 1.9, 3.3})
    for (Tag tag : {Tag::Bunch, Tag::Antibunch})
      CHECK(std::abs(oracle_density(tab, {dk, tag}) - joint_density(tab, {dk, tag})) < 2e-5);
}

TEST_CASE("density symmetries over random scenes") {
  testutil::Gen gen(0x5eed0005);
  for (int trial = 0; trial < 100; ++trial) {
    const Scene scene = gen.gaussian_scene(trial % 3 != 0);

    // normalization over both tags
    const double b = scene.envelope().support_halfwidth();
    double total = 0.0;
    for (Tag tag : {Tag::Bunch, Tag::Antibunch})
      total +=
          hombeat::quad::integrate([&](double dk) { return joint_density(scene, {dk, tag}); },
                                   -b, b)
              .value;
    CHECK(std::abs(total - 1.0) < 1e-7);

    const double dk = gen.uniform(-4.0, 4.0);
    for (Tag tag : {Tag::Bunch, Tag::Antibunch}) {
      const double p = joint_density(scene, {dk, tag});
      // even in dk
      CHECK(joint_density(scene, {-dk, tag}) == p);
      // only |delta_x| is identified
      const Scene flipped(scene.wavepacket(), -scene.delta_x(), scene.centroid(), scene.x0());
      CHECK(joint_density(flipped, {dk, tag}) == p);
      // relabeling the two sources changes nothing
      const double x1 = scene.centroid() + scene.delta_x() / 2.0;
      const double x2 = scene.centroid() - scene.delta_x() / 2.0;
      const Scene swapped(scene.wavepacket(), x2 - x1, (x1 + x2) / 2.0, scene.x0());
      CHECK(joint_density(swapped, {dk, tag}) == doctest::Approx(p).epsilon(1e-12));
    }
  }
}

TEST_CASE("tag plumbing") {
  CHECK(tag_sign(Tag::Bunch) == 1.0);
  CHECK(tag_sign(Tag::Antibunch) == -1.0);
  CHECK(tag_char(Tag::Bunch) == 'B');
  CHECK(tag_from_char('A') == Tag::Antibunch);
  CHECK_THROWS_AS(tag_from_char('x'), std::invalid_argument);
}
