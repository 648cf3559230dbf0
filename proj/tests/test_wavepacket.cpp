#include <doctest.h>

#include <cmath>
#include <fstream>
#include <vector>

#include <hombeat/wavepacket.hpp>

#include "testutil.hpp"

using namespace hombeat;

namespace {

// |phi|^2 of a sigma_k = 1 Gaussian sampled on [-8, 8].
WavepacketSpec sampled_gaussian(std::size_t points = 2048, double mean = 0.0) {
  std::vector<double> k(points), a(points);
  for (std::size_t i = 0; i < points; ++i) {
    k[i] = -8.0 + mean + 16.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const double z = k[i] - mean;
    a[i] = std::exp(-0.5 * z * z);
  }
  return make_tabulated(std::move(k), std::move(a));
}

double gaussian_envelope(double dk, double sigma_k) {
  const double s2 = sigma_k * sigma_k;
  return std::exp(-dk * dk / (4.0 * s2)) / std::sqrt(4.0 * 3.14159265358979323846 * s2);
}

}  // namespace

TEST_CASE("gaussian envelope closed form") {
  const Envelope env = build_envelope(make_gaussian(1.0));
  // 1/sqrt(4 pi), frozen from the closed form
  CHECK(env(0.0) == doctest::Approx(0.28209479177387814).epsilon(1e-12));
  CHECK(env.second_moment() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(env(1.5) == doctest::Approx(gaussian_envelope(1.5, 1.0)).epsilon(1e-12));

  const Envelope wide = build_envelope(make_gaussian(2.5));
  CHECK(wide.second_moment() == doctest::Approx(2.0 * 2.5 * 2.5).epsilon(1e-12));
}

TEST_CASE("tabulated envelope matches the gaussian closed form pointwise") {
  const Envelope env = build_envelope(sampled_gaussian());
  for (double dk = -6.0; dk <= 6.0; dk += 0.37)
    CHECK(std::abs(env(dk) - gaussian_envelope(dk, 1.0)) < 1e-6);
  CHECK(std::abs(env.second_moment() - 2.0) < 1e-6);
}

TEST_CASE("envelope ignores a mean offset of |phi|^2") {
  const Envelope centered = build_envelope(sampled_gaussian());
  const Envelope shifted = build_envelope(sampled_gaussian(2048, 3.0));
  for (double dk : {0.0, 0.7, 2.2, 5.0})
    CHECK(shifted(dk) == doctest::Approx(centered(dk)).epsilon(1e-9));
  CHECK(std::abs(shifted.second_moment() - 2.0) < 1e-6);
}

TEST_CASE("sigma_k_of") {
  CHECK(sigma_k_of(make_gaussian(1.5)) == 1.5);
  CHECK(std::abs(sigma_k_of(sampled_gaussian()) - 1.0) < 1e-6);

  // uniform |phi|^2 on [-a, a] has sigma_k = a / sqrt(3)
  const double a = 2.0;
  std::vector<double> k(4097), v(4097, 1.0);
  for (std::size_t i = 0; i < k.size(); ++i)
    k[i] = -a + 2.0 * a * static_cast<double>(i) / static_cast<double>(k.size() - 1);
  const WavepacketSpec uniform = make_tabulated(std::move(k), std::move(v));
  CHECK(std::abs(sigma_k_of(uniform) - a / std::sqrt(3.0)) < 1e-6);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(make_gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_gaussian(-1.0), std::invalid_argument);

  std::vector<double> k(32), zero(32, 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<double>(i);
  CHECK_THROWS_AS(make_tabulated(k, zero), std::invalid_argument);

  std::vector<double> decreasing = k;
  std::swap(decreasing[3], decreasing[4]);
  CHECK_THROWS_AS(make_tabulated(decreasing, std::vector<double>(32, 1.0)),
                  std::invalid_argument);

  CHECK_THROWS_AS(make_tabulated({0.0, 1.0}, {1.0, 1.0}), std::invalid_argument);

  std::vector<double> negative(32, 1.0);
  negative[7] = -0.5;
  CHECK_THROWS_AS(make_tabulated(k, negative), std::invalid_argument);
}

TEST_CASE("envelope properties over random tabulated specs") {
  testutil::Gen gen(0x5eed0001);
  for (int trial = 0; trial < 25; ++trial) {
    const WavepacketSpec spec = gen.tabulated_spec();
    const Envelope env = build_envelope(spec);

    // unit mass
    const auto mass = env.integrate_weighted([](double) { return 1.0; });
    CHECK(std::abs(mass.value - 1.0) < 1e-8);

    // symmetry is exact by construction
    for (double dk : {0.3, 1.1, 2.9}) CHECK(env(dk) == env(-dk));

    // autocorrelation doubles the variance
    const double sk = sigma_k_of(spec);
    CHECK(env.second_moment() == doctest::Approx(2.0 * sk * sk).epsilon(1e-4));

    // the truncation bound really holds the mass it claims
    const double b = env.support_halfwidth();
    const double inside =
        env.integrate_weighted([&](double x) { return std::abs(x) <= b ? 1.0 : 0.0; }).value;
    CHECK(inside >= 1.0 - 1e-10 - 1e-12);
  }
}

TEST_CASE("quantile inverts the envelope CDF") {
  const Envelope gauss = build_envelope(make_gaussian(0.8));
  for (double u : {0.01, 0.2, 0.5, 0.77, 0.999}) {
    const double q = gauss.quantile(u);
    const double cdf = 0.5 + quad::integrate([&](double x) { return gauss(x); }, 0.0, q).value;
    CHECK(cdf == doctest::Approx(u).epsilon(1e-9));
  }
  CHECK(gauss.quantile(0.5) == 0.0);
  CHECK_THROWS_AS(gauss.quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss.quantile(1.0), std::invalid_argument);

  const Envelope tab = build_envelope(sampled_gaussian());
  for (double u : {0.05, 0.31, 0.5, 0.93}) {
    const double q = tab.quantile(u);
    // dense midpoint sum: the kinky interpolant defeats adaptive quadrature
    const double cdf = 0.5 + testutil::riemann([&](double x) { return tab(x); }, 0.0, q, 200001);
    CHECK(std::abs(cdf - u) < 5e-4);
  }
}

TEST_CASE("wavepacket CSV loading") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto good = dir / "hombeat_wavepacket_ok.csv";
  {
    std::ofstream out(good);
    out << "k,amplitude_sq\n";
    for (int i = 0; i < 64; ++i) {
      const double k = -4.0 + 8.0 * i / 63.0;
      out << k << "," << std::exp(-0.5 * k * k) << "\n";
    }
  }
  const WavepacketSpec spec = load_wavepacket_csv(good);
  CHECK(std::get<TabulatedSpec>(spec).grid.size() == 64);
  CHECK(std::abs(sigma_k_of(spec) - 1.0) < 1e-2);  // coarse grid, coarse check

  const auto bad = dir / "hombeat_wavepacket_bad.csv";
  {
    std::ofstream out(bad);
    out << "k,amplitude_sq\n";
    out << "0.0,not_a_number\n";
  }
  CHECK_THROWS(load_wavepacket_csv(bad));
  CHECK_THROWS(load_wavepacket_csv(dir / "hombeat_missing.csv"));
}
