#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "windeval/error.hpp"
#include "windeval/spectral.hpp"

using namespace windeval;

namespace {

Field2D scaled(const Field2D& f, double a) {
  return oracle::field_from(f.rows(), f.cols(), [&](auto i, auto j) { return a * f(i, j); });
}

Field2D cosine(std::size_t m, std::size_t n, int k) {
  return oracle::field_from(m, n, [&](auto x, auto) {
    return std::cos(2.0 * std::numbers::pi * k * static_cast<double>(x) / static_cast<double>(m));
  });
}

}  // namespace

TEST_CASE("signed frequencies") {
  CHECK(signed_frequency(0, 8) == 0);
  CHECK(signed_frequency(3, 8) == 3);
  CHECK(signed_frequency(4, 8) == -4);
  CHECK(signed_frequency(7, 8) == -1);
  CHECK(signed_frequency(2, 5) == 2);
  CHECK(signed_frequency(3, 5) == -2);
}

TEST_CASE("power spectrum matches the direct DFT") {
  std::mt19937_64 rng(1);
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{8, 8}, {6, 10}, {9, 7}}) {
    const Field2D f = oracle::random_field(m, n, rng, -1, 1);
    const Spectrum2D s = power_spectrum_2d(f);
    const auto ref = oracle::direct_power_spectrum(f);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(s.power[i] - ref[i]) < 1e-14);
  }
}

TEST_CASE("power spectrum of a constant and of a cosine") {
  const Field2D c = Field2D::filled(oracle::grid(12, 16), 1.7);
  const Spectrum2D sc = power_spectrum_2d(c);
  CHECK(sc(0, 0) == doctest::Approx(1.7 * 1.7).epsilon(1e-12));
  for (std::size_t i = 1; i < sc.power.size(); ++i) CHECK(sc.power[i] < 1e-24);

  const Field2D f = cosine(32, 32, 4);
  const Spectrum2D s = power_spectrum_2d(f);
  const auto ref = oracle::direct_power_spectrum(f);
  CHECK(s(4, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s(28, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ref[4 * 32] == doctest::Approx(0.25).epsilon(1e-12));
  double rest = 0.0;
  for (std::size_t i = 0; i < s.power.size(); ++i)
    if (i != 4 * 32 && i != 28 * 32) rest += s.power[i];
  CHECK(rest < 1e-20);
}

TEST_CASE("Parseval under the 1/(mn) normalisation") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Field2D f = oracle::random_field(24, 20, rng, -2, 3);
    const Spectrum2D s = power_spectrum_2d(f);
    double lhs = 0, rhs = 0;
    for (double p : s.power) lhs += p;
    for (double x : f.values()) rhs += x * x;
    rhs /= static_cast<double>(f.size());
    CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
  }
}

TEST_CASE("rapsd binning") {
  std::mt19937_64 rng(3);
  SUBCASE("bookkeeping on square and non-square grids") {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{32, 32}, {34, 42}, {136, 168}, {9, 4}}) {
      const Rapsd r = rapsd(oracle::random_field(m, n, rng));
      CHECK(r.k_max() == std::min(m, n) / 2);
      std::size_t total = 0;
      for (auto c : r.counts) {
        CHECK(c > 0);
        total += c;
      }
      CHECK(total + r.discarded_cells + 1 == m * n);
      CHECK(total <= m * n - 1);
    }
  }
  SUBCASE("independent recount of one bin") {
    const Field2D f = oracle::random_field(16, 12, rng);
    const Rapsd r = rapsd(f);
    const auto p = oracle::direct_power_spectrum(f);
    double sum = 0;
    std::size_t count = 0;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 12; ++j) {
        const int kx = i < 8 ? i : i - 16, ky = j < 6 ? j : j - 12;
        if (std::lround(std::hypot(kx, ky)) == 3) sum += p[i * 12 + j], ++count;
      }
    CHECK(r.counts[2] == count);
    CHECK(r.energies[2] == doctest::Approx(sum / count).epsilon(1e-10));
    CHECK(r.wavelengths_km[2] == doctest::Approx(25.0 / 3.0));
  }
  SUBCASE("constant field has no radial energy") {
    const Rapsd r = rapsd(Field2D::filled(oracle::grid(8, 8), 4.0));
    for (double e : r.energies) CHECK(e < 1e-28);
  }
  SUBCASE("sinusoid concentrates in its bin") {
    const Rapsd r = rapsd(cosine(32, 32, 4));
    for (std::size_t k = 0; k < r.k_max(); ++k)
      if (r.wavenumbers[k] != 4) CHECK(r.energies[3] > 1e3 * r.energies[k]);
  }
  SUBCASE("too small") {
    try {
      rapsd(oracle::random_field(3, 8, rng));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "field-too-small");
    }
  }
}

TEST_CASE("white noise has a flat radial spectrum") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0, 1);
  std::vector<Rapsd> all;
  for (int t = 0; t < 50; ++t)
    all.push_back(rapsd(oracle::field_from(64, 64, [&](auto, auto) { return nd(rng); })));
  const Rapsd avg = average_rapsd(all);
  const auto [lo, hi] = std::ranges::minmax(avg.energies);
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("rapsd ignores periodic translation") {
  std::mt19937_64 rng(5);
  const Field2D f = oracle::random_field(16, 16, rng);
  const Field2D shifted = oracle::field_from(16, 16, [&](auto i, auto j) { return f((i + 5) % 16, (j + 11) % 16); });
  const Rapsd a = rapsd(f), b = rapsd(shifted);
  for (std::size_t k = 0; k < a.k_max(); ++k) CHECK(a.energies[k] == doctest::Approx(b.energies[k]).epsilon(1e-10));
}

TEST_CASE("melr") {
  std::mt19937_64 rng(6);
  const Field2D f = oracle::random_field(32, 32, rng);
  const MelrResult same = melr(f, f);
  CHECK(same.value == 0.0);
  CHECK(same.bins_used == 16);

  CHECK(melr(scaled(f, 2.0), f).value == doctest::Approx(std::log(4.0)).epsilon(1e-10));
  CHECK(melr(scaled(f, 2.0), f, MelrMode::sum).value == doctest::Approx(16 * std::log(4.0)).epsilon(1e-10));
  CHECK(melr(scaled(f, 2.0), f, MelrMode::mean, 10.0).value == doctest::Approx(std::log10(4.0)).epsilon(1e-10));
  CHECK(melr(scaled(f, -0.3), f).value == doctest::Approx(std::abs(std::log(0.09))).epsilon(1e-10));

  for (int t = 0; t < 20; ++t) {
    const Field2D a = oracle::random_field(16, 20, rng), b = oracle::random_field(16, 20, rng);
    CHECK(melr(a, b).value == doctest::Approx(melr(b, a).value).epsilon(1e-12));
  }

  SUBCASE("low-energy bins are skipped and counted") {
    const Field2D c = cosine(16, 16, 2);
    const MelrResult r = melr(c, c);
    CHECK(r.bins_used == 1);
    CHECK(r.bins_skipped == 7);
  }
  SUBCASE("no valid bins") {
    const Field2D c = Field2D::filled(oracle::grid(8, 8), 1.0);
    try {
      melr(c, c);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "empty-spectrum");
    }
  }
  CHECK_THROWS_AS(melr(f, oracle::random_field(32, 30, rng)), Error);
}
