#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "windeval/error.hpp"
#include "windeval/resample.hpp"

using namespace windeval;

namespace {

std::string code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "no-error";
}

double max_abs_diff(const Field2D& a, const Field2D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

Field2D combine(double alpha, const Field2D& f, double beta, const Field2D& g) {
  return oracle::field_from(f.rows(), f.cols(), [&](auto i, auto j) { return alpha * f(i, j) + beta * g(i, j); });
}

}  // namespace

TEST_CASE("factor must be at least 2") { CHECK(code_of([] { ResampleFactor(1); }) == "invalid-factor"); }

TEST_CASE("decimate") {
  const Field2D f = oracle::field_from(32, 32, [](auto i, auto j) { return static_cast<double>(i * 32 + j); });
  const Field2D d = decimate(f, ResampleFactor(4));
  CHECK(d.rows() == 8);
  CHECK(d.cols() == 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(d(i, j) == static_cast<double>((i * 4) * 32 + j * 4));
  CHECK(d.grid().lat_step == -1.0);
  CHECK(d.grid().spacing_km == 100.0);
  CHECK(d.grid().lat_origin == f.grid().lat_origin);

  const Field2D c = Field2D::filled(oracle::grid(16, 12), 2.5);
  CHECK(decimate(c, ResampleFactor(4)) == Field2D::filled(decimate_grid(c.grid(), ResampleFactor(4)), 2.5));
  CHECK(code_of([] { decimate(Field2D::filled(oracle::grid(10, 12), 1.0), ResampleFactor(4)); }) ==
        "non-divisible-decimation");
}

TEST_CASE("nearest regrid") {
  std::mt19937_64 rng(4);
  const Field2D f = oracle::random_field(20, 24, rng);
  CHECK(nearest_regrid(f, f.grid()) == f);
  CHECK(nearest_regrid(nearest_regrid(f, f.grid()), f.grid()) == f);

  const Field2D c = Field2D::filled(f.grid(), 7.0);
  const GridSpec coarse{5, 6, 54.9, 5.1, -0.9, 0.9, 90.0};
  CHECK(nearest_regrid(c, coarse) == Field2D::filled(coarse, 7.0));

  SUBCASE("0.25 degree source onto a 0.22 degree 34x42 target") {
    const GridSpec src{40, 48, 56.0, 3.0, -0.25, 0.25, 25.0};
    const Field2D s = oracle::random_field(40, 48, rng);
    const Field2D sg(src, {s.values().begin(), s.values().end()});
    const GridSpec target{34, 42, 55.5, 3.5, -0.22, 0.22, 24.0};
    const Field2D out = nearest_regrid(sg, target);
    const std::set<double> members(sg.values().begin(), sg.values().end());
    for (double x : out.values()) CHECK(members.count(x) == 1);
    // independent check of the chosen cell for a few targets
    for (std::size_t i : {0u, 17u, 33u})
      for (std::size_t j : {0u, 20u, 41u}) {
        const double lat = target.lat_at(i), lon = target.lon_at(j);
        std::size_t bi = 0, bj = 0;
        double best = 1e9;
        for (std::size_t a = 0; a < src.rows; ++a)
          if (std::abs(src.lat_at(a) - lat) < best) best = std::abs(src.lat_at(a) - lat), bi = a;
        best = 1e9;
        for (std::size_t b = 0; b < src.cols; ++b)
          if (std::abs(src.lon_at(b) - lon) < best) best = std::abs(src.lon_at(b) - lon), bj = b;
        CHECK(out(i, j) == sg(bi, bj));
      }
  }

  const GridSpec outside{4, 4, 60.0, 5.0, -0.25, 0.25, 25.0};
  CHECK(code_of([&] { nearest_regrid(f, outside); }) == "target-not-covered");
}

TEST_CASE("bicubic reproduces constants, ramps and source samples") {
  const Field2D c = Field2D::filled(oracle::grid(8, 8), 3.25);
  const Field2D uc = bicubic_upsample(c, ResampleFactor(4));
  CHECK(uc.rows() == 32);
  CHECK(max_abs_diff(uc, Field2D::filled(uc.grid(), 3.25)) < 1e-12);

  const Field2D ramp = oracle::field_from(8, 8, [](auto i, auto j) { return 0.5 * i - 0.25 * j + 1.0; });
  const Field2D ur = bicubic_upsample(ramp, ResampleFactor(4));
  // interior: all four taps inside the source
  for (std::size_t p = 4; p < 24; ++p)
    for (std::size_t q = 4; q < 24; ++q)
      CHECK(ur(p, q) == doctest::Approx(0.5 * (p / 4.0) - 0.25 * (q / 4.0) + 1.0).epsilon(1e-12));

  std::mt19937_64 rng(8);
  const Field2D r = oracle::random_field(8, 8, rng);
  const Field2D u = bicubic_upsample(r, ResampleFactor(4));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(u(4 * i, 4 * j) - r(i, j)) < 1e-6);
  CHECK(decimate(u, ResampleFactor(4)) == r);
}

TEST_CASE("bilinear") {
  const Field2D c = Field2D::filled(oracle::grid(34, 42), -1.5);
  const Field2D uc = bilinear_upsample(c, ResampleFactor(4));
  CHECK(uc.rows() == 136);
  CHECK(uc.cols() == 168);
  CHECK(max_abs_diff(uc, Field2D::filled(uc.grid(), -1.5)) < 1e-12);

  std::mt19937_64 rng(12);
  const Field2D r = oracle::random_field(6, 6, rng);
  const Field2D u = bilinear_upsample(r, ResampleFactor(4));
  CHECK(std::abs(u(2, 0) - 0.5 * (r(0, 0) + r(1, 0))) < 1e-6);
  CHECK(std::abs(u(8, 10) - 0.5 * (r(2, 2) + r(2, 3))) < 1e-6);
  CHECK(decimate(u, ResampleFactor(4)) == r);
}

TEST_CASE("upsamplers are linear") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const Field2D f = oracle::random_field(7, 9, rng, -3, 3), g = oracle::random_field(7, 9, rng, -3, 3);
    const double a = std::uniform_real_distribution<>(-2, 2)(rng), b = std::uniform_real_distribution<>(-2, 2)(rng);
    for (auto up : {&bicubic_upsample, &bilinear_upsample}) {
      const Field2D lhs = up(combine(a, f, b, g), ResampleFactor(3));
      const Field2D rhs = combine(a, up(f, ResampleFactor(3)), b, up(g, ResampleFactor(3)));
      CHECK(max_abs_diff(lhs, rhs) < 1e-6);
    }
  }
}

TEST_CASE("range behaviour") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 20; ++t) {
    const Field2D f = oracle::random_field(8, 8, rng);
    const auto [lo, hi] = std::ranges::minmax(f.values());
    const Field2D bl = bilinear_upsample(f, ResampleFactor(4));
    const auto [blo, bhi] = std::ranges::minmax(bl.values());
    CHECK(blo >= lo);
    CHECK(bhi <= hi);

    // bicubic overshoot relative to the 4x4 source neighbourhood
    const Field2D bc = bicubic_upsample(f, ResampleFactor(4));
    for (std::size_t p = 0; p < 32; ++p)
      for (std::size_t q = 0; q < 32; ++q) {
        double nlo = 1e9, nhi = -1e9;
        for (int di = -1; di <= 2; ++di)
          for (int dj = -1; dj <= 2; ++dj) {
            const auto i = static_cast<std::size_t>(std::clamp<int>(static_cast<int>(p / 4) + di, 0, 7));
            const auto j = static_cast<std::size_t>(std::clamp<int>(static_cast<int>(q / 4) + dj, 0, 7));
            nlo = std::min(nlo, f(i, j));
            nhi = std::max(nhi, f(i, j));
          }
        const double over = std::max(bc(p, q) - nhi, nlo - bc(p, q));
        CHECK(over <= 0.25 * (nhi - nlo) + 1e-12);
      }
  }
}

TEST_CASE("nearest upsample replicates cells") {
  const Field2D f = oracle::field_from(4, 4, [](auto i, auto j) { return static_cast<double>(10 * i + j); });
  const Field2D u = nearest_upsample(f, ResampleFactor(4));
  CHECK(u(0, 0) == 0.0);
  CHECK(u(2, 2) == 0.0);  // tie at half way goes to the lower index
  CHECK(u(3, 3) == 11.0);
  CHECK(u(15, 15) == 33.0);
}

TEST_CASE("series kernels: parallel matches serial") {
  std::vector<VelocitySample> samples;
  std::mt19937_64 rng(41);
  for (int i = 0; i < 16; ++i)
    samples.emplace_back(oracle::random_field(8, 8, rng), oracle::random_field(8, 8, rng), 3600 * i);
  const FieldSeries s(std::move(samples), 3600);
  for (auto op : {ResampleOp::bicubic, ResampleOp::bilinear, ResampleOp::nearest})
    CHECK(resample(s, op, ResampleFactor(4), Execution::parallel) ==
          resample(s, op, ResampleFactor(4), Execution::serial));
}
