#include <doctest.h>

#include <cmath>

#include <filesystem>
#include <fstream>

#include "windeval/error.hpp"
#include "windeval/wind_power.hpp"

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

std::vector<SpeedPoint> constant_wind(double speed, std::size_t steps) {
  std::vector<SpeedPoint> s;
  for (std::size_t i = 0; i < steps; ++i) s.push_back({static_cast<std::int64_t>(3600 * i), speed});
  return s;
}

}  // namespace

TEST_CASE("shipped power curve file") {
  const PowerCurve c = load_power_curve(WINDEVAL_DATA_DIR "/enercon_e92_2350.json");
  CHECK(c.rated_power_kw == 2350.0);
  CHECK(c.name == "Enercon E92/2350");
  CHECK(c.hub_height_m == 98.0);
  const PowerCurve builtin = enercon_e92_2350();
  CHECK(c.points.size() == builtin.points.size());
  for (double v = 0.0; v < 30.0; v += 0.37) CHECK(power_from_speed(v, c) == power_from_speed(v, builtin));
  CHECK(parse_power_curve(power_curve_to_json(c)).points.size() == c.points.size());
}

TEST_CASE("invalid curves") {
  CHECK(code_of([] { parse_power_curve(""); }) == "invalid-curve");
  CHECK(code_of([] {
          parse_power_curve(R"({"name":"x","hub_height_m":1,"cut_in_ms":1,"cut_out_ms":20,)"
                            R"("rated_power_kw":10,"points":[[3,5],[2,10]]})");
        }) == "invalid-curve");
  CHECK(code_of([] {
          parse_power_curve(R"({"name":"x","hub_height_m":1,"cut_in_ms":1,"cut_out_ms":20,)"
                            R"("rated_power_kw":10,"points":[[2,-1],[3,10]]})");
        }) == "invalid-curve");
  CHECK(code_of([] { load_power_curve("/nonexistent/curve.json"); }) == "io");
}

TEST_CASE("power from speed") {
  const PowerCurve c = enercon_e92_2350();
  CHECK(power_from_speed(0.0, c) == 0.0);
  CHECK(power_from_speed(1.99, c) == 0.0);
  CHECK(power_from_speed(26.0, c) == 0.0);
  CHECK(power_from_speed(25.0, c) == 0.0);
  CHECK(power_from_speed(24.99, c) == 2350.0);
  CHECK(power_from_speed(15.0, c) == 2350.0);
  CHECK(power_from_speed(c.rated_speed_ms(), c) == 2350.0);
  CHECK(power_from_speed(7.5, c) == doctest::Approx((637.0 + 975.8) / 2));

  double prev = 0.0;
  for (double v = c.cut_in_ms; v <= c.rated_speed_ms(); v += 0.01) {
    const double p = power_from_speed(v, c);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("cumulative power") {
  const PowerCurve c = enercon_e92_2350();
  const PowerSeries rated = cumulative_power(constant_wind(15.0, 24), c, 1.0);
  CHECK(rated.cumulative_kwh.back() == 56400.0);
  for (std::size_t i = 1; i < 24; ++i) {
    CHECK(rated.cumulative_kwh[i] >= rated.cumulative_kwh[i - 1]);
    CHECK(rated.cumulative_kwh[i] == rated.cumulative_kwh[i - 1] + rated.power_kw[i]);
  }
  const PowerSeries calm = cumulative_power(constant_wind(1.0, 24), c, 1.0);
  for (double x : calm.cumulative_kwh) CHECK(x == 0.0);

  SUBCASE("splitting the series") {
    std::vector<SpeedPoint> s;
    for (int i = 0; i < 8760; ++i) s.push_back({3600LL * i, 12.0 * (1.0 + std::sin(i * 0.01))});
    const double whole = cumulative_power(s, c, 1.0).cumulative_kwh.back();
    const std::vector<SpeedPoint> a(s.begin(), s.begin() + 4000), b(s.begin() + 4000, s.end());
    const double parts = cumulative_power(a, c, 1.0).cumulative_kwh.back() + cumulative_power(b, c, 1.0).cumulative_kwh.back();
    CHECK(std::abs(whole - parts) <= 1e-9 * whole);
    CHECK(cumulative_power(s, c, 1.0).timestamps.size() == 8760);
  }
}

TEST_CASE("power difference") {
  const PowerCurve c = enercon_e92_2350();
  const PowerSeries ref = cumulative_power(constant_wind(8.0, 10), c, 1.0);
  for (double d : power_difference(ref, ref)) CHECK(d == 0.0);

  PowerSeries pred = ref;
  double total = 0.0;
  for (std::size_t i = 0; i < pred.power_kw.size(); ++i) {
    pred.power_kw[i] += 10.0;
    total += pred.power_kw[i];
    pred.cumulative_kwh[i] = total;
  }
  const auto diff = power_difference(pred, ref);
  for (std::size_t i = 0; i < diff.size(); ++i) CHECK(diff[i] == doctest::Approx(10.0 * (i + 1)));

  PowerSeries shifted = ref;
  shifted.timestamps[3] += 1;
  CHECK(code_of([&] { power_difference(shifted, ref); }) == "time-misalignment");
}

TEST_CASE("power of the mean speed differs from the mean power") {
  const PowerCurve c = enercon_e92_2350();
  const double mean_power = 0.5 * (power_from_speed(5.0, c) + power_from_speed(9.0, c));
  const double power_of_mean = power_from_speed(7.0, c);
  CHECK(mean_power - power_of_mean > 100.0);
}
