#include "windeval/wind_power.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "windeval/error.hpp"

namespace windeval {

using nlohmann::json;

void PowerCurve::validate() const {
  if (points.empty()) fail("invalid-curve", "no table points");
  if (!(cut_in_ms >= 0.0) || !(cut_out_ms > cut_in_ms)) fail("invalid-curve", "need 0 <= cut_in < cut_out");
  if (!(rated_power_kw > 0.0)) fail("invalid-curve", "rated power must be positive");
  double max_power = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CurvePoint& p = points[i];
    if (!std::isfinite(p.speed_ms) || !std::isfinite(p.power_kw)) fail("invalid-curve", "non-finite table entry");
    if (p.power_kw < 0.0) fail("invalid-curve", "negative power");
    if (i > 0 && !(p.speed_ms > points[i - 1].speed_ms)) fail("invalid-curve", "speeds must strictly increase");
    max_power = std::max(max_power, p.power_kw);
  }
  if (max_power != rated_power_kw) fail("invalid-curve", "table maximum differs from rated power");
}

double PowerCurve::rated_speed_ms() const {
  for (const auto& p : points)
    if (p.power_kw == rated_power_kw) return p.speed_ms;
  fail("invalid-curve", "rated power never reached");
}

PowerCurve enercon_e92_2350() {
  PowerCurve c;
  c.name = "Enercon E92/2350";
  c.hub_height_m = 98.0;
  c.cut_in_ms = 2.0;
  c.cut_out_ms = 25.0;
  c.rated_power_kw = 2350.0;
  c.points = {{2.0, 3.6},     {3.0, 29.9},    {4.0, 98.2},    {5.0, 208.3},   {6.0, 384.3},
              {7.0, 637.0},   {8.0, 975.8},   {9.0, 1403.6},  {10.0, 1817.8}, {11.0, 2088.7},
              {12.0, 2237.0}, {13.0, 2300.0}, {14.0, 2350.0}, {25.0, 2350.0}};
  c.validate();
  return c;
}

PowerCurve parse_power_curve(const std::string& text) {
  PowerCurve c;
  try {
    const json j = json::parse(text);
    c.name = j.at("name").get<std::string>();
    c.hub_height_m = j.at("hub_height_m").get<double>();
    c.cut_in_ms = j.at("cut_in_ms").get<double>();
    c.cut_out_ms = j.at("cut_out_ms").get<double>();
    c.rated_power_kw = j.at("rated_power_kw").get<double>();
    for (const json& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) fail("invalid-curve", "points must be [speed, kw] pairs");
      c.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  } catch (const json::exception& e) {
    fail("invalid-curve", e.what());
  }
  c.validate();
  return c;
}

PowerCurve load_power_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open power curve " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_power_curve(ss.str());
}

std::string power_curve_to_json(const PowerCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) pts.push_back({p.speed_ms, p.power_kw});
  const json j = {{"name", c.name},
                  {"hub_height_m", c.hub_height_m},
                  {"cut_in_ms", c.cut_in_ms},
                  {"cut_out_ms", c.cut_out_ms},
                  {"rated_power_kw", c.rated_power_kw},
                  {"points", pts}};
  return j.dump(2);
}

double power_from_speed(double speed, const PowerCurve& c) {
  if (!(speed >= c.cut_in_ms) || speed >= c.cut_out_ms) return 0.0;
  const auto& pts = c.points;
  if (speed <= pts.front().speed_ms) return speed == pts.front().speed_ms ? pts.front().power_kw : 0.0;
  if (speed >= pts.back().speed_ms) return pts.back().power_kw;
  const auto hi = std::upper_bound(pts.begin(), pts.end(), speed,
                                   [](double s, const CurvePoint& p) { return s < p.speed_ms; });
  const auto lo = hi - 1;
  const double t = (speed - lo->speed_ms) / (hi->speed_ms - lo->speed_ms);
  return lo->power_kw + t * (hi->power_kw - lo->power_kw);
}

PowerSeries cumulative_power(const std::vector<SpeedPoint>& speeds, const PowerCurve& curve, double dt_hours) {
  if (!(dt_hours > 0.0)) fail("invalid-series", "dt must be positive");
  PowerSeries out;
  out.timestamps.reserve(speeds.size());
  out.power_kw.reserve(speeds.size());
  out.cumulative_kwh.reserve(speeds.size());
  double total = 0.0;
  for (const auto& s : speeds) {
    const double p = power_from_speed(s.speed_ms, curve);
    total += p * dt_hours;
    out.timestamps.push_back(s.timestamp);
    out.power_kw.push_back(p);
    out.cumulative_kwh.push_back(total);
  }
  return out;
}

std::vector<double> power_difference(const PowerSeries& pred, const PowerSeries& ref) {
  if (pred.timestamps != ref.timestamps) fail("time-misalignment");
  std::vector<double> out(pred.cumulative_kwh.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pred.cumulative_kwh[i] - ref.cumulative_kwh[i];
  return out;
}

void write_power_series_csv(const std::filesystem::path& path, const PowerSeries& series) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_io("cannot write " + path.string());
  os << "timestamp,power_kw,cumulative_kwh\n";
  char buf[96];
  for (std::size_t i = 0; i < series.timestamps.size(); ++i) {
    std::snprintf(buf, sizeof buf, ",%.9g,%.12g\n", series.power_kw[i], series.cumulative_kwh[i]);
    os << series.timestamps[i] << buf;
  }
}

}  // namespace windeval
