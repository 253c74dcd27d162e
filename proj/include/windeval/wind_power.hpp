#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "windeval/grid.hpp"

namespace windeval {

struct CurvePoint {
  double speed_ms = 0.0;
  double power_kw = 0.0;
};

// Speed -> power table. Power is linear between table points, zero below
// cut-in and at or above cut-out, and holds the last table value between the
// final point and cut-out.
struct PowerCurve {
  std::string name;
  double hub_height_m = 0.0;
  double cut_in_ms = 0.0;
  double cut_out_ms = 0.0;
  double rated_power_kw = 0.0;
  std::vector<CurvePoint> points;

  void validate() const;
  // Lowest table speed reaching rated power.
  double rated_speed_ms() const;
};

// Enercon E-92 (2350 kW) at 98 m hub height, standard air density.
PowerCurve enercon_e92_2350();

PowerCurve load_power_curve(const std::filesystem::path& path);
PowerCurve parse_power_curve(const std::string& json_text);
std::string power_curve_to_json(const PowerCurve& curve);

double power_from_speed(double speed_ms, const PowerCurve& curve);

struct PowerSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> power_kw;
  std::vector<double> cumulative_kwh;
};

PowerSeries cumulative_power(const std::vector<SpeedPoint>& speeds, const PowerCurve& curve, double dt_hours);

// Running difference of cumulative energy, pred minus ref.
std::vector<double> power_difference(const PowerSeries& pred, const PowerSeries& ref);

void write_power_series_csv(const std::filesystem::path& path, const PowerSeries& series);

}  // namespace windeval
