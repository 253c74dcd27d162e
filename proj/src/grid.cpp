#include "windeval/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "windeval/error.hpp"

namespace windeval {

void GridSpec::validate() const {
  if (rows < 2 || cols < 2) fail("invalid-grid", "grid needs at least 2x2 cells");
  if (lat_step == 0.0 || lon_step == 0.0 || !std::isfinite(lat_step) || !std::isfinite(lon_step))
    fail("invalid-grid", "lat/lon steps must be finite and non-zero");
  if (!(spacing_km > 0.0) || !std::isfinite(spacing_km)) fail("invalid-grid", "spacing must be positive");
  if (!std::isfinite(lat_origin) || !std::isfinite(lon_origin)) fail("invalid-grid", "origin must be finite");
}

Field2D::Field2D(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size())
    fail("shape-mismatch", std::to_string(values_.size()) + " values for a " + std::to_string(grid_.rows) + "x" +
                               std::to_string(grid_.cols) + " grid");
  for (double x : values_)
    if (!std::isfinite(x)) fail("non-finite-value");
}

Field2D Field2D::filled(const GridSpec& grid, double value) {
  return Field2D(grid, std::vector<double>(grid.size(), value));
}

VelocitySample::VelocitySample(Field2D u_, Field2D v_, std::int64_t ts)
    : u(std::move(u_)), v(std::move(v_)), timestamp(ts) {
  if (!(u.grid() == v.grid())) fail("shape-mismatch", "u and v grids differ");
}

FieldSeries::FieldSeries(std::vector<VelocitySample> samples, std::int64_t dt_seconds)
    : samples_(std::move(samples)), dt_(dt_seconds) {
  if (dt_ <= 0) fail("invalid-series", "dt must be positive");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].grid() == samples_[0].grid())) fail("shape-mismatch", "samples use different grids");
    if (samples_[i].timestamp - samples_[i - 1].timestamp != dt_)
      fail("time-misalignment", "timestamps are not uniformly spaced by dt");
  }
}

const GridSpec& FieldSeries::grid() const {
  if (samples_.empty()) fail("empty-series");
  return samples_.front().grid();
}

void NormStats::validate() const {
  if (!(u_min < u_max) || !(v_min < v_max)) fail("degenerate-range", "min must be below max");
  if (u_mean < 0.0 || u_mean > 1.0 || v_mean < 0.0 || v_mean > 1.0)
    fail("invalid-stats", "scaled means must lie in [0, 1]");
}

NormStats compute_stats(const FieldSeries& training) {
  if (training.empty()) fail("empty-training-set");

  NormStats s;
  s.u_min = s.v_min = std::numeric_limits<double>::infinity();
  s.u_max = s.v_max = -std::numeric_limits<double>::infinity();
  for (const auto& smp : training.samples()) {
    const auto [umin, umax] = std::ranges::minmax(smp.u.values());
    const auto [vmin, vmax] = std::ranges::minmax(smp.v.values());
    s.u_min = std::min(s.u_min, umin);
    s.u_max = std::max(s.u_max, umax);
    s.v_min = std::min(s.v_min, vmin);
    s.v_max = std::max(s.v_max, vmax);
  }
  if (!(s.u_min < s.u_max) || !(s.v_min < s.v_max)) fail("degenerate-range", "constant channel in training set");

  double usum = 0.0, vsum = 0.0;
  std::size_t n = 0;
  const double ur = s.u_max - s.u_min, vr = s.v_max - s.v_min;
  for (const auto& smp : training.samples()) {
    for (double x : smp.u.values()) usum += (x - s.u_min) / ur;
    for (double x : smp.v.values()) vsum += (x - s.v_min) / vr;
    n += smp.u.size();
  }
  s.u_mean = std::clamp(usum / static_cast<double>(n), 0.0, 1.0);
  s.v_mean = std::clamp(vsum / static_cast<double>(n), 0.0, 1.0);
  return s;
}

namespace {

Field2D scale_channel(const Field2D& f, double lo, double hi, double mean) {
  const double range = hi - lo;
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& x : out) x = (x - lo) / range - mean;
  return Field2D(f.grid(), std::move(out));
}

Field2D unscale_channel(const Field2D& f, double lo, double hi, double mean) {
  const double range = hi - lo;
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& x : out) x = (x + mean) * range + lo;
  return Field2D(f.grid(), std::move(out));
}

}  // namespace

VelocitySample normalize(const VelocitySample& sample, const NormStats& stats) {
  stats.validate();
  return VelocitySample(scale_channel(sample.u, stats.u_min, stats.u_max, stats.u_mean),
                        scale_channel(sample.v, stats.v_min, stats.v_max, stats.v_mean), sample.timestamp);
}

FieldSeries normalize(const FieldSeries& series, const NormStats& stats) {
  stats.validate();
  std::vector<VelocitySample> out;
  out.reserve(series.size());
  for (const auto& s : series.samples()) out.push_back(normalize(s, stats));
  return FieldSeries(std::move(out), series.dt());
}

FieldSeries denormalize(const FieldSeries& series, const NormStats& stats) {
  stats.validate();
  std::vector<VelocitySample> out;
  out.reserve(series.size());
  for (const auto& s : series.samples())
    out.emplace_back(unscale_channel(s.u, stats.u_min, stats.u_max, stats.u_mean),
                     unscale_channel(s.v, stats.v_min, stats.v_max, stats.v_mean), s.timestamp);
  return FieldSeries(std::move(out), series.dt());
}

Field2D wind_speed(const VelocitySample& sample) {
  const auto u = sample.u.values();
  const auto v = sample.v.values();
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::hypot(u[i], v[i]);
  return Field2D(sample.grid(), std::move(out));
}

namespace {

// Positions outside [0, count - 1] (beyond a rounding slack) are rejected.
std::size_t nearest_index(double coord, double origin, double step, std::size_t count) {
  const double pos = (coord - origin) / step;
  constexpr double slack = 1e-9;
  if (!(pos >= -slack) || !(pos <= static_cast<double>(count - 1) + slack)) fail("point-outside-grid");
  const double base = std::floor(pos);
  auto idx = static_cast<std::ptrdiff_t>(base);
  if (pos - base > 0.5) ++idx;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(count) - 1));
}

}  // namespace

CellIndex nearest_cell(const GridSpec& grid, double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) fail("point-outside-grid");
  return {nearest_index(lat, grid.lat_origin, grid.lat_step, grid.rows),
          nearest_index(lon, grid.lon_origin, grid.lon_step, grid.cols)};
}

std::vector<SpeedPoint> extract_point_series(const FieldSeries& series, double lat, double lon) {
  const CellIndex cell = nearest_cell(series.grid(), lat, lon);
  std::vector<SpeedPoint> out;
  out.reserve(series.size());
  for (const auto& s : series.samples())
    out.push_back({s.timestamp, std::hypot(s.u(cell.row, cell.col), s.v(cell.row, cell.col))});
  return out;
}

Field2D extract_patch(const Field2D& field, std::size_t row0, std::size_t col0, std::size_t height,
                      std::size_t width) {
  if (height == 0 || width == 0 || row0 + height > field.rows() || col0 + width > field.cols())
    fail("patch-out-of-bounds");
  GridSpec g = field.grid();
  g.rows = height;
  g.cols = width;
  g.lat_origin = field.grid().lat_at(row0);
  g.lon_origin = field.grid().lon_at(col0);

  std::vector<double> out;
  out.reserve(height * width);
  for (std::size_t i = 0; i < height; ++i)
    for (std::size_t j = 0; j < width; ++j) out.push_back(field(row0 + i, col0 + j));
  return Field2D(g, std::move(out));
}

VelocitySample extract_patch(const VelocitySample& sample, std::size_t row0, std::size_t col0, std::size_t height,
                             std::size_t width) {
  return VelocitySample(extract_patch(sample.u, row0, col0, height, width),
                        extract_patch(sample.v, row0, col0, height, width), sample.timestamp);
}

FieldSeries extract_patch(const FieldSeries& series, std::size_t row0, std::size_t col0, std::size_t height,
                          std::size_t width) {
  std::vector<VelocitySample> out;
  out.reserve(series.size());
  for (const auto& s : series.samples()) out.push_back(extract_patch(s, row0, col0, height, width));
  return FieldSeries(std::move(out), series.dt());
}

}  // namespace windeval
