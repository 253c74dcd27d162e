#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace windeval {

// Regular lat/lon lattice. Cell (i, j) is centred at
// (lat_origin + i * lat_step, lon_origin + j * lon_step).
struct GridSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double lat_origin = 0.0;
  double lon_origin = 0.0;
  double lat_step = 0.0;
  double lon_step = 0.0;
  double spacing_km = 0.0;  // s in the radial wavelength s / k

  void validate() const;
  std::size_t size() const noexcept { return rows * cols; }
  double lat_at(std::size_t i) const noexcept { return lat_origin + static_cast<double>(i) * lat_step; }
  double lon_at(std::size_t j) const noexcept { return lon_origin + static_cast<double>(j) * lon_step; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class Field2D {
 public:
  Field2D() = default;
  Field2D(GridSpec grid, std::vector<double> values);
  static Field2D filled(const GridSpec& grid, double value);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t rows() const noexcept { return grid_.rows; }
  std::size_t cols() const noexcept { return grid_.cols; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * grid_.cols + j]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Field2D&, const Field2D&) = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

struct VelocitySample {
  Field2D u;
  Field2D v;
  std::int64_t timestamp = 0;

  VelocitySample() = default;
  VelocitySample(Field2D u_, Field2D v_, std::int64_t ts);
  const GridSpec& grid() const noexcept { return u.grid(); }

  friend bool operator==(const VelocitySample&, const VelocitySample&) = default;
};

class FieldSeries {
 public:
  FieldSeries() = default;
  FieldSeries(std::vector<VelocitySample> samples, std::int64_t dt_seconds);

  const std::vector<VelocitySample>& samples() const noexcept { return samples_; }
  std::int64_t dt() const noexcept { return dt_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const GridSpec& grid() const;

  friend bool operator==(const FieldSeries&, const FieldSeries&) = default;

 private:
  std::vector<VelocitySample> samples_;
  std::int64_t dt_ = 0;
};

// Min-max range per channel plus the mean of the [0,1]-scaled training
// values, which normalize() subtracts.
struct NormStats {
  double u_min = 0.0, u_max = 1.0;
  double v_min = 0.0, v_max = 1.0;
  double u_mean = 0.0, v_mean = 0.0;

  void validate() const;
  friend bool operator==(const NormStats&, const NormStats&) = default;
};

NormStats compute_stats(const FieldSeries& training);
FieldSeries normalize(const FieldSeries& series, const NormStats& stats);
FieldSeries denormalize(const FieldSeries& series, const NormStats& stats);
VelocitySample normalize(const VelocitySample& sample, const NormStats& stats);

Field2D wind_speed(const VelocitySample& sample);

struct CellIndex {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Nearest cell centre on the planar lat/lon lattice, ties toward the lower
// index. Throws "point-outside-grid" outside the box spanned by the centres.
CellIndex nearest_cell(const GridSpec& grid, double lat, double lon);

struct SpeedPoint {
  std::int64_t timestamp = 0;
  double speed_ms = 0.0;
  friend bool operator==(const SpeedPoint&, const SpeedPoint&) = default;
};

std::vector<SpeedPoint> extract_point_series(const FieldSeries& series, double lat, double lon);

Field2D extract_patch(const Field2D& field, std::size_t row0, std::size_t col0, std::size_t height,
                      std::size_t width);
VelocitySample extract_patch(const VelocitySample& sample, std::size_t row0, std::size_t col0,
                             std::size_t height, std::size_t width);
FieldSeries extract_patch(const FieldSeries& series, std::size_t row0, std::size_t col0, std::size_t height,
                          std::size_t width);

}  // namespace windeval
