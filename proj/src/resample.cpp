#include "windeval/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "windeval/error.hpp"

namespace windeval {

ResampleFactor::ResampleFactor(std::size_t f) : value(f) {
  if (f < 2) fail("invalid-factor", "resample factor must be at least 2");
}

GridSpec decimate_grid(const GridSpec& grid, ResampleFactor factor) {
  const std::size_t f = factor.value;
  if (grid.rows % f != 0 || grid.cols % f != 0) fail("non-divisible-decimation");
  GridSpec g = grid;
  g.rows /= f;
  g.cols /= f;
  g.lat_step *= static_cast<double>(f);
  g.lon_step *= static_cast<double>(f);
  g.spacing_km *= static_cast<double>(f);
  g.validate();
  return g;
}

GridSpec upsample_grid(const GridSpec& grid, ResampleFactor factor) {
  const std::size_t f = factor.value;
  GridSpec g = grid;
  g.rows *= f;
  g.cols *= f;
  g.lat_step /= static_cast<double>(f);
  g.lon_step /= static_cast<double>(f);
  g.spacing_km /= static_cast<double>(f);
  return g;
}

Field2D decimate(const Field2D& field, ResampleFactor factor) {
  const GridSpec g = decimate_grid(field.grid(), factor);
  const std::size_t f = factor.value;
  std::vector<double> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j) out.push_back(field(i * f, j * f));
  return Field2D(g, std::move(out));
}

Field2D nearest_regrid(const Field2D& field, const GridSpec& target) {
  target.validate();
  const GridSpec& src = field.grid();
  constexpr double slack = 1e-9;

  auto axis_map = [&](std::size_t count, double t_origin, double t_step, double s_origin, double s_step,
                      std::size_t s_count) {
    std::vector<std::size_t> idx(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double pos = (t_origin + static_cast<double>(k) * t_step - s_origin) / s_step;
      if (pos < -0.5 - slack || pos > static_cast<double>(s_count) - 0.5 + slack) fail("target-not-covered");
      const double base = std::floor(pos);
      auto i = static_cast<std::ptrdiff_t>(base);
      if (pos - base > 0.5) ++i;
      idx[k] = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(s_count) - 1));
    }
    return idx;
  };
  const auto rows = axis_map(target.rows, target.lat_origin, target.lat_step, src.lat_origin, src.lat_step, src.rows);
  const auto cols = axis_map(target.cols, target.lon_origin, target.lon_step, src.lon_origin, src.lon_step, src.cols);

  std::vector<double> out;
  out.reserve(target.size());
  for (std::size_t r : rows)
    for (std::size_t c : cols) out.push_back(field(r, c));
  return Field2D(target, std::move(out));
}

namespace {

// One output coordinate expressed as up to four source taps.
struct Taps {
  std::array<std::size_t, 4> index{};
  std::array<double, 4> weight{};
  int count = 0;
};

double keys_cubic(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

enum class Kernel { cubic, linear, nearest };

std::vector<Taps> axis_taps(std::size_t n_src, std::size_t f, Kernel kernel) {
  std::vector<Taps> taps(n_src * f);
  for (std::size_t p = 0; p < taps.size(); ++p) {
    const auto base = static_cast<std::ptrdiff_t>(p / f);
    const std::size_t rem = p % f;
    const double t = static_cast<double>(rem) / static_cast<double>(f);
    Taps& tp = taps[p];
    switch (kernel) {
      case Kernel::cubic:
        if (rem == 0) {
          tp.index[0] = clamp_index(base, n_src);
          tp.weight[0] = 1.0;
          tp.count = 1;
          break;
        }
        for (int m = -1; m <= 2; ++m) {
          tp.index[m + 1] = clamp_index(base + m, n_src);
          tp.weight[m + 1] = keys_cubic(t - m);
        }
        tp.count = 4;
        break;
      case Kernel::linear:
        tp.index[0] = clamp_index(base, n_src);
        tp.index[1] = clamp_index(base + 1, n_src);
        tp.weight[0] = 1.0 - t;
        tp.weight[1] = t;
        tp.count = rem == 0 ? 1 : 2;
        break;
      case Kernel::nearest:
        tp.index[0] = clamp_index(2 * rem > f ? base + 1 : base, n_src);
        tp.weight[0] = 1.0;
        tp.count = 1;
        break;
    }
  }
  return taps;
}

// Separable: interpolate along columns first, then along rows.
Field2D separable_upsample(const Field2D& field, ResampleFactor factor, Kernel kernel) {
  const std::size_t f = factor.value;
  const GridSpec out_grid = upsample_grid(field.grid(), factor);
  const auto row_taps = axis_taps(field.rows(), f, kernel);
  const auto col_taps = axis_taps(field.cols(), f, kernel);

  std::vector<double> tmp(field.rows() * out_grid.cols);
  for (std::size_t i = 0; i < field.rows(); ++i)
    for (std::size_t q = 0; q < out_grid.cols; ++q) {
      const Taps& tp = col_taps[q];
      double acc = 0.0;
      for (int k = 0; k < tp.count; ++k) acc += tp.weight[k] * field(i, tp.index[k]);
      tmp[i * out_grid.cols + q] = acc;
    }

  std::vector<double> out(out_grid.size());
  for (std::size_t p = 0; p < out_grid.rows; ++p) {
    const Taps& tp = row_taps[p];
    for (std::size_t q = 0; q < out_grid.cols; ++q) {
      double acc = 0.0;
      for (int k = 0; k < tp.count; ++k) acc += tp.weight[k] * tmp[tp.index[k] * out_grid.cols + q];
      out[p * out_grid.cols + q] = acc;
    }
  }
  return Field2D(out_grid, std::move(out));
}

}  // namespace

Field2D bicubic_upsample(const Field2D& field, ResampleFactor factor) {
  return separable_upsample(field, factor, Kernel::cubic);
}

Field2D bilinear_upsample(const Field2D& field, ResampleFactor factor) {
  return separable_upsample(field, factor, Kernel::linear);
}

Field2D nearest_upsample(const Field2D& field, ResampleFactor factor) {
  return separable_upsample(field, factor, Kernel::nearest);
}

namespace {

Field2D apply(const Field2D& f, ResampleOp op, ResampleFactor factor) {
  switch (op) {
    case ResampleOp::decimate: return decimate(f, factor);
    case ResampleOp::bicubic: return bicubic_upsample(f, factor);
    case ResampleOp::bilinear: return bilinear_upsample(f, factor);
    case ResampleOp::nearest: return nearest_upsample(f, factor);
  }
  fail("invalid-op");
}

}  // namespace

VelocitySample resample(const VelocitySample& sample, ResampleOp op, ResampleFactor factor) {
  return VelocitySample(apply(sample.u, op, factor), apply(sample.v, op, factor), sample.timestamp);
}

VelocitySample regrid(const VelocitySample& sample, const GridSpec& target) {
  return VelocitySample(nearest_regrid(sample.u, target), nearest_regrid(sample.v, target), sample.timestamp);
}

namespace {

template <typename Fn>
FieldSeries map_series(const FieldSeries& series, Execution exec, Fn&& fn) {
  std::vector<VelocitySample> out(series.size());
  for_each_index(exec, series.size(), [&](std::size_t i) { out[i] = fn(series.samples()[i]); });
  return FieldSeries(std::move(out), series.dt());
}

}  // namespace

FieldSeries resample(const FieldSeries& series, ResampleOp op, ResampleFactor factor, Execution exec) {
  return map_series(series, exec, [&](const VelocitySample& s) { return resample(s, op, factor); });
}

FieldSeries regrid(const FieldSeries& series, const GridSpec& target, Execution exec) {
  return map_series(series, exec, [&](const VelocitySample& s) { return regrid(s, target); });
}

}  // namespace windeval
