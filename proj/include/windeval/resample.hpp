#pragma once

#include <cstddef>

#include "windeval/grid.hpp"
#include "windeval/parallel.hpp"

namespace windeval {

struct ResampleFactor {
  std::size_t value = 4;

  explicit ResampleFactor(std::size_t f = 4);
};

// Output position p maps to source coordinate p / factor on both axes, so
// decimate() keeps exactly the lattice on which the upsamplers reproduce the
// source values.
Field2D decimate(const Field2D& field, ResampleFactor factor);
GridSpec decimate_grid(const GridSpec& grid, ResampleFactor factor);
GridSpec upsample_grid(const GridSpec& grid, ResampleFactor factor);

// Nearest source cell centre for every target cell; the target must lie
// within the source coverage (centres +- half a cell).
Field2D nearest_regrid(const Field2D& field, const GridSpec& target);

// Keys cubic convolution, a = -0.5, clamp-replicated borders.
Field2D bicubic_upsample(const Field2D& field, ResampleFactor factor);
Field2D bilinear_upsample(const Field2D& field, ResampleFactor factor);
// Pixel replication with ties toward the lower source index.
Field2D nearest_upsample(const Field2D& field, ResampleFactor factor);

enum class ResampleOp { decimate, bicubic, bilinear, nearest };

VelocitySample resample(const VelocitySample& sample, ResampleOp op, ResampleFactor factor);
VelocitySample regrid(const VelocitySample& sample, const GridSpec& target);

// Whole-series kernels, parallel over samples.
FieldSeries resample(const FieldSeries& series, ResampleOp op, ResampleFactor factor,
                     Execution exec = Execution::parallel);
FieldSeries regrid(const FieldSeries& series, const GridSpec& target, Execution exec = Execution::parallel);

}  // namespace windeval
