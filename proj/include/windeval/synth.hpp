#pragma once

#include <cstddef>
#include <cstdint>

#include "windeval/grid.hpp"
#include "windeval/parallel.hpp"

namespace windeval {

// Gaussian random fields whose radial power spectrum follows k^slope. Each
// channel is rescaled to the requested mean and standard deviation (m/s).
struct SynthConfig {
  std::size_t rows = 32;
  std::size_t cols = 32;
  double slope = -3.0;
  std::uint64_t seed = 0;
  std::size_t count = 1;

  std::int64_t dt_seconds = 3600;
  std::int64_t start_timestamp = 1577836800;  // 2020-01-01T00:00:00Z
  double lat_origin = 55.0;
  double lon_origin = 5.0;
  double lat_step = -0.25;
  double lon_step = 0.25;
  double spacing_km = 25.0;
  double u_mean = 2.0, u_std = 4.0;
  double v_mean = 1.0, v_std = 4.0;

  void validate() const;
  GridSpec grid() const;
};

// Zero-mean, unit-variance field from the stream identified by `stream_seed`.
Field2D gaussian_random_field(const GridSpec& grid, double slope, std::uint64_t stream_seed);

// Per-field seeds are derived from cfg.seed, so the result does not depend
// on the execution policy.
FieldSeries synth_grf(const SynthConfig& cfg, Execution exec = Execution::parallel);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace windeval
