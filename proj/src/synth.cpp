#include "windeval/synth.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "windeval/error.hpp"
#include "windeval/fft.hpp"
#include "windeval/spectral.hpp"

namespace windeval {

void SynthConfig::validate() const {
  if (slope > 0.0 || !std::isfinite(slope)) fail("invalid-config", "spectral slope must be <= 0");
  if (count < 1) fail("invalid-config", "count must be at least 1");
  if (!(u_std > 0.0) || !(v_std > 0.0)) fail("invalid-config", "channel deviations must be positive");
  grid().validate();
}

GridSpec SynthConfig::grid() const {
  return GridSpec{rows, cols, lat_origin, lon_origin, lat_step, lon_step, spacing_km};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Field2D gaussian_random_field(const GridSpec& grid, double slope, std::uint64_t stream_seed) {
  const std::size_t m = grid.rows, n = grid.cols;
  std::mt19937_64 rng(stream_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> buf(m * n);
  for (auto& c : buf) c = normal(rng);

  fft2d(buf, m, n);
  // Amplitude k^(slope/2) gives power k^slope; the filter is even in (kx, ky)
  // so the inverse transform stays real.
  for (std::size_t i = 0; i < m; ++i) {
    const double kx = static_cast<double>(signed_frequency(i, m));
    for (std::size_t j = 0; j < n; ++j) {
      const double ky = static_cast<double>(signed_frequency(j, n));
      const double k = std::sqrt(kx * kx + ky * ky);
      buf[i * n + j] *= k == 0.0 ? 0.0 : std::pow(k, slope / 2.0);
    }
  }
  fft2d(buf, m, n, /*inverse=*/true);

  std::vector<double> out(m * n);
  double mean = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = buf[i].real();
    mean += out[i];
  }
  mean /= static_cast<double>(out.size());
  double ss = 0.0;
  for (double& x : out) {
    x -= mean;
    ss += x * x;
  }
  const double sd = std::sqrt(ss / static_cast<double>(out.size()));
  if (!(sd > 0.0)) fail("degenerate-field", "generated field has zero variance");
  for (double& x : out) x /= sd;
  return Field2D(grid, std::move(out));
}

FieldSeries synth_grf(const SynthConfig& cfg, Execution exec) {
  cfg.validate();
  const GridSpec grid = cfg.grid();
  std::vector<VelocitySample> samples(cfg.count);
  for_each_index(exec, cfg.count, [&](std::size_t i) {
    const Field2D gu = gaussian_random_field(grid, cfg.slope, derive_seed(cfg.seed, 2 * i));
    const Field2D gv = gaussian_random_field(grid, cfg.slope, derive_seed(cfg.seed, 2 * i + 1));
    std::vector<double> u(gu.values().begin(), gu.values().end());
    std::vector<double> v(gv.values().begin(), gv.values().end());
    for (double& x : u) x = cfg.u_mean + cfg.u_std * x;
    for (double& x : v) x = cfg.v_mean + cfg.v_std * x;
    samples[i] = VelocitySample(Field2D(grid, std::move(u)), Field2D(grid, std::move(v)),
                                cfg.start_timestamp + static_cast<std::int64_t>(i) * cfg.dt_seconds);
  });
  return FieldSeries(std::move(samples), cfg.dt_seconds);
}

}  // namespace windeval
