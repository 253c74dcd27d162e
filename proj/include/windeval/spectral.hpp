#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "windeval/grid.hpp"

namespace windeval {

// |F(kx, ky)|^2 with the DFT scaled by 1/(m n); kx runs along rows, DC sits at
// (0, 0) and index a stands for the signed frequency a (or a - m past the
// midpoint).
struct Spectrum2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> power;

  double operator()(std::size_t i, std::size_t j) const noexcept { return power[i * cols + j]; }
};

// Signed frequency in [-n/2, n/2) for DFT index a.
long signed_frequency(std::size_t a, std::size_t n) noexcept;

Spectrum2D power_spectrum_2d(const Field2D& field);

// Radially averaged spectrum. Bin k holds the non-DC cells whose radius
// sqrt(kx^2 + ky^2) rounds to k, for k = 1 .. floor(min(m, n) / 2). On a
// non-square grid the corners beyond that radius are dropped
// (discarded_cells counts them).
struct Rapsd {
  std::vector<int> wavenumbers;
  std::vector<double> energies;
  std::vector<std::size_t> counts;
  std::vector<double> wavelengths_km;  // spacing / k
  std::size_t discarded_cells = 0;

  std::size_t k_max() const noexcept { return wavenumbers.size(); }
};

Rapsd rapsd(const Field2D& field);
Rapsd rapsd(const Spectrum2D& spectrum, double spacing_km);

// Element-wise mean of spectra that share the same bins.
Rapsd average_rapsd(const std::vector<Rapsd>& spectra);

enum class MelrMode { mean, sum };

struct MelrResult {
  double value = 0.0;
  std::size_t bins_used = 0;
  std::size_t bins_skipped = 0;  // either energy below the floor
};

inline constexpr double kEnergyFloor = 1e-20;

// Absolute log ratio of radial energies accumulated over k = 1 .. k_max.
// log_base <= 0 selects the natural logarithm.
MelrResult melr(const Rapsd& pred, const Rapsd& ref, MelrMode mode = MelrMode::mean, double log_base = 0.0);
MelrResult melr(const Field2D& pred, const Field2D& ref, MelrMode mode = MelrMode::mean, double log_base = 0.0);

const char* to_string(MelrMode mode) noexcept;

void write_rapsd_csv(const std::string& path, const Rapsd& spectrum);

}  // namespace windeval
