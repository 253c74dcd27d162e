#include "windeval/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "windeval/error.hpp"
#include "windeval/fft.hpp"

namespace windeval {

long signed_frequency(std::size_t a, std::size_t n) noexcept {
  const auto sa = static_cast<long>(a), sn = static_cast<long>(n);
  return a < (n + 1) / 2 ? sa : sa - sn;
}

Spectrum2D power_spectrum_2d(const Field2D& field) {
  const std::size_t m = field.rows(), n = field.cols();
  std::vector<std::complex<double>> buf(field.values().begin(), field.values().end());
  fft2d(buf, m, n);

  const double scale = 1.0 / static_cast<double>(m * n);
  Spectrum2D s{m, n, std::vector<double>(m * n)};
  for (std::size_t i = 0; i < buf.size(); ++i) s.power[i] = std::norm(buf[i] * scale);
  return s;
}

Rapsd rapsd(const Spectrum2D& spectrum, double spacing_km) {
  const std::size_t m = spectrum.rows, n = spectrum.cols;
  if (m < 4 || n < 4) fail("field-too-small", "RAPSD needs at least 4x4 cells");
  const std::size_t k_max = std::min(m, n) / 2;

  Rapsd r;
  std::vector<double> sums(k_max + 1, 0.0);
  r.counts.assign(k_max + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const double kx = static_cast<double>(signed_frequency(i, m));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == 0 && j == 0) continue;
      const double ky = static_cast<double>(signed_frequency(j, n));
      const auto k = static_cast<std::size_t>(std::lround(std::sqrt(kx * kx + ky * ky)));
      if (k > k_max) {
        ++r.discarded_cells;
        continue;
      }
      sums[k] += spectrum(i, j);
      ++r.counts[k];
    }
  }
  r.counts.erase(r.counts.begin());
  for (std::size_t k = 1; k <= k_max; ++k) {
    r.wavenumbers.push_back(static_cast<int>(k));
    r.energies.push_back(sums[k] / static_cast<double>(r.counts[k - 1]));
    r.wavelengths_km.push_back(spacing_km / static_cast<double>(k));
  }
  return r;
}

Rapsd rapsd(const Field2D& field) {
  if (field.rows() < 4 || field.cols() < 4) fail("field-too-small", "RAPSD needs at least 4x4 cells");
  return rapsd(power_spectrum_2d(field), field.grid().spacing_km);
}

Rapsd average_rapsd(const std::vector<Rapsd>& spectra) {
  if (spectra.empty()) fail("empty-spectrum");
  Rapsd out = spectra.front();
  for (std::size_t s = 1; s < spectra.size(); ++s) {
    if (spectra[s].wavenumbers != out.wavenumbers) fail("shape-mismatch", "spectra with different bins");
    for (std::size_t k = 0; k < out.energies.size(); ++k) out.energies[k] += spectra[s].energies[k];
  }
  for (double& e : out.energies) e /= static_cast<double>(spectra.size());
  return out;
}

MelrResult melr(const Rapsd& pred, const Rapsd& ref, MelrMode mode, double log_base) {
  if (pred.wavenumbers != ref.wavenumbers) fail("shape-mismatch", "spectra with different bins");
  const double denom = log_base > 0.0 ? std::log(log_base) : 1.0;

  MelrResult r;
  double acc = 0.0;
  for (std::size_t k = 0; k < pred.energies.size(); ++k) {
    const double ep = pred.energies[k], er = ref.energies[k];
    if (ep < kEnergyFloor || er < kEnergyFloor) {
      ++r.bins_skipped;
      continue;
    }
    acc += std::abs(std::log(ep / er)) / denom;
    ++r.bins_used;
  }
  if (r.bins_used == 0) fail("empty-spectrum", "no radial bin above the energy floor");
  r.value = mode == MelrMode::mean ? acc / static_cast<double>(r.bins_used) : acc;
  return r;
}

MelrResult melr(const Field2D& pred, const Field2D& ref, MelrMode mode, double log_base) {
  if (pred.rows() != ref.rows() || pred.cols() != ref.cols()) fail("shape-mismatch");
  return melr(rapsd(pred), rapsd(ref), mode, log_base);
}

const char* to_string(MelrMode mode) noexcept { return mode == MelrMode::mean ? "mean" : "sum"; }

void write_rapsd_csv(const std::string& path, const Rapsd& spectrum) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_io("cannot write " + path);
  os << "k,wavelength_km,energy,count\n";
  char buf[96];
  for (std::size_t i = 0; i < spectrum.wavenumbers.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.17g,%zu\n", spectrum.wavenumbers[i], spectrum.wavelengths_km[i],
                  spectrum.energies[i], spectrum.counts[i]);
    os << buf;
  }
}

}  // namespace windeval
