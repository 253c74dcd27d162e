#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace windeval {

struct Density {
  std::vector<double> grid;
  std::vector<double> density;
};

// h = sample standard deviation (1/(n-1)) * n^(-1/5).
double scott_bandwidth(std::span<const double> samples);

// Gaussian KDE evaluated on an ascending grid.
Density kde(std::span<const double> samples, std::span<const double> grid, double bandwidth);

// `points` evenly spaced values spanning [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t points);

// Default plotting grid for wind speeds: 512 points over [0, max + 4h].
std::vector<double> default_speed_grid(std::span<const double> samples, double bandwidth, std::size_t points = 512);

double trapezoid(std::span<const double> x, std::span<const double> y);

// Wasserstein-1 between the empirical distributions of a and b.
double wasserstein1(std::span<const double> a, std::span<const double> b);

// The two evaluation routes behind wasserstein1(), exposed so they can be
// checked against each other. The sorted-difference route requires equal
// sizes.
double wasserstein1_sorted(std::span<const double> a, std::span<const double> b);
double wasserstein1_cdf(std::span<const double> a, std::span<const double> b);

void write_density_csv(const std::string& path, const Density& density);

}  // namespace windeval
