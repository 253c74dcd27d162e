#include "windeval/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "windeval/error.hpp"

namespace windeval {

namespace {

void require_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) fail("non-finite-value");
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double scott_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) fail("degenerate-samples", "Scott's rule needs at least two samples");
  require_finite(samples);
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) fail("degenerate-samples", "zero sample variance");
  return sd * std::pow(static_cast<double>(n), -0.2);
}

Density kde(std::span<const double> samples, std::span<const double> grid, double bandwidth) {
  if (samples.empty()) fail("empty-samples");
  if (!(bandwidth > 0.0)) fail("invalid-bandwidth");
  require_finite(samples);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) fail("bad-grid", "evaluation grid must be strictly ascending");

  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  const double inv2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  Density d{std::vector<double>(grid.begin(), grid.end()), std::vector<double>(grid.size())};
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double x : samples) {
      const double z = grid[g] - x;
      acc += std::exp(-z * z * inv2h2);
    }
    d.density[g] = acc * norm;
  }
  return d;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) fail("bad-grid");
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

std::vector<double> default_speed_grid(std::span<const double> samples, double bandwidth, std::size_t points) {
  if (samples.empty()) fail("empty-samples");
  const double hi = *std::max_element(samples.begin(), samples.end()) + 4.0 * bandwidth;
  return linspace(0.0, hi, points);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail("shape-mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return acc;
}

double wasserstein1_sorted(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail("empty-samples");
  if (a.size() != b.size()) fail("shape-mismatch", "sorted-difference route needs equal sizes");
  require_finite(a);
  require_finite(b);
  const auto sa = sorted_copy(a), sb = sorted_copy(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) acc += std::abs(sa[i] - sb[i]);
  return acc / static_cast<double>(sa.size());
}

// Integral of |F_a - F_b| over the merged breakpoints. Between consecutive
// breakpoints both CDFs are constant.
double wasserstein1_cdf(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail("empty-samples");
  require_finite(a);
  require_finite(b);
  const auto sa = sorted_copy(a), sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());

  std::size_t ia = 0, ib = 0;
  double prev = std::min(sa.front(), sb.front());
  double acc = 0.0;
  while (ia < sa.size() || ib < sb.size()) {
    const double next = ib == sb.size() || (ia < sa.size() && sa[ia] <= sb[ib]) ? sa[ia] : sb[ib];
    const double fa = static_cast<double>(ia) / na, fb = static_cast<double>(ib) / nb;
    acc += std::abs(fa - fb) * (next - prev);
    while (ia < sa.size() && sa[ia] == next) ++ia;
    while (ib < sb.size() && sb[ib] == next) ++ib;
    prev = next;
  }
  return acc;
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() ? wasserstein1_sorted(a, b) : wasserstein1_cdf(a, b);
}

void write_density_csv(const std::string& path, const Density& density) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_io("cannot write " + path);
  os << "speed_ms,density\n";
  char buf[64];
  for (std::size_t i = 0; i < density.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.12g\n", density.grid[i], density.density[i]);
    os << buf;
  }
}

}  // namespace windeval
