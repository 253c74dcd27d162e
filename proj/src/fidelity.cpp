#include "windeval/fidelity.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "windeval/error.hpp"

namespace windeval {

void MetricConfig::validate() const {
  if (!(peak > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) fail("invalid-config", "peak, k1 and k2 must be positive");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
    fail("invalid-config", "SSIM exponents must be finite");
}

namespace {

void require_same_shape(const Field2D& f, const Field2D& g) {
  if (f.rows() != g.rows() || f.cols() != g.cols()) fail("shape-mismatch");
}

// Keeps negative bases usable with the default unit exponents.
double weighted(double term, double exponent) { return exponent == 1.0 ? term : std::pow(term, exponent); }

}  // namespace

double mse(const Field2D& f, const Field2D& fhat) {
  require_same_shape(f, fhat);
  const auto a = f.values(), b = fhat.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

double psnr(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg) {
  cfg.validate();
  const double e = mse(f, fhat);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(cfg.peak * cfg.peak / e);
}

double mae(const Field2D& f, const Field2D& fhat) {
  require_same_shape(f, fhat);
  const auto a = f.values(), b = fhat.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

namespace {

struct Moments {
  double mu_f, mu_g, var_f, var_g, cov;
};

template <typename At>
Moments moments(std::size_t n, At&& at) {
  double sf = 0.0, sg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = at(i);
    sf += x;
    sg += y;
  }
  const double nn = static_cast<double>(n);
  Moments m{sf / nn, sg / nn, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = at(i);
    const double dx = x - m.mu_f, dy = y - m.mu_g;
    m.var_f += dx * dx;
    m.var_g += dy * dy;
    m.cov += dx * dy;
  }
  m.var_f /= nn - 1.0;
  m.var_g /= nn - 1.0;
  m.cov /= nn - 1.0;
  return m;
}

SsimTerms terms_from(const Moments& m, const MetricConfig& cfg) {
  const double c1 = (cfg.k1 * cfg.peak) * (cfg.k1 * cfg.peak);
  const double c2 = (cfg.k2 * cfg.peak) * (cfg.k2 * cfg.peak);
  const double c3 = c2 / 2.0;
  const double sd_f = std::sqrt(m.var_f), sd_g = std::sqrt(m.var_g);

  SsimTerms t;
  t.luminance = (2.0 * m.mu_f * m.mu_g + c1) / (m.mu_f * m.mu_f + m.mu_g * m.mu_g + c1);
  t.contrast = (2.0 * sd_f * sd_g + c2) / (m.var_f + m.var_g + c2);
  t.structure = (m.cov + c3) / (sd_f * sd_g + c3);
  t.ssim = weighted(t.luminance, cfg.alpha) * weighted(t.contrast, cfg.beta) * weighted(t.structure, cfg.gamma);
  return t;
}

}  // namespace

SsimTerms ssim_terms(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg) {
  cfg.validate();
  require_same_shape(f, fhat);
  if (f.size() < 2) fail("degenerate-field");
  const auto a = f.values(), b = fhat.values();
  const Moments m = moments(a.size(), [&](std::size_t i) { return std::pair{a[i], b[i]}; });
  return terms_from(m, cfg);
}

double ssim(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg) { return ssim_terms(f, fhat, cfg).ssim; }

double ssim_windowed(const Field2D& f, const Field2D& fhat, std::size_t window, const MetricConfig& cfg) {
  cfg.validate();
  require_same_shape(f, fhat);
  if (window < 2) fail("invalid-config", "SSIM window must be at least 2");
  if (window > f.rows() || window > f.cols()) return ssim(f, fhat, cfg);

  double acc = 0.0;
  std::size_t blocks = 0;
  for (std::size_t r = 0; r + window <= f.rows(); ++r)
    for (std::size_t c = 0; c + window <= f.cols(); ++c) {
      const Moments m = moments(window * window, [&](std::size_t k) {
        const std::size_t i = r + k / window, j = c + k % window;
        return std::pair{f(i, j), fhat(i, j)};
      });
      acc += terms_from(m, cfg).ssim;
      ++blocks;
    }
  return acc / static_cast<double>(blocks);
}

FidelityResult fidelity(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg) {
  return {psnr(f, fhat, cfg), ssim(f, fhat, cfg), mae(f, fhat)};
}

}  // namespace windeval
