#pragma once

#include "windeval/grid.hpp"

namespace windeval {

// Stabilizer constants follow the usual SSIM convention (k << 1); exponents
// weight the luminance, contrast and structure terms.
struct MetricConfig {
  double peak = 1.0;
  double k1 = 0.01;
  double k2 = 0.03;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  void validate() const;
};

struct SsimTerms {
  double luminance = 1.0;
  double contrast = 1.0;
  double structure = 1.0;
  double ssim = 1.0;
};

struct FidelityResult {
  double psnr_db = 0.0;  // +infinity when the fields are identical
  double ssim = 1.0;
  double mae = 0.0;
};

double mse(const Field2D& f, const Field2D& fhat);
double psnr(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg = {});
double mae(const Field2D& f, const Field2D& fhat);

// Global SSIM: a single mean/deviation/covariance over the whole field, with
// 1/(N-1) normalisation for the second moments.
SsimTerms ssim_terms(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg = {});
double ssim(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg = {});

// Mean of global SSIM over every window x window sub-block (stride 1). Only a
// cross-check; the reported metric is the global one.
double ssim_windowed(const Field2D& f, const Field2D& fhat, std::size_t window, const MetricConfig& cfg = {});

FidelityResult fidelity(const Field2D& f, const Field2D& fhat, const MetricConfig& cfg = {});

}  // namespace windeval
