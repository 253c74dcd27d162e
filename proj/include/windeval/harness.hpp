#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "windeval/dataset.hpp"
#include "windeval/fidelity.hpp"
#include "windeval/parallel.hpp"
#include "windeval/spectral.hpp"
#include "windeval/wind_power.hpp"

namespace windeval {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

// One model may be represented by several prediction datasets (e.g. repeated
// stochastic samples); their metric rows are averaged.
struct ModelInput {
  std::string name;
  std::vector<std::filesystem::path> datasets;
};

enum class MelrSource { speed, channels };

struct EvalConfig {
  MetricConfig metric;
  MelrMode melr_mode = MelrMode::mean;
  double melr_log_base = 0.0;  // <= 0: natural log
  MelrSource melr_source = MelrSource::speed;
  std::vector<GeoPoint> points;
  std::size_t random_points = 1;  // used only when `points` is empty
  std::uint64_t seed = 0;
  PowerCurve curve = enercon_e92_2350();
  bool per_sample = false;
  Execution exec = Execution::parallel;
};

struct ModelRow {
  std::string model;
  // Reported values: u/v-channel average for the pixel metrics, MELR per
  // melr_source, Wasserstein averaged over the evaluated points.
  double psnr_db = 0.0;
  double ssim = 0.0;
  double mae = 0.0;
  double melr = 0.0;
  double wasserstein = 0.0;

  double psnr_u = 0.0, psnr_v = 0.0;
  double ssim_u = 0.0, ssim_v = 0.0;
  double mae_u = 0.0, mae_v = 0.0;
  double psnr_speed = 0.0, ssim_speed = 0.0, mae_speed = 0.0;
  double melr_speed = 0.0, melr_u = 0.0, melr_v = 0.0;
  std::size_t melr_bins_skipped = 0;
  std::size_t prediction_sets = 0;
};

struct PointRow {
  std::string model;
  double lat = 0.0;
  double lon = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
  double wasserstein = 0.0;
  double final_cumulative_pred_kwh = 0.0;
  double final_cumulative_ref_kwh = 0.0;
  double final_cumulative_error_kwh = 0.0;
};

struct SampleRow {
  std::string model;
  std::size_t prediction_set = 0;
  std::int64_t timestamp = 0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double mae = 0.0;
  double melr = 0.0;
};

struct ReportMetadata {
  std::string ref_dataset;
  std::vector<std::string> pred_datasets;
  std::string config_hash;
  std::string melr_mode;
  std::string melr_source;
  double melr_log_base = 0.0;
  std::size_t sample_count = 0;
};

struct EvalReport {
  std::vector<ModelRow> rows;
  std::vector<PointRow> per_point;
  std::vector<SampleRow> per_sample;
  ReportMetadata metadata;
};

// Per-sample metrics averaged over the test set, plus per-point temporal
// Wasserstein distance and cumulative-energy error. Predictions must share
// the reference grid and timestamps exactly; nothing is resampled here.
EvalReport evaluate(const std::vector<ModelInput>& models, const std::filesystem::path& ref, const EvalConfig& cfg);

// Grid points from cfg.points, or cfg.random_points drawn with cfg.seed.
std::vector<std::pair<GeoPoint, CellIndex>> resolve_points(const GridSpec& grid, const EvalConfig& cfg);

std::string config_hash(const EvalConfig& cfg);

enum class ReportFormat { json, csv, markdown };

std::string emit_report(const EvalReport& report, ReportFormat format);
EvalReport parse_report_json(const std::string& text);

enum class TaskKind { super_resolution, downscaling };

struct Patch {
  std::size_t row0 = 0, col0 = 0, height = 0, width = 0;
};

struct TaskData {
  FieldSeries lr;
  FieldSeries hr;
};

// super_resolution: hr = src (optionally patched), lr = decimate(hr, factor).
// downscaling: hr = aux (optionally patched), lr = src regridded by nearest
// neighbour onto the factor-decimated hr grid.
TaskData build_task(const FieldSeries& src, TaskKind task, const FieldSeries* aux = nullptr,
                    std::optional<Patch> patch = std::nullopt, std::size_t factor = 4,
                    Execution exec = Execution::parallel);

}  // namespace windeval
