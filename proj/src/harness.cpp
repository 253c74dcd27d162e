#include "windeval/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <json.hpp>

#include "windeval/error.hpp"
#include "windeval/resample.hpp"
#include "windeval/synth.hpp"
#include "windeval/distribution.hpp"

namespace windeval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SampleMetrics {
  FidelityResult u, v, speed;
  MelrResult melr_speed, melr_u, melr_v;
  std::vector<double> pred_points, ref_points;
};

// Aggregates of one prediction dataset against the reference.
struct SetResult {
  ModelRow row;
  std::vector<PointRow> points;
  std::vector<SampleRow> samples;
};

std::string dataset_id(const fs::path& p) {
  const fs::path clean = p.has_filename() ? p : p.parent_path();
  return clean.filename().string();
}

double speed_scale(const NormStats& s) {
  return std::hypot(std::max(std::abs(s.u_min), std::abs(s.u_max)), std::max(std::abs(s.v_min), std::abs(s.v_max)));
}

Field2D scaled(const Field2D& f, double scale) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& x : out) x /= scale;
  return Field2D(f.grid(), std::move(out));
}

double reported_melr(const SampleMetrics& m, MelrSource src) {
  return src == MelrSource::speed ? m.melr_speed.value : 0.5 * (m.melr_u.value + m.melr_v.value);
}

SetResult evaluate_set(const std::string& model, const Dataset& pred, const Dataset& ref, const NormStats& stats,
                       const std::vector<std::pair<GeoPoint, CellIndex>>& points, const EvalConfig& cfg,
                       std::size_t set_index) {
  if (!(pred.grid() == ref.grid()))
    fail("shape-mismatch", dataset_id(pred.dir()) + " is not on the reference grid");
  if (pred.size() != ref.size()) fail("time-misalignment", dataset_id(pred.dir()) + " sample count differs");
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (pred.timestamp(i) != ref.timestamp(i)) fail("time-misalignment", dataset_id(pred.dir()));
  if (ref.size() == 0) fail("empty-series", "reference dataset has no samples");

  const double vscale = speed_scale(stats);
  std::vector<SampleMetrics> per(ref.size());
  for_each_index(cfg.exec, ref.size(), [&](std::size_t i) {
    const VelocitySample p = pred.sample(i);
    const VelocitySample r = ref.sample(i);
    const VelocitySample pn = normalize(p, stats), rn = normalize(r, stats);
    const Field2D ps = wind_speed(p), rs = wind_speed(r);

    SampleMetrics& m = per[i];
    m.u = fidelity(rn.u, pn.u, cfg.metric);
    m.v = fidelity(rn.v, pn.v, cfg.metric);
    m.speed = fidelity(scaled(rs, vscale), scaled(ps, vscale), cfg.metric);
    m.melr_speed = melr(ps, rs, cfg.melr_mode, cfg.melr_log_base);
    m.melr_u = melr(pn.u, rn.u, cfg.melr_mode, cfg.melr_log_base);
    m.melr_v = melr(pn.v, rn.v, cfg.melr_mode, cfg.melr_log_base);
    for (const auto& [geo, cell] : points) {
      m.pred_points.push_back(ps(cell.row, cell.col));
      m.ref_points.push_back(rs(cell.row, cell.col));
    }
  });

  const std::size_t n = per.size();
  auto mean_over = [&](auto&& get) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = get(per[i]);
    return mean_of(xs);
  };

  SetResult out;
  ModelRow& row = out.row;
  row.model = model;
  row.prediction_sets = 1;
  row.psnr_u = mean_over([](const SampleMetrics& m) { return m.u.psnr_db; });
  row.psnr_v = mean_over([](const SampleMetrics& m) { return m.v.psnr_db; });
  row.ssim_u = mean_over([](const SampleMetrics& m) { return m.u.ssim; });
  row.ssim_v = mean_over([](const SampleMetrics& m) { return m.v.ssim; });
  row.mae_u = mean_over([](const SampleMetrics& m) { return m.u.mae; });
  row.mae_v = mean_over([](const SampleMetrics& m) { return m.v.mae; });
  row.psnr_speed = mean_over([](const SampleMetrics& m) { return m.speed.psnr_db; });
  row.ssim_speed = mean_over([](const SampleMetrics& m) { return m.speed.ssim; });
  row.mae_speed = mean_over([](const SampleMetrics& m) { return m.speed.mae; });
  row.melr_speed = mean_over([](const SampleMetrics& m) { return m.melr_speed.value; });
  row.melr_u = mean_over([](const SampleMetrics& m) { return m.melr_u.value; });
  row.melr_v = mean_over([](const SampleMetrics& m) { return m.melr_v.value; });

  row.psnr_db = mean_over([](const SampleMetrics& m) { return 0.5 * (m.u.psnr_db + m.v.psnr_db); });
  row.ssim = mean_over([](const SampleMetrics& m) { return 0.5 * (m.u.ssim + m.v.ssim); });
  row.mae = mean_over([](const SampleMetrics& m) { return 0.5 * (m.u.mae + m.v.mae); });
  row.melr = mean_over([&](const SampleMetrics& m) { return reported_melr(m, cfg.melr_source); });
  for (const auto& m : per)
    row.melr_bins_skipped += cfg.melr_source == MelrSource::speed
                                 ? m.melr_speed.bins_skipped
                                 : m.melr_u.bins_skipped + m.melr_v.bins_skipped;

  const double dt_hours = static_cast<double>(ref.manifest().dt_seconds) / 3600.0;
  std::vector<double> w1s;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::vector<double> a(n), b(n);
    std::vector<SpeedPoint> sp(n), sr(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = per[i].pred_points[k];
      b[i] = per[i].ref_points[k];
      sp[i] = {ref.timestamp(i), a[i]};
      sr[i] = {ref.timestamp(i), b[i]};
    }
    const PowerSeries pp = cumulative_power(sp, cfg.curve, dt_hours);
    const PowerSeries pr = cumulative_power(sr, cfg.curve, dt_hours);
    PointRow pt;
    pt.model = model;
    pt.lat = points[k].first.lat;
    pt.lon = points[k].first.lon;
    pt.row = points[k].second.row;
    pt.col = points[k].second.col;
    pt.wasserstein = wasserstein1(a, b);
    pt.final_cumulative_pred_kwh = pp.cumulative_kwh.back();
    pt.final_cumulative_ref_kwh = pr.cumulative_kwh.back();
    pt.final_cumulative_error_kwh = power_difference(pp, pr).back();
    w1s.push_back(pt.wasserstein);
    out.points.push_back(pt);
  }
  row.wasserstein = mean_of(w1s);

  if (cfg.per_sample)
    for (std::size_t i = 0; i < n; ++i)
      out.samples.push_back({model, set_index, ref.timestamp(i), 0.5 * (per[i].u.psnr_db + per[i].v.psnr_db),
                             0.5 * (per[i].u.ssim + per[i].v.ssim), 0.5 * (per[i].u.mae + per[i].v.mae),
                             reported_melr(per[i], cfg.melr_source)});
  return out;
}

// Mean of the set rows, field by field.
ModelRow average_rows(const std::vector<SetResult>& sets) {
  ModelRow out = sets.front().row;
  auto avg = [&](double ModelRow::*field) {
    std::vector<double> xs;
    for (const auto& s : sets) xs.push_back(s.row.*field);
    out.*field = mean_of(xs);
  };
  for (auto f : {&ModelRow::psnr_db, &ModelRow::ssim, &ModelRow::mae, &ModelRow::melr, &ModelRow::wasserstein,
                 &ModelRow::psnr_u, &ModelRow::psnr_v, &ModelRow::ssim_u, &ModelRow::ssim_v, &ModelRow::mae_u,
                 &ModelRow::mae_v, &ModelRow::psnr_speed, &ModelRow::ssim_speed, &ModelRow::mae_speed,
                 &ModelRow::melr_speed, &ModelRow::melr_u, &ModelRow::melr_v})
    avg(f);
  out.melr_bins_skipped = 0;
  for (const auto& s : sets) out.melr_bins_skipped += s.row.melr_bins_skipped;
  out.prediction_sets = sets.size();
  return out;
}

std::vector<PointRow> average_points(const std::vector<SetResult>& sets) {
  std::vector<PointRow> out = sets.front().points;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto avg = [&](double PointRow::*field) {
      std::vector<double> xs;
      for (const auto& s : sets) xs.push_back(s.points[k].*field);
      out[k].*field = mean_of(xs);
    };
    avg(&PointRow::wasserstein);
    avg(&PointRow::final_cumulative_pred_kwh);
    avg(&PointRow::final_cumulative_ref_kwh);
    avg(&PointRow::final_cumulative_error_kwh);
  }
  return out;
}

}  // namespace

std::vector<std::pair<GeoPoint, CellIndex>> resolve_points(const GridSpec& grid, const EvalConfig& cfg) {
  std::vector<std::pair<GeoPoint, CellIndex>> out;
  if (!cfg.points.empty()) {
    for (const GeoPoint& p : cfg.points) out.emplace_back(p, nearest_cell(grid, p.lat, p.lon));
    return out;
  }
  std::mt19937_64 rng(derive_seed(cfg.seed, 0x706f696e74ULL));
  for (std::size_t k = 0; k < cfg.random_points; ++k) {
    const CellIndex cell{static_cast<std::size_t>(rng() % grid.rows), static_cast<std::size_t>(rng() % grid.cols)};
    out.emplace_back(GeoPoint{grid.lat_at(cell.row), grid.lon_at(cell.col)}, cell);
  }
  return out;
}

std::string config_hash(const EvalConfig& cfg) {
  json pts = json::array();
  for (const auto& p : cfg.points) pts.push_back({p.lat, p.lon});
  const json j = {{"peak", cfg.metric.peak},
                  {"k1", cfg.metric.k1},
                  {"k2", cfg.metric.k2},
                  {"alpha", cfg.metric.alpha},
                  {"beta", cfg.metric.beta},
                  {"gamma", cfg.metric.gamma},
                  {"melr_mode", to_string(cfg.melr_mode)},
                  {"melr_log_base", cfg.melr_log_base},
                  {"melr_source", cfg.melr_source == MelrSource::speed ? "speed" : "channels"},
                  {"points", pts},
                  {"random_points", cfg.random_points},
                  {"seed", cfg.seed},
                  {"curve", json::parse(power_curve_to_json(cfg.curve))},
                  {"per_sample", cfg.per_sample}};
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EvalReport evaluate(const std::vector<ModelInput>& models, const fs::path& ref_path, const EvalConfig& cfg) {
  cfg.metric.validate();
  cfg.curve.validate();
  if (models.empty()) fail("invalid-config", "no prediction datasets given");

  const Dataset ref = Dataset::open(ref_path);
  if (!ref.manifest().stats) fail("degenerate-range", "reference manifest carries no normalisation stats");
  const NormStats stats = *ref.manifest().stats;
  const auto points = resolve_points(ref.grid(), cfg);

  EvalReport report;
  report.metadata.ref_dataset = dataset_id(ref_path);
  report.metadata.config_hash = config_hash(cfg);
  report.metadata.melr_mode = to_string(cfg.melr_mode);
  report.metadata.melr_source = cfg.melr_source == MelrSource::speed ? "speed" : "channels";
  report.metadata.melr_log_base = cfg.melr_log_base;
  report.metadata.sample_count = ref.size();

  for (const ModelInput& model : models) {
    if (model.datasets.empty()) fail("invalid-config", "model " + model.name + " has no prediction datasets");
    std::vector<SetResult> sets;
    for (std::size_t s = 0; s < model.datasets.size(); ++s) {
      const Dataset pred = Dataset::open(model.datasets[s]);
      report.metadata.pred_datasets.push_back(model.name + ":" + dataset_id(model.datasets[s]));
      sets.push_back(evaluate_set(model.name, pred, ref, stats, points, cfg, s));
    }
    report.rows.push_back(average_rows(sets));
    for (auto& p : average_points(sets)) report.per_point.push_back(std::move(p));
    for (const auto& s : sets)
      report.per_sample.insert(report.per_sample.end(), s.samples.begin(), s.samples.end());
  }
  return report;
}

namespace {

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double get_num(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    fail("invalid-report", "unexpected string in numeric field: " + s);
  }
  return j.get<double>();
}

std::string fmt(const char* spec, double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

json to_json(const EvalReport& r) {
  json rows = json::array();
  for (const auto& m : r.rows)
    rows.push_back({{"model", m.model},
                    {"psnr_db", num(m.psnr_db)},
                    {"ssim", num(m.ssim)},
                    {"mae", num(m.mae)},
                    {"melr", num(m.melr)},
                    {"wasserstein", num(m.wasserstein)},
                    {"psnr_u", num(m.psnr_u)},
                    {"psnr_v", num(m.psnr_v)},
                    {"ssim_u", num(m.ssim_u)},
                    {"ssim_v", num(m.ssim_v)},
                    {"mae_u", num(m.mae_u)},
                    {"mae_v", num(m.mae_v)},
                    {"psnr_speed", num(m.psnr_speed)},
                    {"ssim_speed", num(m.ssim_speed)},
                    {"mae_speed", num(m.mae_speed)},
                    {"melr_speed", num(m.melr_speed)},
                    {"melr_u", num(m.melr_u)},
                    {"melr_v", num(m.melr_v)},
                    {"melr_bins_skipped", m.melr_bins_skipped},
                    {"prediction_sets", m.prediction_sets}});
  json points = json::array();
  for (const auto& p : r.per_point)
    points.push_back({{"model", p.model},
                      {"lat", num(p.lat)},
                      {"lon", num(p.lon)},
                      {"row", p.row},
                      {"col", p.col},
                      {"wasserstein", num(p.wasserstein)},
                      {"final_cumulative_pred_kwh", num(p.final_cumulative_pred_kwh)},
                      {"final_cumulative_ref_kwh", num(p.final_cumulative_ref_kwh)},
                      {"final_cumulative_error_kwh", num(p.final_cumulative_error_kwh)}});
  json samples = json::array();
  for (const auto& s : r.per_sample)
    samples.push_back({{"model", s.model},
                       {"prediction_set", s.prediction_set},
                       {"timestamp", s.timestamp},
                       {"psnr_db", num(s.psnr_db)},
                       {"ssim", num(s.ssim)},
                       {"mae", num(s.mae)},
                       {"melr", num(s.melr)}});
  const auto& md = r.metadata;
  return {{"metadata",
           {{"ref_dataset", md.ref_dataset},
            {"pred_datasets", md.pred_datasets},
            {"config_hash", md.config_hash},
            {"melr_mode", md.melr_mode},
            {"melr_source", md.melr_source},
            {"melr_log_base", num(md.melr_log_base)},
            {"sample_count", md.sample_count}}},
          {"rows", rows},
          {"per_point", points},
          {"per_sample", samples}};
}

}  // namespace

std::string emit_report(const EvalReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return to_json(report).dump(2) + "\n";
    case ReportFormat::csv: {
      std::string out = "model,psnr_db,ssim,mae,melr,wasserstein\n";
      for (const auto& m : report.rows)
        out += m.model + "," + fmt("%.17g", m.psnr_db) + "," + fmt("%.17g", m.ssim) + "," + fmt("%.17g", m.mae) +
               "," + fmt("%.17g", m.melr) + "," + fmt("%.17g", m.wasserstein) + "\n";
      return out;
    }
    case ReportFormat::markdown: {
      std::string out =
          "| Model | PSNR | SSIM | MAE | MELR | Wasserstein |\n"
          "|-------|------|------|-----|------|-------------|\n";
      for (const auto& m : report.rows)
        out += "| " + m.model + " | " + fmt("%.4f", m.psnr_db) + " | " + fmt("%.4f", m.ssim) + " | " +
               fmt("%.4f", m.mae) + " | " + fmt("%.4f", m.melr) + " | " + fmt("%.4f", m.wasserstein) + " |\n";
      return out;
    }
  }
  fail("invalid-format");
}

EvalReport parse_report_json(const std::string& text) {
  EvalReport r;
  try {
    const json j = json::parse(text);
    const json& md = j.at("metadata");
    r.metadata.ref_dataset = md.at("ref_dataset").get<std::string>();
    r.metadata.pred_datasets = md.at("pred_datasets").get<std::vector<std::string>>();
    r.metadata.config_hash = md.at("config_hash").get<std::string>();
    r.metadata.melr_mode = md.at("melr_mode").get<std::string>();
    r.metadata.melr_source = md.at("melr_source").get<std::string>();
    r.metadata.melr_log_base = get_num(md.at("melr_log_base"));
    r.metadata.sample_count = md.at("sample_count").get<std::size_t>();
    for (const json& x : j.at("rows")) {
      ModelRow m;
      m.model = x.at("model").get<std::string>();
      m.psnr_db = get_num(x.at("psnr_db"));
      m.ssim = get_num(x.at("ssim"));
      m.mae = get_num(x.at("mae"));
      m.melr = get_num(x.at("melr"));
      m.wasserstein = get_num(x.at("wasserstein"));
      m.psnr_u = get_num(x.at("psnr_u"));
      m.psnr_v = get_num(x.at("psnr_v"));
      m.ssim_u = get_num(x.at("ssim_u"));
      m.ssim_v = get_num(x.at("ssim_v"));
      m.mae_u = get_num(x.at("mae_u"));
      m.mae_v = get_num(x.at("mae_v"));
      m.psnr_speed = get_num(x.at("psnr_speed"));
      m.ssim_speed = get_num(x.at("ssim_speed"));
      m.mae_speed = get_num(x.at("mae_speed"));
      m.melr_speed = get_num(x.at("melr_speed"));
      m.melr_u = get_num(x.at("melr_u"));
      m.melr_v = get_num(x.at("melr_v"));
      m.melr_bins_skipped = x.at("melr_bins_skipped").get<std::size_t>();
      m.prediction_sets = x.at("prediction_sets").get<std::size_t>();
      r.rows.push_back(m);
    }
    for (const json& x : j.at("per_point")) {
      PointRow p;
      p.model = x.at("model").get<std::string>();
      p.lat = get_num(x.at("lat"));
      p.lon = get_num(x.at("lon"));
      p.row = x.at("row").get<std::size_t>();
      p.col = x.at("col").get<std::size_t>();
      p.wasserstein = get_num(x.at("wasserstein"));
      p.final_cumulative_pred_kwh = get_num(x.at("final_cumulative_pred_kwh"));
      p.final_cumulative_ref_kwh = get_num(x.at("final_cumulative_ref_kwh"));
      p.final_cumulative_error_kwh = get_num(x.at("final_cumulative_error_kwh"));
      r.per_point.push_back(p);
    }
    for (const json& x : j.at("per_sample")) {
      SampleRow s;
      s.model = x.at("model").get<std::string>();
      s.prediction_set = x.at("prediction_set").get<std::size_t>();
      s.timestamp = x.at("timestamp").get<std::int64_t>();
      s.psnr_db = get_num(x.at("psnr_db"));
      s.ssim = get_num(x.at("ssim"));
      s.mae = get_num(x.at("mae"));
      s.melr = get_num(x.at("melr"));
      r.per_sample.push_back(s);
    }
  } catch (const json::exception& e) {
    fail("invalid-report", e.what());
  }
  return r;
}

TaskData build_task(const FieldSeries& src, TaskKind task, const FieldSeries* aux, std::optional<Patch> patch,
                    std::size_t factor, Execution exec) {
  const ResampleFactor f(factor);
  auto cut = [&](const FieldSeries& s) {
    return patch ? extract_patch(s, patch->row0, patch->col0, patch->height, patch->width) : s;
  };

  if (task == TaskKind::super_resolution) {
    FieldSeries hr = cut(src);
    FieldSeries lr = resample(hr, ResampleOp::decimate, f, exec);
    return {std::move(lr), std::move(hr)};
  }

  if (aux == nullptr) fail("missing-aux", "downscaling needs the high-resolution target dataset");
  FieldSeries hr = cut(*aux);
  if (src.size() != hr.size()) fail("time-misalignment", "source and target sample counts differ");
  for (std::size_t i = 0; i < src.size(); ++i)
    if (src.samples()[i].timestamp != hr.samples()[i].timestamp) fail("time-misalignment");
  FieldSeries lr = regrid(src, decimate_grid(hr.grid(), f), exec);
  return {std::move(lr), std::move(hr)};
}

}  // namespace windeval
