// windeval: command-line front end for building task datasets, running the
// interpolation baselines and evaluating predictions against a reference.

#include <algorithm>
#include <cstdio>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "windeval/dataset.hpp"
#include "windeval/distribution.hpp"
#include "windeval/error.hpp"
#include "windeval/harness.hpp"
#include "windeval/resample.hpp"
#include "windeval/spectral.hpp"
#include "windeval/synth.hpp"
#include "windeval/wind_power.hpp"

namespace fs = std::filesystem;
using namespace windeval;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

GeoPoint parse_point(const std::string& text) {
  GeoPoint p;
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> p.lat >> comma >> p.lon) || comma != ',' || !is.eof()) fail("bad-argument", "point must be lat,lon");
  return p;
}

Patch parse_patch(const std::string& text) {
  Patch p;
  if (std::sscanf(text.c_str(), "%zu,%zu,%zu,%zu", &p.row0, &p.col0, &p.height, &p.width) != 4)
    fail("bad-argument", "patch must be row0,col0,height,width");
  return p;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_io("cannot write " + path);
  os << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Execution execution_for(int threads) {
  set_thread_count(threads);
  return threads == 1 ? Execution::serial : Execution::parallel;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  return ReportFormat::markdown;
}

const std::map<std::string, ResampleOp> kUpsampleMethods = {
    {"bicubic", ResampleOp::bicubic}, {"bilinear", ResampleOp::bilinear}, {"nearest", ResampleOp::nearest}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wind-field downscaling evaluation harness"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (1 = serial reference path, 0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  // synth
  SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate Gaussian random wind fields with a power-law spectrum");
  synth->add_option("--rows", synth_cfg.rows)->default_val(32);
  synth->add_option("--cols", synth_cfg.cols)->default_val(32);
  synth->add_option("--slope", synth_cfg.slope, "Radial spectrum exponent (<= 0)")->default_val(-3.0);
  synth->add_option("--seed", synth_cfg.seed)->default_val(0);
  synth->add_option("--count", synth_cfg.count)->default_val(1);
  synth->add_option("--dt", synth_cfg.dt_seconds, "Time step in seconds")->default_val(3600);
  synth->add_option("--start", synth_cfg.start_timestamp, "First timestamp (seconds since epoch)");
  synth->add_option("--spacing-km", synth_cfg.spacing_km);
  synth->add_option("--out", synth_out, "Output dataset directory")->required();

  // coarsen
  std::string coarsen_in, coarsen_out, coarsen_target;
  std::size_t coarsen_factor = 4;
  auto* coarsen = app.add_subcommand("coarsen", "Decimate a dataset, or regrid it onto another dataset's grid");
  coarsen->add_option("--in", coarsen_in)->required();
  coarsen->add_option("--out", coarsen_out)->required();
  auto* coarsen_factor_opt = coarsen->add_option("--factor", coarsen_factor, "Decimation factor")->default_val(4);
  coarsen->add_option("--target", coarsen_target,
                      "Regrid by nearest neighbour onto this dataset's grid (decimated by --factor if given)");

  // upsample
  std::string up_in, up_out, up_method = "bicubic";
  std::size_t up_factor = 4;
  auto* upsample = app.add_subcommand("upsample", "Interpolate a dataset onto a finer grid");
  upsample->add_option("--in", up_in)->required();
  upsample->add_option("--out", up_out)->required();
  upsample->add_option("method,--method", up_method)->check(CLI::IsMember({"bicubic", "bilinear", "nearest"}));
  upsample->add_option("--factor", up_factor)->default_val(4);

  // build-task
  std::string bt_task, bt_src, bt_aux, bt_lr, bt_hr, bt_patch, bt_stats_from;
  std::size_t bt_factor = 4;
  auto* build = app.add_subcommand("build-task", "Build low/high-resolution dataset pairs");
  build->add_option("--task", bt_task)->required()->check(CLI::IsMember({"sr", "dsc"}));
  build->add_option("--src", bt_src, "Source dataset (native ERA5-like fields)")->required();
  build->add_option("--aux", bt_aux, "High-resolution target dataset (downscaling only)");
  build->add_option("--lr-out", bt_lr)->required();
  build->add_option("--hr-out", bt_hr)->required();
  build->add_option("--patch", bt_patch, "row0,col0,height,width applied to the high-resolution fields");
  build->add_option("--factor", bt_factor)->default_val(4);
  build->add_option("--stats-from", bt_stats_from, "Copy normalisation stats for the hr dataset from this dataset");

  // evaluate
  std::vector<std::string> ev_preds, ev_points;
  std::string ev_ref, ev_melr_mode = "mean", ev_melr_source = "speed", ev_format = "md", ev_out, ev_curve;
  EvalConfig ev_cfg;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score prediction datasets against a reference");
  evaluate_cmd->add_option("--pred", ev_preds, "[model=]DIR; repeat a model name to average several sets")
      ->required();
  evaluate_cmd->add_option("--ref", ev_ref)->required();
  evaluate_cmd->add_option("--point", ev_points, "lat,lon grid point for Wasserstein and power (repeatable)");
  evaluate_cmd->add_option("--random-points", ev_cfg.random_points, "Seeded random points when no --point given")
      ->default_val(1);
  evaluate_cmd->add_option("--seed", ev_cfg.seed)->default_val(0);
  evaluate_cmd->add_option("--melr-mode", ev_melr_mode)->check(CLI::IsMember({"mean", "sum"}));
  evaluate_cmd->add_option("--melr-source", ev_melr_source)->check(CLI::IsMember({"speed", "channels"}));
  evaluate_cmd->add_option("--log-base", ev_cfg.melr_log_base, "Logarithm base for MELR (default natural)");
  evaluate_cmd->add_option("--peak", ev_cfg.metric.peak)->default_val(1.0);
  evaluate_cmd->add_option("--format", ev_format)->check(CLI::IsMember({"json", "csv", "md"}));
  evaluate_cmd->add_flag("--per-sample", ev_cfg.per_sample, "Include per-sample metrics in JSON output");
  evaluate_cmd->add_option("--curve", ev_curve, "Power curve JSON (default: built-in Enercon E92/2350)");
  evaluate_cmd->add_option("--out", ev_out);

  // power
  std::string pw_series, pw_curve, pw_point, pw_out, pw_speed_out, pw_density_out;
  auto* power = app.add_subcommand("power", "Cumulative power at a grid point");
  power->add_option("--series", pw_series, "Dataset directory")->required();
  power->add_option("--curve", pw_curve, "Power curve JSON (default: built-in Enercon E92/2350)");
  power->add_option("--point", pw_point, "lat,lon")->required();
  power->add_option("--out", pw_out, "PowerSeries CSV");
  power->add_option("--speed-out", pw_speed_out, "Point speed series CSV");
  power->add_option("--density-out", pw_density_out, "KDE of the point speeds (Scott bandwidth)");

  // spectrum
  std::string sp_in, sp_out, sp_channel = "speed";
  auto* spectrum = app.add_subcommand("spectrum", "Dataset-average RAPSD as CSV");
  spectrum->add_option("--in", sp_in)->required();
  spectrum->add_option("--channel", sp_channel)->check(CLI::IsMember({"speed", "u", "v"}));
  spectrum->add_option("--out", sp_out);

  // report
  std::string rp_in, rp_format = "md", rp_out;
  auto* report = app.add_subcommand("report", "Re-emit a JSON report in another format");
  report->add_option("--in", rp_in)->required();
  report->add_option("--format", rp_format)->check(CLI::IsMember({"json", "csv", "md"}));
  report->add_option("--out", rp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const Execution exec = execution_for(threads);

    if (*synth) {
      write_dataset(synth_out, synth_grf(synth_cfg, exec));
    } else if (*coarsen) {
      const FieldSeries src = Dataset::open(coarsen_in).load_all();
      if (coarsen_target.empty()) {
        write_dataset(coarsen_out, resample(src, ResampleOp::decimate, ResampleFactor(coarsen_factor), exec));
      } else {
        GridSpec target = Dataset::open(coarsen_target).grid();
        if (coarsen_factor_opt->count() > 0) target = decimate_grid(target, ResampleFactor(coarsen_factor));
        write_dataset(coarsen_out, regrid(src, target, exec));
      }
    } else if (*upsample) {
      const Dataset in = Dataset::open(up_in);
      write_dataset(up_out, resample(in.load_all(), kUpsampleMethods.at(up_method), ResampleFactor(up_factor), exec),
                    in.manifest().stats);
    } else if (*build) {
      const FieldSeries src = Dataset::open(bt_src).load_all();
      std::optional<FieldSeries> aux;
      if (!bt_aux.empty()) aux = Dataset::open(bt_aux).load_all();
      std::optional<Patch> patch;
      if (!bt_patch.empty()) patch = parse_patch(bt_patch);
      const TaskKind kind = bt_task == "sr" ? TaskKind::super_resolution : TaskKind::downscaling;
      const TaskData data = build_task(src, kind, aux ? &*aux : nullptr, patch, bt_factor, exec);
      std::optional<NormStats> hr_stats;
      if (!bt_stats_from.empty()) {
        hr_stats = Dataset::open(bt_stats_from).manifest().stats;
        if (!hr_stats) fail("degenerate-range", bt_stats_from + " carries no stats");
      }
      write_dataset(bt_lr, data.lr);
      write_dataset(bt_hr, data.hr, hr_stats);
    } else if (*evaluate_cmd) {
      ev_cfg.exec = exec;
      ev_cfg.melr_mode = ev_melr_mode == "sum" ? MelrMode::sum : MelrMode::mean;
      ev_cfg.melr_source = ev_melr_source == "channels" ? MelrSource::channels : MelrSource::speed;
      if (!ev_curve.empty()) ev_cfg.curve = load_power_curve(ev_curve);
      for (const auto& p : ev_points) ev_cfg.points.push_back(parse_point(p));

      std::vector<ModelInput> models;
      for (const auto& spec : ev_preds) {
        const auto eq = spec.find('=');
        const std::string dir = eq == std::string::npos ? spec : spec.substr(eq + 1);
        std::string name = eq == std::string::npos ? fs::path(dir).filename().string() : spec.substr(0, eq);
        if (name.empty()) name = fs::path(dir).parent_path().filename().string();
        auto it = std::find_if(models.begin(), models.end(), [&](const ModelInput& m) { return m.name == name; });
        if (it == models.end()) {
          models.push_back({name, {}});
          it = models.end() - 1;
        }
        it->datasets.emplace_back(dir);
      }
      const EvalReport rep = windeval::evaluate(models, ev_ref, ev_cfg);
      write_output(ev_out, emit_report(rep, parse_format(ev_format)));
    } else if (*power) {
      const FieldSeries series = Dataset::open(pw_series).load_all();
      const PowerCurve curve = pw_curve.empty() ? enercon_e92_2350() : load_power_curve(pw_curve);
      const GeoPoint pt = parse_point(pw_point);
      const auto speeds = extract_point_series(series, pt.lat, pt.lon);
      const PowerSeries ps = cumulative_power(speeds, curve, static_cast<double>(series.dt()) / 3600.0);
      if (!pw_speed_out.empty()) write_point_series_csv(pw_speed_out, speeds);
      if (!pw_density_out.empty()) {
        std::vector<double> xs;
        for (const auto& s : speeds) xs.push_back(s.speed_ms);
        const double h = scott_bandwidth(xs);
        write_density_csv(pw_density_out, kde(xs, default_speed_grid(xs, h), h));
      }
      if (!pw_out.empty()) {
        write_power_series_csv(pw_out, ps);
      } else {
        std::printf("final_cumulative_kwh,%.12g\n", ps.cumulative_kwh.empty() ? 0.0 : ps.cumulative_kwh.back());
      }
    } else if (*spectrum) {
      const Dataset in = Dataset::open(sp_in);
      std::vector<Rapsd> spectra(in.size());
      for_each_index(exec, in.size(), [&](std::size_t i) {
        const VelocitySample s = in.sample(i);
        spectra[i] = rapsd(sp_channel == "u" ? s.u : sp_channel == "v" ? s.v : wind_speed(s));
      });
      const Rapsd avg = average_rapsd(spectra);
      if (sp_out.empty()) sp_out = "/dev/stdout";
      write_rapsd_csv(sp_out, avg);
    } else if (*report) {
      write_output(rp_out, emit_report(parse_report_json(read_text(rp_in)), parse_format(rp_format)));
    }
  } catch (const Error& e) {
    std::cerr << "windeval: " << e.what() << '\n';
    return e.kind() == ErrorKind::io ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "windeval: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
