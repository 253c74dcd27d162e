#include "windeval/dataset.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "windeval/error.hpp"

namespace windeval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<unsigned char, 4> kMagic = {0x57, 0x46, 0x42, 0x31};

void put_u32(std::vector<unsigned char>& out, std::uint32_t x) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((x >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<unsigned char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

WfbFrame read_wfb(const fs::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 16 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
    fail("bad-wfb", path.string() + " is not a WFB1 file");

  WfbFrame frame;
  frame.rows = get_u32(bytes.data() + 4);
  frame.cols = get_u32(bytes.data() + 8);
  const std::uint32_t channels = get_u32(bytes.data() + 12);
  if (channels != 2) fail("bad-wfb", "expected 2 channels");
  const std::size_t cells = static_cast<std::size_t>(frame.rows) * frame.cols;
  if (bytes.size() != 16 + channels * cells * 4) fail("bad-wfb", path.string() + " has the wrong payload size");

  const unsigned char* p = bytes.data() + 16;
  auto read_channel = [&](std::vector<float>& dst) {
    dst.resize(cells);
    for (std::size_t i = 0; i < cells; ++i, p += 4) dst[i] = std::bit_cast<float>(get_u32(p));
  };
  read_channel(frame.u);
  read_channel(frame.v);
  return frame;
}

void write_wfb(const fs::path& path, const WfbFrame& frame) {
  const std::size_t cells = static_cast<std::size_t>(frame.rows) * frame.cols;
  if (frame.u.size() != cells || frame.v.size() != cells) fail("shape-mismatch", "frame channel sizes");

  std::vector<unsigned char> out(kMagic.begin(), kMagic.end());
  out.reserve(16 + 8 * cells);
  put_u32(out, frame.rows);
  put_u32(out, frame.cols);
  put_u32(out, 2);
  for (float x : frame.u) put_u32(out, std::bit_cast<std::uint32_t>(x));
  for (float x : frame.v) put_u32(out, std::bit_cast<std::uint32_t>(x));

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail_io("cannot write " + path.string());
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) fail_io("short write to " + path.string());
}

namespace {

json grid_to_json(const GridSpec& g) {
  return {{"rows", g.rows},         {"cols", g.cols},         {"lat_origin", g.lat_origin},
          {"lon_origin", g.lon_origin}, {"lat_step", g.lat_step}, {"lon_step", g.lon_step},
          {"spacing_km", g.spacing_km}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  g.rows = j.at("rows").get<std::size_t>();
  g.cols = j.at("cols").get<std::size_t>();
  g.lat_origin = j.at("lat_origin").get<double>();
  g.lon_origin = j.at("lon_origin").get<double>();
  g.lat_step = j.at("lat_step").get<double>();
  g.lon_step = j.at("lon_step").get<double>();
  g.spacing_km = j.at("spacing_km").get<double>();
  g.validate();
  return g;
}

}  // namespace

Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) fail_io("missing manifest " + path.string());

  Manifest m;
  try {
    const json j = json::parse(in);
    if (j.value("format", std::string("WFB1")) != "WFB1") fail("invalid-manifest", "unsupported format");
    m.grid = grid_from_json(j.at("grid"));
    m.dt_seconds = j.at("dt_seconds").get<std::int64_t>();
    if (j.contains("stats") && !j.at("stats").is_null()) {
      const json& s = j.at("stats");
      NormStats st;
      st.u_min = s.at("u_min").get<double>();
      st.u_max = s.at("u_max").get<double>();
      st.v_min = s.at("v_min").get<double>();
      st.v_max = s.at("v_max").get<double>();
      st.u_mean = s.at("u_mean").get<double>();
      st.v_mean = s.at("v_mean").get<double>();
      st.validate();
      m.stats = st;
    }
    for (const json& e : j.at("samples"))
      m.samples.push_back({e.at("file").get<std::string>(), e.at("timestamp").get<std::int64_t>()});
  } catch (const json::exception& e) {
    fail("invalid-manifest", path.string() + ": " + e.what());
  }
  if (m.dt_seconds <= 0) fail("invalid-manifest", "dt_seconds must be positive");
  return m;
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  json samples = json::array();
  for (const auto& e : m.samples) samples.push_back({{"file", e.file}, {"timestamp", e.timestamp}});
  json stats = nullptr;
  if (m.stats)
    stats = {{"u_min", m.stats->u_min}, {"u_max", m.stats->u_max},   {"v_min", m.stats->v_min},
             {"v_max", m.stats->v_max}, {"u_mean", m.stats->u_mean}, {"v_mean", m.stats->v_mean}};
  const json j = {{"format", "WFB1"},
                  {"grid", grid_to_json(m.grid)},
                  {"dt_seconds", m.dt_seconds},
                  {"stats", stats},
                  {"samples", samples}};

  std::ofstream os(dir / "manifest.json", std::ios::trunc);
  if (!os) fail_io("cannot write manifest in " + dir.string());
  os << j.dump(2) << '\n';
}

Dataset Dataset::open(const fs::path& dir) {
  Dataset ds;
  ds.dir_ = dir;
  ds.manifest_ = read_manifest(dir);
  auto& entries = ds.manifest_.samples;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SampleEntry& a, const SampleEntry& b) { return a.timestamp < b.timestamp; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].timestamp - entries[i - 1].timestamp != ds.manifest_.dt_seconds)
      fail("time-misalignment", dir.string() + ": timestamps are not uniformly spaced by dt_seconds");
  return ds;
}

VelocitySample Dataset::sample(std::size_t i) const {
  const SampleEntry& e = manifest_.samples.at(i);
  const WfbFrame frame = read_wfb(dir_ / e.file);
  if (frame.rows != grid().rows || frame.cols != grid().cols)
    fail("shape-mismatch", e.file + " does not match the manifest grid");
  return VelocitySample(Field2D(grid(), std::vector<double>(frame.u.begin(), frame.u.end())),
                        Field2D(grid(), std::vector<double>(frame.v.begin(), frame.v.end())), e.timestamp);
}

FieldSeries Dataset::load_all() const {
  std::vector<VelocitySample> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(sample(i));
  return FieldSeries(std::move(out), manifest_.dt_seconds);
}

void write_dataset(const fs::path& dir, const FieldSeries& series, std::optional<NormStats> stats) {
  if (series.empty()) fail("empty-series", "refusing to write an empty dataset");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail_io("cannot create " + dir.string() + ": " + ec.message());

  if (!stats) {
    try {
      stats = compute_stats(series);
    } catch (const Error& e) {
      if (e.code() != "degenerate-range") throw;
    }
  }

  Manifest m;
  m.grid = series.grid();
  m.dt_seconds = series.dt();
  m.stats = stats;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const VelocitySample& s = series.samples()[i];
    char name[32];
    std::snprintf(name, sizeof name, "s%06zu.wfb", i);
    WfbFrame frame;
    frame.rows = static_cast<std::uint32_t>(s.u.rows());
    frame.cols = static_cast<std::uint32_t>(s.u.cols());
    frame.u.assign(s.u.values().begin(), s.u.values().end());
    frame.v.assign(s.v.values().begin(), s.v.values().end());
    write_wfb(dir / name, frame);
    m.samples.push_back({name, s.timestamp});
  }
  write_manifest(dir, m);
}

void write_point_series_csv(const fs::path& path, const std::vector<SpeedPoint>& series) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail_io("cannot write " + path.string());
  char buf[64];
  os << "timestamp,speed_ms\n";
  for (const auto& p : series) {
    std::snprintf(buf, sizeof buf, "%.9g", p.speed_ms);
    os << p.timestamp << ',' << buf << '\n';
  }
}

}  // namespace windeval
