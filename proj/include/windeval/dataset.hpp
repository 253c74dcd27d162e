#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "windeval/grid.hpp"

namespace windeval {

// Raw contents of one WFB1 file: magic "WFB1", little-endian u32 rows, cols,
// channels (=2), then channels*rows*cols little-endian float32, u first.
struct WfbFrame {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<float> u;
  std::vector<float> v;
};

WfbFrame read_wfb(const std::filesystem::path& path);
void write_wfb(const std::filesystem::path& path, const WfbFrame& frame);

struct SampleEntry {
  std::string file;
  std::int64_t timestamp = 0;
};

struct Manifest {
  GridSpec grid;
  std::int64_t dt_seconds = 3600;
  std::optional<NormStats> stats;
  std::vector<SampleEntry> samples;
};

Manifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);

// A dataset directory opened lazily: samples are read one at a time so a
// year of high-resolution fields never has to be resident at once. Entries
// are kept sorted by timestamp regardless of manifest order.
class Dataset {
 public:
  static Dataset open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const Manifest& manifest() const noexcept { return manifest_; }
  const GridSpec& grid() const noexcept { return manifest_.grid; }
  std::size_t size() const noexcept { return manifest_.samples.size(); }
  std::int64_t timestamp(std::size_t i) const { return manifest_.samples.at(i).timestamp; }

  VelocitySample sample(std::size_t i) const;
  FieldSeries load_all() const;

 private:
  std::filesystem::path dir_;
  Manifest manifest_;
};

// Writes one WFB1 file per sample plus manifest.json. When `stats` is empty
// they are computed from the series itself; a constant channel leaves them
// unset.
void write_dataset(const std::filesystem::path& dir, const FieldSeries& series,
                   std::optional<NormStats> stats = std::nullopt);

void write_point_series_csv(const std::filesystem::path& path, const std::vector<SpeedPoint>& series);

}  // namespace windeval
