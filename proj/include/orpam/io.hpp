#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "orpam/metrics.hpp"
#include "orpam/pipeline.hpp"
#include "orpam/types.hpp"

namespace orpam::io {

// ---------------------------------------------------------------------------
// Volume files (.orpa)
//
//   offset  size  field
//        0     4  magic "ORPA"
//        4     2  version (uint16, = 1)
//        6     4  nx (uint32)
//       10     4  ny (uint32)
//       14     4  nt (uint32)
//       18     8  fs, Hz (float64)
//       26     8  lateral pitch, m (float64)
//       34     1  dtype (uint8): 0 = float32, 1 = float64
//       35        payload, nx*ny*nt samples, x fastest then y, time innermost
//
// Every multi-byte field is little-endian regardless of host.
// ---------------------------------------------------------------------------

enum class SampleType : std::uint8_t { kFloat32 = 0, kFloat64 = 1 };

inline constexpr std::array<char, 4> kMagic{'O', 'R', 'P', 'A'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 35;

struct VolumeFileHeader {
  std::uint16_t version = kVersion;
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t nt = 0;
  double fs = 0.0;
  double pitch = 0.0;
  SampleType dtype = SampleType::kFloat32;

  std::size_t sample_bytes() const { return dtype == SampleType::kFloat64 ? 8 : 4; }
  std::size_t payload_bytes() const {
    return static_cast<std::size_t>(nx) * ny * nt * sample_bytes();
  }
};

SampleType parse_sample_type(std::string_view s);
const char* to_string(SampleType t);

std::vector<std::uint8_t> encode_volume(const Volume& v, SampleType dtype);
Volume decode_volume(std::span<const std::uint8_t> bytes, VolumeFileHeader* header = nullptr);
VolumeFileHeader decode_header(std::span<const std::uint8_t> bytes);

void write_volume(const std::filesystem::path& path, const Volume& v, SampleType dtype = SampleType::kFloat32);
Volume read_volume(const std::filesystem::path& path, VolumeFileHeader* header = nullptr);
VolumeFileHeader read_header(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run configuration: UTF-8 `key = value` lines, `#` starts a comment.
// ---------------------------------------------------------------------------

struct RunConfig {
  ReconstructionConfig recon;
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Documented keys and their defaults, in file order.
std::vector<std::pair<std::string, std::string>> run_config_keys();

/// Applies `key = value` lines on top of `base`. Unknown keys, duplicate
/// keys and malformed values throw kParameter naming the line.
RunConfig parse_run_config(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
std::string format_run_config(const RunConfig& c);

nlohmann::json to_json(const ReconstructionConfig& c);
nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const AxialProfileReport& r);

/// Worker count from ORPAM_WORKERS, else the hardware concurrency.
std::size_t default_worker_count();

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace orpam::io
