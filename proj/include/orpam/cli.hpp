#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "orpam/error.hpp"
#include "orpam/io.hpp"
#include "orpam/metrics.hpp"
#include "orpam/synth.hpp"

// Command implementations behind the `orpam` executable. Kept in the library
// so tests drive exactly what the binary runs.
namespace orpam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailedAscans = 3;

int exit_code_for(const Error& e);

struct SynthOptions {
  std::string preset = "thin-film";
  std::filesystem::path out;
  ThinFilmParams params;
  TransducerModel model;
  io::SampleType dtype = io::SampleType::kFloat32;
};

/// Writes the volume and returns the scene description.
nlohmann::json run_synth(const SynthOptions& opt);

struct ReconstructResult {
  nlohmann::json manifest;
  int exit_code = kExitOk;
};

/// Sidecar paths derived from the output volume path.
std::filesystem::path manifest_path(const std::filesystem::path& out);
std::filesystem::path envelope_path(const std::filesystem::path& out);

/// Reads cfg.input_path, reconstructs, writes cfg.output_path (plus the
/// envelope sidecar for output = both) and the JSON manifest. dtype defaults
/// to the input file's sample type. Exit code 3 when more than 1% of the
/// A-scans fail.
ReconstructResult run_reconstruct(const io::RunConfig& cfg, std::optional<io::SampleType> dtype = std::nullopt);

enum class InputKind { kAuto, kRf, kEnvelope };
InputKind parse_input_kind(const std::string& s);

struct MetricsOptions {
  std::filesystem::path in;
  std::optional<std::size_t> x;
  std::optional<std::size_t> y;
  std::optional<std::filesystem::path> compare;
  InputKind input_kind = InputKind::kAuto;
  ProfileOptions profile;
};

nlohmann::json run_metrics(const MetricsOptions& opt);

}  // namespace orpam::cli
