// orpam: synthesize thin-film volumes, reconstruct them, measure axial profiles.
//
// exit codes: 0 ok, 1 I/O or file format, 2 bad arguments or parameters,
// 3 more than 1% of A-scans failed to reconstruct.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "orpam/cli.hpp"
#include "orpam/io.hpp"

namespace {

using namespace orpam;

struct SynthArgs {
  std::string preset = "thin-film";
  std::string out;
  std::size_t nx = 16, ny = 16, nt = SynthDefaults::kSamples;
  double depth_um = SynthDefaults::kFilmDepth * 1e6;
  double noise_rms = SynthDefaults::kNoiseRms;
  double pitch_um = SynthDefaults::kPitch * 1e6;
  double fs = SynthDefaults::kSamplingRate;
  std::uint64_t seed = 1;
  bool no_taps = false;
  std::string dtype = "f32";
};

struct ReconArgs {
  std::string in, out, config, method, output, dtype;
  std::size_t workers = 0, oversample = 1;
  double f_lo = 0, f_hi = 0;
  bool full_band = false;
  bool direct = false;
};

struct MetricsArgs {
  std::string in, compare, input_kind = "auto";
  std::size_t x = 0, y = 0, noise_begin = 0, noise_end = 0;
  double sound_speed = 1500.0;
};

int do_synth(const SynthArgs& a) {
  cli::SynthOptions o;
  o.preset = a.preset;
  o.out = a.out;
  o.params.nx = a.nx;
  o.params.ny = a.ny;
  o.params.nt = a.nt;
  o.params.film_depth = a.depth_um * 1e-6;
  o.params.noise_rms = a.noise_rms;
  o.params.pitch = a.pitch_um * 1e-6;
  o.params.sampling_rate = a.fs;
  o.params.seed = a.seed;
  if (a.no_taps) o.params.interference_taps.clear();
  o.dtype = io::parse_sample_type(a.dtype);
  std::cout << cli::run_synth(o).dump(2) << "\n";
  return cli::kExitOk;
}

int do_reconstruct(const ReconArgs& a, const CLI::App& sub) {
  io::RunConfig cfg;
  cfg.workers = io::default_worker_count();
  if (!a.config.empty()) cfg = io::load_run_config(a.config, cfg);
  // flags given on the command line win over the config file
  if (sub.count("--in")) cfg.input_path = a.in;
  if (sub.count("--out")) cfg.output_path = a.out;
  if (sub.count("--method")) cfg.recon.method = parse_method(a.method);
  if (sub.count("--output")) cfg.recon.output = parse_output_kind(a.output);
  if (sub.count("--workers")) cfg.workers = a.workers;
  if (sub.count("--oversample")) cfg.recon.oversample = a.oversample;
  if (sub.count("--f-lo")) cfg.recon.f_lo = a.f_lo;
  if (sub.count("--f-hi")) cfg.recon.f_hi = a.f_hi;
  if (sub.count("--full-band")) cfg.recon.full_band = true;
  if (sub.count("--direct")) cfg.recon.covariance_reuse = false;

  std::optional<io::SampleType> dtype;
  if (!a.dtype.empty()) dtype = io::parse_sample_type(a.dtype);
  const cli::ReconstructResult r = cli::run_reconstruct(cfg, dtype);
  if (r.exit_code != cli::kExitOk)
    std::cerr << "orpam: " << r.manifest["failed_ascans"].size() << " of " << r.manifest["ascans"]
              << " A-scans failed, see " << cli::manifest_path(cfg.output_path).string() << "\n";
  return r.exit_code;
}

int do_metrics(const MetricsArgs& a, const CLI::App& sub) {
  cli::MetricsOptions o;
  o.in = a.in;
  if (sub.count("--x")) o.x = a.x;
  if (sub.count("--y")) o.y = a.y;
  if (!a.compare.empty()) o.compare = a.compare;
  o.input_kind = cli::parse_input_kind(a.input_kind);
  o.profile.sound_speed = a.sound_speed;
  if (sub.count("--noise-begin") != sub.count("--noise-end"))
    throw Error(ErrorCode::kParameter, "--noise-begin and --noise-end go together");
  if (sub.count("--noise-begin")) o.profile.noise_window = SampleRange{a.noise_begin, a.noise_end};
  std::cout << cli::run_metrics(o).dump(2) << "\n";
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-domain adaptive axial reconstruction for OR-PAM volumes"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "write a synthetic thin-film volume");
  synth->add_option("--preset", sa.preset, "scene preset")->check(CLI::IsMember({"thin-film"}));
  synth->add_option("--out", sa.out, "output .orpa file")->required();
  synth->add_option("--nx", sa.nx, "A-scans along x")->check(CLI::PositiveNumber);
  synth->add_option("--ny", sa.ny, "A-scans along y")->check(CLI::PositiveNumber);
  synth->add_option("--nt", sa.nt, "samples per A-scan")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 24));
  synth->add_option("--depth-um", sa.depth_um, "film depth in micrometres")->check(CLI::PositiveNumber);
  synth->add_option("--noise-rms", sa.noise_rms, "white noise RMS")->check(CLI::NonNegativeNumber);
  synth->add_option("--pitch-um", sa.pitch_um, "lateral pitch in micrometres")->check(CLI::PositiveNumber);
  synth->add_option("--fs", sa.fs, "sampling rate in Hz")->check(CLI::PositiveNumber);
  synth->add_option("--seed", sa.seed, "noise seed");
  synth->add_flag("--no-taps", sa.no_taps, "drop the interference echoes");
  synth->add_option("--dtype", sa.dtype, "sample type")->check(CLI::IsMember({"f32", "f64"}));

  ReconArgs ra;
  auto* recon = app.add_subcommand("reconstruct", "reconstruct every A-scan of a volume");
  recon->add_option("--in", ra.in, "input .orpa file");
  recon->add_option("--out", ra.out, "output .orpa file");
  recon->add_option("--config", ra.config, "run config file")->check(CLI::ExistingFile);
  recon->add_option("--method", ra.method, "uniform | fmv | feibmv")->check(CLI::IsMember({"uniform", "fmv", "feibmv"}));
  recon->add_option("--output", ra.output, "rf | envelope | both")->check(CLI::IsMember({"rf", "envelope", "both"}));
  recon->add_option("--workers", ra.workers, "worker threads")->check(CLI::PositiveNumber);
  recon->add_option("--oversample", ra.oversample, "output samples per input sample")->check(CLI::Range(1, 64));
  recon->add_option("--f-lo", ra.f_lo, "passband low edge, Hz")->check(CLI::PositiveNumber);
  recon->add_option("--f-hi", ra.f_hi, "passband high edge, Hz")->check(CLI::PositiveNumber);
  recon->add_flag("--full-band", ra.full_band, "use every positive bin below Nyquist");
  recon->add_flag("--direct", ra.direct, "estimate R at every position instead of rotating it");
  recon->add_option("--dtype", ra.dtype, "output sample type (default: input's)")->check(CLI::IsMember({"f32", "f64"}));

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("metrics", "axial FWHM, noise floor and sidelobes");
  metrics->add_option("--in", ma.in, "volume to measure")->required();
  metrics->add_option("--x", ma.x, "single A-scan column");
  metrics->add_option("--y", ma.y, "single A-scan row");
  metrics->add_option("--compare", ma.compare, "baseline volume for deltas");
  metrics->add_option("--input-kind", ma.input_kind, "auto | rf | envelope")->check(CLI::IsMember({"auto", "rf", "envelope"}));
  metrics->add_option("--sound-speed", ma.sound_speed, "m/s")->check(CLI::PositiveNumber);
  metrics->add_option("--noise-begin", ma.noise_begin, "noise window start sample");
  metrics->add_option("--noise-end", ma.noise_end, "noise window end sample (exclusive)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "orpam: " << e.what() << "\n";
    return cli::kExitUsage;
  }

  try {
    if (*synth) return do_synth(sa);
    if (*recon) return do_reconstruct(ra, *recon);
    if (*metrics) return do_metrics(ma, *metrics);
  } catch (const orpam::Error& e) {
    std::cerr << "orpam: " << e.what() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "orpam: " << e.what() << "\n";
    return cli::kExitIo;
  }
  return cli::kExitUsage;
}
