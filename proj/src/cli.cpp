#include "orpam/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "orpam/simd/kernels.hpp"
#include "orpam/transforms.hpp"

namespace orpam::cli {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kIo:
    case ErrorCode::kFormat:
      return kExitIo;
    case ErrorCode::kReconstructionFailed:
      return kExitFailedAscans;
    default:
      return kExitUsage;
  }
}

nlohmann::json run_synth(const SynthOptions& opt) {
  if (opt.preset != "thin-film")
    throw Error(ErrorCode::kParameter, "unknown preset '" + opt.preset + "' (thin-film)");
  const Volume v = synth_thin_film_volume(opt.model, opt.params);
  io::write_volume(opt.out, v, opt.dtype);

  const ThinFilmParams& p = opt.params;
  nlohmann::json taps = nlohmann::json::array();
  for (const auto& t : p.interference_taps) taps.push_back({{"delay_s", t.delay}, {"amplitude", t.amplitude}});
  return {
      {"preset", opt.preset},
      {"out", opt.out.string()},
      {"dims", {p.nx, p.ny, p.nt}},
      {"sampling_rate", p.sampling_rate},
      {"sound_speed", p.sound_speed},
      {"pitch_m", p.pitch},
      {"dtype", io::to_string(opt.dtype)},
      {"transducer",
       {{"center_frequency", opt.model.center_frequency},
        {"fractional_bandwidth", opt.model.fractional_bandwidth},
        {"sigma_t", opt.model.sigma_t()}}},
      {"reflectors", {{{"depth_m", p.film_depth}, {"amplitude", 1.0}}}},
      {"interference_taps", taps},
      {"noise_rms", p.noise_rms},
      {"seed", p.seed},
  };
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

std::filesystem::path envelope_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".orpa");
  p.replace_extension();
  return std::filesystem::path(p.string() + ".env" + ext);
}

ReconstructResult run_reconstruct(const io::RunConfig& cfg, std::optional<io::SampleType> dtype) {
  if (cfg.input_path.empty()) throw Error(ErrorCode::kParameter, "--in is required");
  if (cfg.output_path.empty()) throw Error(ErrorCode::kParameter, "--out is required");
  if (cfg.workers < 1) throw Error(ErrorCode::kParameter, "--workers must be >= 1");
  cfg.recon.validate();

  io::VolumeFileHeader header;
  const Volume in = io::read_volume(cfg.input_path, &header);
  const io::SampleType out_type = dtype.value_or(header.dtype);

  const auto t0 = std::chrono::steady_clock::now();
  const VolumeReconstruction rec = reconstruct_volume(in, cfg.recon, cfg.workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path out(cfg.output_path);
  std::optional<std::filesystem::path> env_out;
  switch (cfg.recon.output) {
    case OutputKind::kRf: io::write_volume(out, rec.rf, out_type); break;
    case OutputKind::kEnvelope: io::write_volume(out, rec.envelope, out_type); break;
    case OutputKind::kBoth:
      io::write_volume(out, rec.rf, out_type);
      env_out = envelope_path(out);
      io::write_volume(*env_out, rec.envelope, out_type);
      break;
  }

  // Resolved band geometry, identical for every A-scan of the volume.
  nlohmann::json band;
  try {
    const Spectrum probe{CVector::Zero(static_cast<Eigen::Index>(in.nt)), in.sampling_rate};
    const PassbandSpectrum p = band_for(probe, cfg.recon);
    band = {{"first_bin", p.bin_indices.front()},
            {"last_bin", p.bin_indices.back()},
            {"bins", p.size()},
            {"subband_length", cfg.recon.method == Method::kUniform ? p.size() : resolve_subband_length(cfg.recon, p.size())}};
  } catch (const Error& e) {
    band = {{"error", e.what()}};
  }

  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : rec.failures) failures.push_back({{"x", f.ix}, {"y", f.iy}, {"error", f.message}});

  const std::size_t total = in.ascan_count();
  const bool too_many = static_cast<double>(rec.failures.size()) > kMaxFailedSampleFraction * static_cast<double>(total);

  ReconstructResult result;
  result.exit_code = too_many ? kExitFailedAscans : kExitOk;
  result.manifest = {
      {"command", "reconstruct"},
      {"status", too_many ? "failed" : "ok"},
      {"config", io::to_json(cfg)},
      {"config_text", io::format_run_config(cfg)},
      {"output_dtype", io::to_string(out_type)},
      {"envelope_path", env_out ? nlohmann::json(env_out->string()) : nlohmann::json(nullptr)},
      {"input", {{"nx", in.nx}, {"ny", in.ny}, {"nt", in.nt}, {"sampling_rate", in.sampling_rate}, {"dtype", io::to_string(header.dtype)}}},
      {"band", band},
      {"simd", std::string(simd::active_kernels().name)},
      {"timing_s", seconds},
      {"ascans", total},
      {"failed_ascans", failures},
      {"failed_samples", rec.failed_samples},
  };
  io::write_text(manifest_path(out), result.manifest.dump(2) + "\n");
  return result;
}

InputKind parse_input_kind(const std::string& s) {
  if (s == "auto") return InputKind::kAuto;
  if (s == "rf") return InputKind::kRf;
  if (s == "envelope") return InputKind::kEnvelope;
  throw Error(ErrorCode::kParameter, "unknown input kind '" + s + "' (auto|rf|envelope)");
}

namespace {

std::vector<double> envelope_of(const Volume& v, std::size_t ix, std::size_t iy, InputKind kind) {
  const auto t = v.trace(ix, iy);
  bool is_envelope = kind == InputKind::kEnvelope;
  // A real band-pass RF trace has zero mean, so it dips below zero unless it
  // is identically zero; an all-nonnegative trace is taken as an envelope.
  if (kind == InputKind::kAuto) is_envelope = std::all_of(t.begin(), t.end(), [](double s) { return s >= 0.0; });
  if (is_envelope) return {t.begin(), t.end()};
  return envelope(v.ascan(ix, iy));
}

double delta(double a, double b) {
  if (a == b) return 0.0;  // includes -inf == -inf
  return a - b;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json run_metrics(const MetricsOptions& opt) {
  const Volume v = io::read_volume(opt.in);
  std::optional<Volume> base;
  if (opt.compare) {
    base = io::read_volume(*opt.compare);
    if (base->nx != v.nx || base->ny != v.ny)
      throw Error(ErrorCode::kParameter, "--compare volume has different lateral dimensions");
  }
  if (opt.x && *opt.x >= v.nx) throw Error(ErrorCode::kParameter, "--x " + std::to_string(*opt.x) + " out of range [0, " + std::to_string(v.nx) + ")");
  if (opt.y && *opt.y >= v.ny) throw Error(ErrorCode::kParameter, "--y " + std::to_string(*opt.y) + " out of range [0, " + std::to_string(v.ny) + ")");

  const std::size_t x0 = opt.x.value_or(0), x1 = opt.x ? *opt.x + 1 : v.nx;
  const std::size_t y0 = opt.y.value_or(0), y1 = opt.y ? *opt.y + 1 : v.ny;

  nlohmann::json reports = nlohmann::json::array();
  std::vector<double> fwhms;
  for (std::size_t iy = y0; iy < y1; ++iy) {
    for (std::size_t ix = x0; ix < x1; ++ix) {
      nlohmann::json j{{"x", ix}, {"y", iy}};
      try {
        const auto env = envelope_of(v, ix, iy, opt.input_kind);
        const AxialProfileReport r = axial_profile(env, v.sampling_rate, opt.profile);
        j.update(io::to_json(r));
        fwhms.push_back(r.fwhm_um);
        if (base) {
          const auto benv = envelope_of(*base, ix, iy, opt.input_kind);
          const AxialProfileReport b = axial_profile(benv, base->sampling_rate, opt.profile);
          j["compare"] = {
              {"base_fwhm_um", b.fwhm_um},
              {"delta_fwhm_um", delta(r.fwhm_um, b.fwhm_um)},
              {"base_noise_floor_db", finite_or_null(b.noise_floor_db)},
              {"delta_noise_floor_db", finite_or_null(delta(r.noise_floor_db, b.noise_floor_db))},
              {"improvement_factor", b.fwhm_um / r.fwhm_um},
          };
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kIo || e.code() == ErrorCode::kFormat) throw;
        j["error"] = e.what();
      }
      reports.push_back(std::move(j));
    }
  }

  nlohmann::json summary{{"ascans", reports.size()}, {"measured", fwhms.size()}};
  if (!fwhms.empty()) {
    std::vector<double> s = fwhms;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    summary["median_fwhm_um"] = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
  }
  return {{"file", opt.in.string()}, {"sampling_rate", v.sampling_rate}, {"reports", reports}, {"summary", summary}};
}

}  // namespace orpam::cli
