#include "orpam/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "orpam/error.hpp"
#include "orpam/simd/kernels.hpp"
#include "orpam/transforms.hpp"

namespace orpam {

const char* to_string(Method m) {
  switch (m) {
    case Method::kUniform: return "uniform";
    case Method::kFmv: return "fmv";
    case Method::kFeibmv: return "feibmv";
  }
  return "?";
}

const char* to_string(OutputKind k) {
  switch (k) {
    case OutputKind::kRf: return "rf";
    case OutputKind::kEnvelope: return "envelope";
    case OutputKind::kBoth: return "both";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "uniform") return Method::kUniform;
  if (s == "fmv") return Method::kFmv;
  if (s == "feibmv") return Method::kFeibmv;
  throw Error(ErrorCode::kParameter, "unknown method '" + s + "' (uniform|fmv|feibmv)");
}

OutputKind parse_output_kind(const std::string& s) {
  if (s == "rf") return OutputKind::kRf;
  if (s == "envelope") return OutputKind::kEnvelope;
  if (s == "both") return OutputKind::kBoth;
  throw Error(ErrorCode::kParameter, "unknown output '" + s + "' (rf|envelope|both)");
}

void ReconstructionConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kParameter, what); };
  if (!full_band && !(f_lo > 0.0 && f_lo < f_hi)) fail("f_lo and f_hi must satisfy 0 < f_lo < f_hi");
  if (subband_length && *subband_length < 2) fail("subband_length must be >= 2");
  if (!(loading >= 0.0) || !std::isfinite(loading)) fail("loading must be finite and >= 0");
  if (!(subspace_threshold > 0.0 && subspace_threshold <= 1.0)) fail("subspace_threshold must lie in (0, 1]");
  if (fixed_num && *fixed_num < 1) fail("fixed_num must be >= 1");
  if (!(sound_speed > 0.0) || !std::isfinite(sound_speed)) fail("sound_speed must be positive");
  if (oversample < 1 || oversample > 64) fail("oversample must lie in [1, 64]");
}

PassbandSpectrum band_for(const Spectrum& s, const ReconstructionConfig& cfg) {
  return cfg.full_band ? full_passband(s) : select_passband(s, cfg.f_lo, cfg.f_hi);
}

std::size_t resolve_subband_length(const ReconstructionConfig& cfg, std::size_t band_bins) {
  const std::size_t L = cfg.subband_length ? *cfg.subband_length : default_subband_length(band_bins);
  if (L < 2 || L > band_bins) {
    std::ostringstream msg;
    msg << "subband_length " << L << " outside [2, " << band_bins << "]";
    throw Error(ErrorCode::kParameter, msg.str());
  }
  return L;
}

namespace {

std::string at_position(const std::string& what, double n) {
  std::ostringstream msg;
  msg << what << " (at sample " << n << ")";
  return msg.str();
}

ApodizationWeights adaptive_weight(const CovarianceEstimate& R, const ReconstructionConfig& cfg) {
  const SteeringVector d = SteeringVector::ones(R.size());
  ApodizationWeights w = mv_weight(R, d);
  if (cfg.method == Method::kFeibmv) {
    const EigenDecomposition e = eig_hermitian(R);
    w = project_weight(select_signal_subspace(e, cfg.subspace_threshold, cfg.fixed_num), w);
    if (cfg.renormalize_eibmv) w = renormalize(w, d);
  }
  return w;
}

}  // namespace

cdouble reconstruct_sample(const PassbandSpectrum& p, double n, const ReconstructionConfig& cfg) {
  try {
    const CompensatedSpectrum x = phase_compensate(p, n);
    if (cfg.method == Method::kUniform) return uniform_reconstruct(x);
    if (x.entries.isZero(0.0)) return {0.0, 0.0};
    const SnapshotSet snaps = make_snapshots(x, resolve_subband_length(cfg, p.size()));
    const CovarianceEstimate R = estimate_covariance(snaps, {cfg.loading, cfg.forward_backward});
    const ApodizationWeights w = adaptive_weight(R, cfg);
    return apply_weight(w, snaps.mean_snapshot());
  } catch (const Error& e) {
    throw Error(e.code(), at_position(e.what(), n));
  }
}

BandReconstructor::BandReconstructor(const PassbandSpectrum& p, const ReconstructionConfig& cfg)
    : band_(p), cfg_(cfg) {
  if (cfg_.method == Method::kUniform) return;
  length_ = resolve_subband_length(cfg_, band_.size());
  for (std::size_t i = 1; i < band_.bin_indices.size(); ++i) {
    if (band_.bin_indices[i] != band_.bin_indices[i - 1] + 1)
      throw Error(ErrorCode::kParameter, "covariance reuse needs contiguous bins");
  }
  zero_ = band_.bins.isZero(0.0);
  if (zero_) return;

  // R_0: covariance of the uncompensated band (position 0).
  const SnapshotSet snaps(band_.bins, length_);
  const CovarianceEstimate R = estimate_covariance(snaps, {cfg_.loading, cfg_.forward_backward});
  // Solves through the same guard as mv_weight.
  (void)mv_weight(R, SteeringVector::ones(length_));
  llt_.compute(R.matrix);
  if (cfg_.method == Method::kFeibmv) {
    const SignalSubspace s =
        select_signal_subspace(eig_hermitian(R), cfg_.subspace_threshold, cfg_.fixed_num);
    subspace_ = s.basis;
    signal_rank_ = s.rank();
  }
}

cdouble BandReconstructor::at(double n) const {
  const auto K = static_cast<Eigen::Index>(band_.size());
  const double N = static_cast<double>(band_.parent_length);
  if (!(n >= 0.0) || !(n < N)) throw Error(ErrorCode::kParameter, "position outside [0, N)");

  CVector phasor(K);
  for (Eigen::Index m = 0; m < K; ++m) {
    const double phase = 2.0 * std::numbers::pi * band_.bin_indices[static_cast<std::size_t>(m)] * n / N;
    phasor[m] = std::polar(1.0, phase);
  }
  CVector x(K);
  simd::multiply({band_.bins.data(), band_.size()}, {phasor.data(), band_.size()}, {x.data(), band_.size()});
  if (cfg_.method == Method::kUniform) return x.mean();
  if (zero_) return {0.0, 0.0};

  const auto L = static_cast<Eigen::Index>(length_);
  const SnapshotSet snaps(std::move(x), length_);
  const CVector mean = snaps.mean_snapshot();

  // D_n = diag(exp(j 2 pi i n / N)), i < L, relative to the first bin.
  CVector rot(L);
  for (Eigen::Index i = 0; i < L; ++i) rot[i] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) * n / N);

  // R_n^-1 d = D_n R_0^-1 D_n^H d, and D_n^H d = conj(rot).
  const CVector a = rot.conjugate();
  CVector z = llt_.solve(a);
  const double denom = a.dot(z).real();
  z /= denom;
  if (cfg_.method == Method::kFeibmv) {
    const CVector coeff = subspace_.adjoint() * z;
    z = subspace_ * coeff;
    if (cfg_.renormalize_eibmv) {
      // w^H d = z^H D_n^H d = z^H a
      const cdouble response = z.dot(a);
      if (std::abs(response) == 0.0)
        throw Error(ErrorCode::kNoSignal, at_position("weight has no response along the steering vector", n));
      z /= std::conj(response);
    }
  }
  CVector w(L);
  simd::multiply({rot.data(), length_}, {z.data(), length_}, {w.data(), length_});
  return simd::dot_conj({w.data(), length_}, {mean.data(), length_});
}

AScanReconstruction reconstruct_ascan(const AScan& a, const ReconstructionConfig& cfg) {
  cfg.validate();
  const Spectrum spec = forward_dft(a);
  const PassbandSpectrum band = band_for(spec, cfg);
  const std::size_t n_in = a.size();
  const std::size_t n_out = n_in * cfg.oversample;
  const double scale = rf_scale(band.size(), n_in);

  AScanReconstruction out;
  out.sampling_rate = a.sampling_rate() * static_cast<double>(cfg.oversample);
  out.rf.assign(n_out, 0.0);
  out.envelope.assign(n_out, 0.0);

  auto position = [&](std::size_t i) { return static_cast<double>(i) / static_cast<double>(cfg.oversample); };
  auto store = [&](std::size_t i, cdouble y) {
    out.rf[i] = scale * y.real();
    out.envelope[i] = scale * std::abs(y);
  };

  if (cfg.covariance_reuse) {
    std::optional<BandReconstructor> rec;
    try {
      rec.emplace(band, cfg);
    } catch (const Error& e) {
      // A singular R_0 fails every position alike.
      throw Error(e.code() == ErrorCode::kParameter ? e.code() : ErrorCode::kReconstructionFailed,
                  std::string("all samples failed: ") + e.what());
    }
    for (std::size_t i = 0; i < n_out; ++i) store(i, rec->at(position(i)));
    return out;
  }

  for (std::size_t i = 0; i < n_out; ++i) {
    try {
      store(i, reconstruct_sample(band, position(i), cfg));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParameter) throw;
      out.failures.push_back({i, e.what()});
    }
  }
  if (static_cast<double>(out.failures.size()) > kMaxFailedSampleFraction * static_cast<double>(n_out)) {
    std::ostringstream msg;
    msg << out.failures.size() << " of " << n_out << " samples failed; first: " << out.failures.front().message;
    throw Error(ErrorCode::kReconstructionFailed, msg.str());
  }
  return out;
}

VolumeReconstruction reconstruct_volume(const Volume& v, const ReconstructionConfig& cfg, std::size_t workers) {
  cfg.validate();
  if (workers < 1) throw Error(ErrorCode::kParameter, "worker count must be >= 1");
  if (v.nt >= AScan::kMinLength) {
    // band and subband geometry depend only on (nt, fs): reject it once here
    // instead of failing every A-scan
    const Spectrum probe{CVector::Zero(static_cast<Eigen::Index>(v.nt)), v.sampling_rate};
    const PassbandSpectrum band = band_for(probe, cfg);
    if (cfg.method != Method::kUniform) resolve_subband_length(cfg, band.size());
  }
  const std::size_t nt_out = v.nt * cfg.oversample;
  const double fs_out = v.sampling_rate * static_cast<double>(cfg.oversample);

  VolumeReconstruction result;
  result.rf = Volume(v.nx, v.ny, nt_out, fs_out, v.pitch);
  result.envelope = Volume(v.nx, v.ny, nt_out, fs_out, v.pitch);

  const std::size_t total = v.ascan_count();
  std::vector<std::string> errors(total);
  std::vector<std::size_t> failed_samples(total, 0);
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      const std::size_t ix = idx % v.nx;
      const std::size_t iy = idx / v.nx;
      try {
        const AScanReconstruction r = reconstruct_ascan(v.ascan(ix, iy), cfg);
        result.rf.set_ascan(ix, iy, r.rf);
        result.envelope.set_ascan(ix, iy, r.envelope);
        failed_samples[idx] = r.failures.size();
      } catch (const Error& e) {
        errors[idx] = e.what();
      }
    }
  };

  const std::size_t n_threads = std::min(workers, std::max<std::size_t>(total, 1));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }

  for (std::size_t idx = 0; idx < total; ++idx) {
    result.failed_samples += failed_samples[idx];
    if (!errors[idx].empty()) result.failures.push_back({idx % v.nx, idx / v.nx, errors[idx]});
  }
  return result;
}

}  // namespace orpam
