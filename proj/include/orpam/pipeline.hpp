#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "orpam/covariance.hpp"
#include "orpam/eigenspace.hpp"
#include "orpam/mv.hpp"
#include "orpam/types.hpp"

namespace orpam {

enum class Method { kUniform, kFmv, kFeibmv };
enum class OutputKind { kRf, kEnvelope, kBoth };

const char* to_string(Method m);
const char* to_string(OutputKind k);
Method parse_method(const std::string& s);
OutputKind parse_output_kind(const std::string& s);

struct ReconstructionConfig {
  Method method = Method::kFeibmv;
  double f_lo = 10e6;
  double f_hi = 40e6;
  // Use every positive bin between DC and Nyquist instead of [f_lo, f_hi].
  bool full_band = false;
  // nullopt selects floor(K/2).
  std::optional<std::size_t> subband_length;
  double loading = 0.05;
  double subspace_threshold = 0.5;
  std::optional<std::size_t> fixed_num;
  bool renormalize_eibmv = false;
  bool forward_backward = false;
  OutputKind output = OutputKind::kRf;
  double sound_speed = 1500.0;
  // Output positions per input sample; > 1 evaluates the band-limited
  // interpolation grid n = i / oversample.
  std::size_t oversample = 1;
  // Factor R once per A-scan and rotate it per output position. R at
  // position n is D_n R_0 D_n^H with D_n diagonal unitary, so this is exact;
  // false rebuilds R from snapshots at every position.
  bool covariance_reuse = true;

  /// Throws kParameter on any out-of-range field.
  void validate() const;
};

PassbandSpectrum band_for(const Spectrum& s, const ReconstructionConfig& cfg);

/// Resolved subband length for a band of K bins.
std::size_t resolve_subband_length(const ReconstructionConfig& cfg, std::size_t band_bins);

/// Unscaled output y(n) = (1/M) sum_m w^H x'_m at position n, recomputing
/// snapshots, covariance and weights from scratch. The uniform method uses
/// the plain mean over all K bins. Errors carry the position in the message.
cdouble reconstruct_sample(const PassbandSpectrum& p, double n, const ReconstructionConfig& cfg);

/// Reconstructs every position of one band with R factored once.
class BandReconstructor {
 public:
  BandReconstructor(const PassbandSpectrum& p, const ReconstructionConfig& cfg);

  cdouble at(double n) const;
  std::size_t signal_rank() const { return signal_rank_; }

 private:
  PassbandSpectrum band_;
  ReconstructionConfig cfg_;
  std::size_t length_ = 0;
  bool zero_ = false;
  std::size_t signal_rank_ = 0;
  Eigen::LLT<CMatrix> llt_;
  CMatrix subspace_;
};

struct SampleFailure {
  std::size_t index = 0;
  std::string message;
};

struct AScanReconstruction {
  std::vector<double> rf;
  std::vector<double> envelope;
  double sampling_rate = 0.0;
  std::vector<SampleFailure> failures;
};

/// Fraction of failed output samples tolerated before an A-scan is rejected.
inline constexpr double kMaxFailedSampleFraction = 0.01;

/// RF = 2 Re(y) K / N and envelope = 2 |y| K / N at n = i / oversample.
/// Throws kReconstructionFailed if more than 1% of samples fail.
AScanReconstruction reconstruct_ascan(const AScan& a, const ReconstructionConfig& cfg);

struct AScanFailure {
  std::size_t ix = 0;
  std::size_t iy = 0;
  std::string message;
};

struct VolumeReconstruction {
  Volume rf;
  Volume envelope;
  std::vector<AScanFailure> failures;
  std::size_t failed_samples = 0;
};

/// Reconstructs every A-scan independently on `workers` threads. Output is
/// bitwise identical for any worker count. Failed A-scans are zero-filled
/// and listed in `failures`.
VolumeReconstruction reconstruct_volume(const Volume& v, const ReconstructionConfig& cfg,
                                        std::size_t workers);

/// One-way photoacoustic depth of a (possibly fractional) sample index.
inline double sample_to_depth(double n, double fs, double c) { return c * n / fs; }

}  // namespace orpam
