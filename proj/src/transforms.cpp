#include "orpam/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "orpam/error.hpp"

namespace orpam {

AScan::AScan(std::vector<double> samples, double sampling_rate)
    : samples_(std::move(samples)), sampling_rate_(sampling_rate) {
  if (samples_.size() < kMinLength)
    throw Error(ErrorCode::kInvalidInput,
                "A-scan needs at least 8 samples, got " + std::to_string(samples_.size()));
  if (!(sampling_rate_ > 0.0) || !std::isfinite(sampling_rate_))
    throw Error(ErrorCode::kInvalidInput, "sampling rate must be positive and finite");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw Error(ErrorCode::kInvalidInput, "non-finite sample at index " + std::to_string(i));
  }
}

Volume::Volume(std::size_t nx_, std::size_t ny_, std::size_t nt_, double fs, double pitch_m)
    : nx(nx_), ny(ny_), nt(nt_), sampling_rate(fs), pitch(pitch_m), data(nx_ * ny_ * nt_, 0.0) {}

AScan Volume::ascan(std::size_t ix, std::size_t iy) const {
  auto t = trace(ix, iy);
  return AScan(std::vector<double>(t.begin(), t.end()), sampling_rate);
}

void Volume::set_ascan(std::size_t ix, std::size_t iy, std::span<const double> samples) {
  if (samples.size() != nt) throw Error(ErrorCode::kDimensionMismatch, "A-scan length differs from volume nt");
  std::copy(samples.begin(), samples.end(), trace(ix, iy).begin());
}

Spectrum forward_dft(const AScan& a) {
  std::vector<cdouble> in(a.samples().begin(), a.samples().end());
  std::vector<cdouble> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  Spectrum s;
  s.bins = Eigen::Map<const CVector>(out.data(), static_cast<Eigen::Index>(out.size()));
  s.sampling_rate = a.sampling_rate();
  return s;
}

std::vector<cdouble> inverse_dft(const Spectrum& s) {
  std::vector<cdouble> in(s.bins.data(), s.bins.data() + s.bins.size());
  std::vector<cdouble> out;
  Eigen::FFT<double> fft;
  fft.inv(out, in);
  return out;
}

namespace {

PassbandSpectrum take_bins(const Spectrum& s, int k_first, int k_last) {
  PassbandSpectrum p;
  p.parent_length = s.size();
  p.sampling_rate = s.sampling_rate;
  const int count = k_last >= k_first ? k_last - k_first + 1 : 0;
  if (count < 4)
    throw Error(ErrorCode::kBandTooNarrow,
                "passband keeps " + std::to_string(count) + " bins, at least 4 required");
  p.bins = s.bins.segment(k_first, count);
  p.bin_indices.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) p.bin_indices[static_cast<std::size_t>(i)] = k_first + i;
  return p;
}

// Highest bin strictly below Nyquist.
int last_positive_bin(std::size_t n) { return static_cast<int>((n - 1) / 2); }

}  // namespace

PassbandSpectrum select_passband(const Spectrum& s, double f_lo, double f_hi) {
  const double fs = s.sampling_rate;
  if (!(f_lo > 0.0) || !(f_lo < f_hi) || !(f_hi < fs / 2.0))
    throw Error(ErrorCode::kParameter, "passband requires 0 < f_lo < f_hi < fs/2");
  const double n = static_cast<double>(s.size());
  // Bin frequencies are k*fs/N; the small slack keeps edges that land on a bin
  // exactly (10 MHz at N=200, fs=200 MHz) from being lost to rounding.
  const double slack = 1e-9;
  int k_first = static_cast<int>(std::ceil(f_lo * n / fs - slack));
  int k_last = static_cast<int>(std::floor(f_hi * n / fs + slack));
  k_first = std::max(k_first, 1);
  k_last = std::min(k_last, last_positive_bin(s.size()));
  return take_bins(s, k_first, k_last);
}

PassbandSpectrum full_passband(const Spectrum& s) {
  return take_bins(s, 1, last_positive_bin(s.size()));
}

CompensatedSpectrum phase_compensate(const PassbandSpectrum& p, double n) {
  const double N = static_cast<double>(p.parent_length);
  if (!(n >= 0.0) || !(n < N))
    throw Error(ErrorCode::kParameter, "compensation position outside [0, N)");
  CompensatedSpectrum x;
  x.position = n;
  x.bin_indices = p.bin_indices;
  x.parent_length = p.parent_length;
  x.entries.resize(p.bins.size());
  for (Eigen::Index m = 0; m < p.bins.size(); ++m) {
    const double phase = 2.0 * std::numbers::pi * p.bin_indices[static_cast<std::size_t>(m)] * n / N;
    x.entries[m] = p.bins[m] * std::polar(1.0, phase);
  }
  return x;
}

cdouble uniform_reconstruct(const CompensatedSpectrum& x) {
  return x.entries.mean();
}

std::vector<double> envelope(const AScan& a) {
  Spectrum s = forward_dft(a);
  const std::size_t n = s.size();
  // Analytic signal: keep DC (and Nyquist for even N), double positive bins,
  // drop negative ones.
  for (std::size_t k = 1; k < n; ++k) {
    const bool nyquist = (n % 2 == 0) && k == n / 2;
    if (nyquist) continue;
    s.bins[static_cast<Eigen::Index>(k)] *= (k < (n + 1) / 2) ? 2.0 : 0.0;
  }
  const std::vector<cdouble> z = inverse_dft(s);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(z[i]);
  return env;
}

}  // namespace orpam
