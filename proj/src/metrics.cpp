#include "orpam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orpam/error.hpp"

namespace orpam {

namespace {

std::size_t peak_index(std::span<const double> e) {
  // max_element returns the first of equal maxima.
  return static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
}

}  // namespace

double fwhm_samples(std::span<const double> e) {
  if (e.size() < 3) throw Error(ErrorCode::kUndefinedMetric, "envelope too short for FWHM");
  for (double v : e) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::kInvalidInput, "envelope must be finite and nonnegative");
  }
  const std::size_t p = peak_index(e);
  const double half = e[p] / 2.0;
  if (!(e[p] > 0.0)) throw Error(ErrorCode::kUndefinedMetric, "envelope peak is zero");

  std::size_t i = p;
  while (i > 0 && e[i] > half) --i;
  if (e[i] > half) throw Error(ErrorCode::kUnboundedMainlobe, "envelope never falls to half maximum before the start");
  const double left = static_cast<double>(i) + (half - e[i]) / (e[i + 1] - e[i]);

  std::size_t j = p;
  while (j + 1 < e.size() && e[j] > half) ++j;
  if (e[j] > half) throw Error(ErrorCode::kUnboundedMainlobe, "envelope never falls to half maximum before the end");
  const double right = static_cast<double>(j) - (half - e[j]) / (e[j - 1] - e[j]);

  return right - left;
}

double fwhm_um(std::span<const double> envelope, double fs, double sound_speed) {
  return fwhm_samples(envelope) * sound_speed / fs * 1e6;
}

double noise_floor_db(std::span<const double> e, SampleRange signal, SampleRange noise) {
  if (signal.size() == 0 || noise.size() == 0 || signal.end > e.size() || noise.end > e.size())
    throw Error(ErrorCode::kParameter, "signal and noise windows must be non-empty and inside the envelope");
  if (signal.begin < noise.end && noise.begin < signal.end)
    throw Error(ErrorCode::kParameter, "signal and noise windows overlap");
  const double peak = *std::max_element(e.begin() + static_cast<std::ptrdiff_t>(signal.begin),
                                        e.begin() + static_cast<std::ptrdiff_t>(signal.end));
  if (!(peak > 0.0)) throw Error(ErrorCode::kUndefinedMetric, "signal window peak is zero");
  double sum_sq = 0.0;
  for (std::size_t i = noise.begin; i < noise.end; ++i) sum_sq += e[i] * e[i];
  if (sum_sq == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(std::sqrt(sum_sq / static_cast<double>(noise.size())) / peak);
}

double spectral_coherence(const CVector& entries) {
  if (entries.size() < 2) throw Error(ErrorCode::kParameter, "coherence needs at least two bins");
  const double mean_mag = entries.cwiseAbs().mean();
  if (mean_mag == 0.0) throw Error(ErrorCode::kUndefinedMetric, "coherence of an all-zero spectrum");
  return std::min(1.0, std::abs(entries.mean()) / mean_mag);
}

double spectral_coherence(const CompensatedSpectrum& x) { return spectral_coherence(x.entries); }

AxialProfileReport axial_profile(std::span<const double> e, double fs, const ProfileOptions& opt) {
  AxialProfileReport r;
  const double width = fwhm_samples(e);
  r.fwhm_um = width * opt.sound_speed / fs * 1e6;
  r.peak_sample = peak_index(e);
  r.peak_value = e[r.peak_sample];

  const auto reach = static_cast<std::size_t>(std::ceil(2.0 * width));
  r.mainlobe.begin = r.peak_sample > reach ? r.peak_sample - reach : 0;
  r.mainlobe.end = std::min(e.size(), r.peak_sample + reach + 1);

  double side = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (!r.mainlobe.contains(i)) side = std::max(side, e[i]);
  r.max_sidelobe_db = side > 0.0 ? 20.0 * std::log10(side / r.peak_value)
                                 : -std::numeric_limits<double>::infinity();

  if (opt.noise_window) {
    r.noise_window = *opt.noise_window;
  } else {
    // Samples beyond the guard distance after the peak; before it when the
    // peak sits too close to the end.
    const auto guard = static_cast<std::size_t>(std::ceil(opt.noise_guard / opt.sound_speed * fs));
    if (r.peak_sample + guard < e.size()) {
      r.noise_window = {r.peak_sample + guard, e.size()};
    } else if (r.peak_sample > guard) {
      r.noise_window = {0, r.peak_sample - guard};
    } else {
      throw Error(ErrorCode::kUndefinedMetric, "no samples far enough from the peak for a noise window");
    }
  }
  SampleRange signal = r.mainlobe;
  // Keep the windows disjoint if a user window clips the mainlobe.
  if (r.noise_window.begin < signal.end && signal.begin < r.noise_window.end) signal = {r.peak_sample, r.peak_sample + 1};
  r.noise_floor_db = noise_floor_db(e, signal, r.noise_window);
  return r;
}

}  // namespace orpam
