#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "orpam/types.hpp"

namespace orpam {

/// Half-open sample range [begin, end).
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

/// Full width at half maximum of the global peak (lowest index on ties), with
/// linearly interpolated crossings, converted to micrometres one-way.
double fwhm_um(std::span<const double> envelope, double fs, double sound_speed);

/// Same measurement in (fractional) samples.
double fwhm_samples(std::span<const double> envelope);

/// 20 log10(RMS(noise window) / peak(signal window)). An all-zero noise
/// window yields -infinity ("below measurable floor").
double noise_floor_db(std::span<const double> envelope, SampleRange signal_window, SampleRange noise_window);

/// |mean(entries)| / mean(|entries|), in [0, 1].
double spectral_coherence(const CompensatedSpectrum& x);
double spectral_coherence(const CVector& entries);

struct AxialProfileReport {
  double fwhm_um = 0.0;
  std::size_t peak_sample = 0;
  double peak_value = 0.0;
  double noise_floor_db = 0.0;
  double max_sidelobe_db = 0.0;
  SampleRange mainlobe;
  SampleRange noise_window;
};

struct ProfileOptions {
  double sound_speed = 1500.0;
  // Noise is measured on samples farther than this from the peak (metres)
  // unless an explicit window is given.
  double noise_guard = 600e-6;
  std::optional<SampleRange> noise_window;
};

/// Mainlobe = peak +/- 2 FWHM. Sidelobe level is the largest envelope value
/// outside the mainlobe relative to the peak.
AxialProfileReport axial_profile(std::span<const double> envelope, double fs, const ProfileOptions& opt = {});

}  // namespace orpam
