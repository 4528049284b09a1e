#pragma once

#include <cstdint>
#include <vector>

#include "orpam/types.hpp"

namespace orpam {

/// Gaussian-modulated cosine exp(-t^2 / 2 sigma^2) cos(2 pi f0 t).
/// fractional_bandwidth is the half-power (-3 dB) width of the amplitude
/// spectrum divided by f0.
struct TransducerModel {
  // Calibrated so the noiseless thin-film PSF reconstructed with uniform
  // apodization over the default 10-40 MHz band has a 69.3 um envelope FWHM
  // at 200 MS/s and 1500 m/s (see tests/test_synth.cpp).
  static constexpr double kCalibratedBandwidth = 0.7157;

  double center_frequency = 25e6;
  double fractional_bandwidth = kCalibratedBandwidth;

  double sigma_t() const;
  double impulse(double t) const;
  /// Analytic envelope FWHM of the impulse, 2 sigma sqrt(2 ln 2), seconds.
  double envelope_fwhm() const;
  void validate(double sampling_rate) const;
};

struct Reflector {
  double depth = 0.0;  // m
  double amplitude = 1.0;
};

/// Delayed, scaled copy of each reflector's echo.
struct InterferenceTap {
  double delay = 0.0;  // s
  double amplitude = 0.0;
};

std::vector<InterferenceTap> default_interference_taps();

struct Scene {
  std::vector<Reflector> reflectors;
  std::vector<InterferenceTap> interference_taps;
  double noise_rms = 0.0;
  std::uint64_t rng_seed = 0;
};

struct SynthDefaults {
  static constexpr double kSamplingRate = 200e6;
  static constexpr double kSoundSpeed = 1500.0;
  static constexpr std::size_t kSamples = 256;
  static constexpr double kFilmDepth = 480e-6;  // sample 64
  static constexpr double kPitch = 5e-6;
  // White-noise RMS that puts the uniform-reconstruction noise floor of the
  // default thin film 40 dB under its envelope peak (median over A-scans,
  // oversample 4). About 2 dB of that floor is band-edge ripple, not noise.
  static constexpr double kNoiseRms = 0.0066;
};

AScan synth_ascan(const TransducerModel& t, const Scene& s, double fs, std::size_t nt,
                  double sound_speed = SynthDefaults::kSoundSpeed);

struct ThinFilmParams {
  double film_depth = SynthDefaults::kFilmDepth;
  std::size_t nx = 16;
  std::size_t ny = 16;
  std::size_t nt = SynthDefaults::kSamples;
  double sampling_rate = SynthDefaults::kSamplingRate;
  double sound_speed = SynthDefaults::kSoundSpeed;
  double pitch = SynthDefaults::kPitch;
  double noise_rms = SynthDefaults::kNoiseRms;
  std::vector<InterferenceTap> interference_taps = default_interference_taps();
  std::uint64_t seed = 1;
};

/// Noise seed of A-scan (ix, iy): independent streams derived from the
/// volume seed.
std::uint64_t ascan_seed(std::uint64_t volume_seed, std::size_t ix, std::size_t iy);

Scene thin_film_scene(const ThinFilmParams& p, std::size_t ix, std::size_t iy);

Volume synth_thin_film_volume(const TransducerModel& t, const ThinFilmParams& p);

}  // namespace orpam
