#include "orpam/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "orpam/error.hpp"

namespace orpam {

double TransducerModel::sigma_t() const {
  // |H(f)| = exp(-2 pi^2 sigma^2 (f - f0)^2) is 1/sqrt(2) at
  // |f - f0| = sqrt(ln 2) / (2 pi sigma).
  return std::sqrt(std::numbers::ln2) / (std::numbers::pi * fractional_bandwidth * center_frequency);
}

double TransducerModel::impulse(double t) const {
  const double s = sigma_t();
  return std::exp(-t * t / (2.0 * s * s)) * std::cos(2.0 * std::numbers::pi * center_frequency * t);
}

double TransducerModel::envelope_fwhm() const {
  return 2.0 * sigma_t() * std::sqrt(2.0 * std::numbers::ln2);
}

void TransducerModel::validate(double sampling_rate) const {
  if (!(center_frequency > 0.0) || !(center_frequency < sampling_rate / 2.0))
    throw Error(ErrorCode::kParameter, "transducer center frequency must lie in (0, fs/2)");
  if (!(fractional_bandwidth > 0.0) || !std::isfinite(fractional_bandwidth))
    throw Error(ErrorCode::kParameter, "fractional bandwidth must be positive");
}

std::vector<InterferenceTap> default_interference_taps() {
  return {{60e-9, 0.3}, {120e-9, 0.15}};
}

AScan synth_ascan(const TransducerModel& t, const Scene& s, double fs, std::size_t nt, double sound_speed) {
  t.validate(fs);
  if (!(fs > 0.0)) throw Error(ErrorCode::kParameter, "sampling rate must be positive");
  if (!(sound_speed > 0.0)) throw Error(ErrorCode::kParameter, "sound speed must be positive");
  if (!(s.noise_rms >= 0.0) || !std::isfinite(s.noise_rms))
    throw Error(ErrorCode::kParameter, "noise RMS must be finite and >= 0");
  const double window_depth = static_cast<double>(nt) / fs * sound_speed;

  std::vector<double> x(nt, 0.0);
  for (const Reflector& r : s.reflectors) {
    if (!(r.depth >= 0.0 && r.depth < window_depth) || !std::isfinite(r.amplitude)) {
      std::ostringstream msg;
      msg << "reflector at depth " << r.depth << " m outside the time window [0, " << window_depth << ")";
      throw Error(ErrorCode::kInvalidInput, msg.str());
    }
    const double t0 = r.depth / sound_speed;
    for (std::size_t n = 0; n < nt; ++n) {
      const double tn = static_cast<double>(n) / fs;
      double v = r.amplitude * t.impulse(tn - t0);
      for (const InterferenceTap& tap : s.interference_taps)
        v += r.amplitude * tap.amplitude * t.impulse(tn - t0 - tap.delay);
      x[n] += v;
    }
  }
  if (s.noise_rms > 0.0) {
    std::mt19937_64 rng(s.rng_seed);
    std::normal_distribution<double> gauss(0.0, s.noise_rms);
    for (double& v : x) v += gauss(rng);
  }
  return AScan(std::move(x), fs);
}

std::uint64_t ascan_seed(std::uint64_t volume_seed, std::size_t ix, std::size_t iy) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = volume_seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(iy) * 65536ULL + ix + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Scene thin_film_scene(const ThinFilmParams& p, std::size_t ix, std::size_t iy) {
  Scene s;
  s.reflectors = {{p.film_depth, 1.0}};
  s.interference_taps = p.interference_taps;
  s.noise_rms = p.noise_rms;
  s.rng_seed = ascan_seed(p.seed, ix, iy);
  return s;
}

Volume synth_thin_film_volume(const TransducerModel& t, const ThinFilmParams& p) {
  if (p.nx < 1 || p.ny < 1) throw Error(ErrorCode::kParameter, "volume dimensions must be >= 1");
  if (p.nx > 4096 || p.ny > 4096) throw Error(ErrorCode::kParameter, "volume dimensions too large");
  Volume v(p.nx, p.ny, p.nt, p.sampling_rate, p.pitch);
  for (std::size_t iy = 0; iy < p.ny; ++iy) {
    for (std::size_t ix = 0; ix < p.nx; ++ix) {
      const AScan a = synth_ascan(t, thin_film_scene(p, ix, iy), p.sampling_rate, p.nt, p.sound_speed);
      v.set_ascan(ix, iy, a.samples());
    }
  }
  return v;
}

}  // namespace orpam
