#pragma once

#include <vector>

#include "orpam/types.hpp"

namespace orpam {

/// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / N).
Spectrum forward_dft(const AScan& a);

/// Inverse of forward_dft, carrying the 1/N factor.
std::vector<cdouble> inverse_dft(const Spectrum& s);

/// Keeps the positive-frequency bins with f_lo <= k fs / N <= f_hi.
/// Throws kParameter unless 0 < f_lo < f_hi < fs/2, kBandTooNarrow if
/// fewer than four bins survive.
PassbandSpectrum select_passband(const Spectrum& s, double f_lo, double f_hi);

/// Every positive bin strictly between DC and Nyquist.
PassbandSpectrum full_passband(const Spectrum& s);

/// entries[m] = bins[m] * exp(+j 2 pi bin_indices[m] n / N).
/// n may be fractional; it must lie in [0, N).
CompensatedSpectrum phase_compensate(const PassbandSpectrum& p, double n);

/// Uniform apodization W = ones/K applied to X'; the mean of the entries.
cdouble uniform_reconstruct(const CompensatedSpectrum& x);

/// Modulus of the analytic signal.
std::vector<double> envelope(const AScan& a);

/// Band-limited RF scale: 2 * Re(y) * K / N turns a positive-band output
/// back into the real time-domain amplitude.
inline double rf_scale(std::size_t band_bins, std::size_t parent_length) {
  return 2.0 * static_cast<double>(band_bins) / static_cast<double>(parent_length);
}

}  // namespace orpam
