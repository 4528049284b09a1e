#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace orpam {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// One real axial time series. Construction validates N >= 8, fs > 0 and
/// finite samples, so every AScan in flight is well formed.
class AScan {
 public:
  static constexpr std::size_t kMinLength = 8;

  AScan(std::vector<double> samples, double sampling_rate);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double sampling_rate() const { return sampling_rate_; }
  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  double sampling_rate_;
};

/// Full N-bin spectrum. Bin k sits at k*fs/N for k < N/2.
struct Spectrum {
  CVector bins;
  double sampling_rate = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(bins.size()); }
  double frequency(std::size_t k) const {
    return static_cast<double>(k) * sampling_rate / static_cast<double>(size());
  }
};

/// Positive-frequency band taken out of a Spectrum; indices are contiguous
/// and strictly increasing inside [1, N/2 - 1].
struct PassbandSpectrum {
  CVector bins;
  std::vector<int> bin_indices;
  std::size_t parent_length = 0;
  double sampling_rate = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(bins.size()); }
};

/// X' for one output position. The position is a sample index; fractional
/// values address the band-limited interpolation grid.
struct CompensatedSpectrum {
  CVector entries;
  double position = 0.0;
  std::vector<int> bin_indices;
  std::size_t parent_length = 0;

  std::size_t size() const { return static_cast<std::size_t>(entries.size()); }
};

/// nx * ny A-scans of nt samples. Storage is x fastest, then y, with time
/// contiguous innermost, which is also the on-disk order.
struct Volume {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nt = 0;
  double sampling_rate = 0.0;
  double pitch = 0.0;
  std::vector<double> data;

  Volume() = default;
  Volume(std::size_t nx_, std::size_t ny_, std::size_t nt_, double fs, double pitch_m);

  std::size_t ascan_count() const { return nx * ny; }
  std::size_t offset(std::size_t ix, std::size_t iy) const { return (iy * nx + ix) * nt; }

  std::span<const double> trace(std::size_t ix, std::size_t iy) const {
    return {data.data() + offset(ix, iy), nt};
  }
  std::span<double> trace(std::size_t ix, std::size_t iy) {
    return {data.data() + offset(ix, iy), nt};
  }

  AScan ascan(std::size_t ix, std::size_t iy) const;
  void set_ascan(std::size_t ix, std::size_t iy, std::span<const double> samples);
};

}  // namespace orpam
