#include "orpam/covariance.hpp"

#include <cmath>
#include <string>

#include "orpam/error.hpp"
#include "orpam/simd/kernels.hpp"

namespace orpam {

SnapshotSet::SnapshotSet(CVector source, std::size_t subband_length)
    : source_(std::move(source)), length_(subband_length) {
  const auto k = static_cast<std::size_t>(source_.size());
  if (length_ < 2 || length_ > k)
    throw Error(ErrorCode::kParameter, "subband length " + std::to_string(length_) +
                                           " outside [2, " + std::to_string(k) + "]");
}

CVector SnapshotSet::mean_snapshot() const {
  const auto L = static_cast<Eigen::Index>(length_);
  const auto M = static_cast<Eigen::Index>(count());
  CVector mean(L);
  cdouble window = source_.head(M).sum();
  mean[0] = window;
  for (Eigen::Index i = 1; i < L; ++i) {
    window += source_[i + M - 1] - source_[i - 1];
    mean[i] = window;
  }
  return mean / static_cast<double>(M);
}

SnapshotSet make_snapshots(const CompensatedSpectrum& x, std::size_t subband_length) {
  return SnapshotSet(x.entries, subband_length);
}

CovarianceEstimate estimate_covariance(const SnapshotSet& s, const CovarianceOptions& opt) {
  if (!(opt.loading >= 0.0) || !std::isfinite(opt.loading))
    throw Error(ErrorCode::kParameter, "loading factor must be finite and >= 0");
  const std::size_t L = s.subband_length();
  const auto Li = static_cast<Eigen::Index>(L);
  CovarianceEstimate est;
  est.matrix.resize(Li, Li);
  const CVector& src = s.source();
  simd::sliding_covariance({src.data(), static_cast<std::size_t>(src.size())}, L,
                           {est.matrix.data(), L * L});

  if (opt.forward_backward) {
    // Backward estimate J conj(R) J, J the exchange matrix.
    const CMatrix fwd = est.matrix;
    for (Eigen::Index i = 0; i < Li; ++i)
      for (Eigen::Index j = 0; j < Li; ++j)
        est.matrix(i, j) = 0.5 * (fwd(i, j) + std::conj(fwd(Li - 1 - i, Li - 1 - j)));
  }

  const double trace = est.matrix.diagonal().real().sum();
  est.trace_before_loading = trace;
  est.loading_factor = opt.loading;
  if (trace > 0.0) {
    est.matrix.diagonal().array() += opt.loading * trace / static_cast<double>(L);
  } else {
    est.status = CovarianceStatus::kSingularWarning;
  }
  return est;
}

std::size_t default_subband_length(std::size_t band_bins) {
  return std::max<std::size_t>(2, band_bins / 2);
}

}  // namespace orpam
