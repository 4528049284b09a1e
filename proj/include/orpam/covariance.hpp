#pragma once

#include <cstddef>
#include <vector>

#include "orpam/types.hpp"

namespace orpam {

/// Sliding length-L subvectors of a compensated spectrum. Snapshots are
/// views: snapshot m is source[m .. m+L).
class SnapshotSet {
 public:
  SnapshotSet(CVector source, std::size_t subband_length);

  std::size_t subband_length() const { return length_; }
  std::size_t count() const { return static_cast<std::size_t>(source_.size()) - length_ + 1; }
  const CVector& source() const { return source_; }

  Eigen::VectorBlock<const CVector> snapshot(std::size_t m) const {
    return source_.segment(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(length_));
  }

  /// (1/M) sum_m snapshot_m, computed with a running window sum.
  CVector mean_snapshot() const;

 private:
  CVector source_;
  std::size_t length_;
};

SnapshotSet make_snapshots(const CompensatedSpectrum& x, std::size_t subband_length);

enum class CovarianceStatus { kOk, kSingularWarning };

struct CovarianceEstimate {
  CMatrix matrix;
  double loading_factor = 0.0;
  double trace_before_loading = 0.0;
  CovarianceStatus status = CovarianceStatus::kOk;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct CovarianceOptions {
  double loading = 0.0;
  bool forward_backward = false;
};

/// R = (1/M) sum_m s_m s_m^H + loading * trace/L * I.
/// An all-zero snapshot set without loading comes back as the zero matrix
/// flagged kSingularWarning; mv_weight refuses it.
CovarianceEstimate estimate_covariance(const SnapshotSet& s, const CovarianceOptions& opt);

inline CovarianceEstimate estimate_covariance(const SnapshotSet& s, double loading) {
  return estimate_covariance(s, CovarianceOptions{loading, false});
}

/// Default subband length for K bins: floor(K/2), never below 2.
std::size_t default_subband_length(std::size_t band_bins);

}  // namespace orpam
