#pragma once

#include <cstddef>

#include "orpam/covariance.hpp"
#include "orpam/types.hpp"

namespace orpam {

/// Mainlobe signature after phase compensation: the all-ones vector.
struct SteeringVector {
  CVector d;

  std::size_t size() const { return static_cast<std::size_t>(d.size()); }

  static SteeringVector ones(std::size_t length) {
    return {CVector::Ones(static_cast<Eigen::Index>(length))};
  }
};

enum class WeightKind { kUniform, kMv, kEibmv };

const char* to_string(WeightKind kind);

struct ApodizationWeights {
  CVector w;
  WeightKind kind = WeightKind::kUniform;

  std::size_t size() const { return static_cast<std::size_t>(w.size()); }
};

/// Largest condition number mv_weight accepts before asking for more loading.
inline constexpr double kMaxCondition = 1e12;

ApodizationWeights uniform_weight(std::size_t length);

/// Capon weight R^-1 d / (d^H R^-1 d) via a Cholesky solve. Throws
/// kSingularCovariance when R is not positive definite or its reciprocal
/// condition estimate falls under 1/kMaxCondition.
ApodizationWeights mv_weight(const CovarianceEstimate& R, const SteeringVector& d);

/// w^H x
cdouble apply_weight(const ApodizationWeights& w, const CVector& x);

}  // namespace orpam
