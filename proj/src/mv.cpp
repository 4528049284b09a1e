#include "orpam/mv.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "orpam/error.hpp"
#include "orpam/simd/kernels.hpp"

namespace orpam {

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::kUniform: return "uniform";
    case WeightKind::kMv: return "mv";
    case WeightKind::kEibmv: return "eibmv";
  }
  return "?";
}

ApodizationWeights uniform_weight(std::size_t length) {
  const auto L = static_cast<Eigen::Index>(length);
  return {CVector::Constant(L, cdouble(1.0 / static_cast<double>(length), 0.0)), WeightKind::kUniform};
}

ApodizationWeights mv_weight(const CovarianceEstimate& R, const SteeringVector& d) {
  if (R.matrix.rows() != d.d.size())
    throw Error(ErrorCode::kDimensionMismatch, "covariance and steering vector sizes differ");
  if (d.d.squaredNorm() == 0.0)
    throw Error(ErrorCode::kParameter, "steering vector is zero");
  if (R.status == CovarianceStatus::kSingularWarning)
    throw Error(ErrorCode::kSingularCovariance,
                "covariance is the zero matrix; increase the loading factor or check the input");

  const Eigen::LLT<CMatrix> llt(R.matrix);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond * kMaxCondition >= 1.0)) {
    std::ostringstream msg;
    msg << "covariance singular to working precision (rcond " << rcond
        << "); raise the diagonal loading factor";
    throw Error(ErrorCode::kSingularCovariance, msg.str());
  }
  const CVector r_inv_d = llt.solve(d.d);
  const cdouble denom = simd::dot_conj({d.d.data(), d.size()}, {r_inv_d.data(), d.size()});
  return {r_inv_d / denom.real(), WeightKind::kMv};
}

cdouble apply_weight(const ApodizationWeights& w, const CVector& x) {
  if (w.w.size() != x.size()) throw Error(ErrorCode::kDimensionMismatch, "weight and data sizes differ");
  return simd::dot_conj({w.w.data(), w.size()}, {x.data(), static_cast<std::size_t>(x.size())});
}

}  // namespace orpam
