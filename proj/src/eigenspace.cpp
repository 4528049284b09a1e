#include "orpam/eigenspace.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "orpam/error.hpp"

namespace orpam {

EigenDecomposition eig_hermitian(const CMatrix& R) {
  if (R.rows() != R.cols() || R.rows() == 0)
    throw Error(ErrorCode::kDimensionMismatch, "eigendecomposition needs a non-empty square matrix");
  const double scale = R.norm();
  if (!std::isfinite(scale))
    throw Error(ErrorCode::kInvalidInput, "matrix has non-finite entries");
  if ((R - R.adjoint()).norm() > kHermitianTolerance * std::max(scale, 1e-300))
    throw Error(ErrorCode::kInvalidInput, "matrix is not Hermitian");

  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(R);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::kInvalidInput, "eigendecomposition did not converge");

  // Eigen returns ascending order.
  EigenDecomposition e;
  e.eigenvalues = solver.eigenvalues().reverse();
  e.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return e;
}

std::size_t signal_rank(const Eigen::VectorXd& lambda, double threshold) {
  const double cut = threshold * lambda[0];
  std::size_t num = 0;
  while (num < static_cast<std::size_t>(lambda.size()) && lambda[static_cast<Eigen::Index>(num)] >= cut) ++num;
  return std::max<std::size_t>(num, 1);
}

SignalSubspace select_signal_subspace(const EigenDecomposition& e, double threshold,
                                      std::optional<std::size_t> fixed_rank) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw Error(ErrorCode::kParameter, "subspace threshold must lie in (0, 1]");
  if (e.size() == 0 || !(e.eigenvalues[0] > 0.0))
    throw Error(ErrorCode::kNoSignal, "largest eigenvalue is not positive; no signal to project onto");
  std::size_t num = fixed_rank ? std::clamp<std::size_t>(*fixed_rank, 1, e.size())
                               : signal_rank(e.eigenvalues, threshold);
  return {e.eigenvectors.leftCols(static_cast<Eigen::Index>(num)), threshold};
}

ApodizationWeights project_weight(const SignalSubspace& s, const ApodizationWeights& w_mv) {
  if (s.basis.rows() != w_mv.w.size())
    throw Error(ErrorCode::kDimensionMismatch, "subspace and weight dimensions differ");
  const CVector coeff = s.basis.adjoint() * w_mv.w;
  return {s.basis * coeff, WeightKind::kEibmv};
}

ApodizationWeights renormalize(const ApodizationWeights& w, const SteeringVector& d) {
  const cdouble response = w.w.dot(d.d);  // Eigen's dot conjugates the left operand
  if (std::abs(response) == 0.0)
    throw Error(ErrorCode::kNoSignal, "weight has no response along the steering vector");
  return {w.w / std::conj(response), w.kind};
}

}  // namespace orpam
