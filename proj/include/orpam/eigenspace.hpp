#pragma once

#include <cstddef>
#include <optional>

#include "orpam/covariance.hpp"
#include "orpam/mv.hpp"
#include "orpam/types.hpp"

namespace orpam {

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order and
/// eigenvectors as orthonormal columns.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  CMatrix eigenvectors;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Relative tolerance on ||R - R^H|| / ||R|| before input is rejected.
inline constexpr double kHermitianTolerance = 1e-10;

EigenDecomposition eig_hermitian(const CMatrix& R);
inline EigenDecomposition eig_hermitian(const CovarianceEstimate& R) { return eig_hermitian(R.matrix); }

struct SignalSubspace {
  CMatrix basis;  // L x Num, orthonormal columns
  double threshold = 0.5;

  std::size_t rank() const { return static_cast<std::size_t>(basis.cols()); }
};

/// Keeps eigenvectors with lambda_i >= threshold * lambda_1 (ties included).
/// fixed_rank, when given, overrides the threshold and is clamped to [1, L].
/// Throws kNoSignal when lambda_1 <= 0.
SignalSubspace select_signal_subspace(const EigenDecomposition& e, double threshold,
                                      std::optional<std::size_t> fixed_rank = std::nullopt);

/// Number of eigenvalues passing the relative threshold.
std::size_t signal_rank(const Eigen::VectorXd& descending_eigenvalues, double threshold);

/// E_s E_s^H w_mv.
ApodizationWeights project_weight(const SignalSubspace& s, const ApodizationWeights& w_mv);

/// Rescales w so that w^H d = 1. Requires w^H d != 0.
ApodizationWeights renormalize(const ApodizationWeights& w, const SteeringVector& d);

}  // namespace orpam
