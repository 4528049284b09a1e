#include "doctest.h"
#include "oracles.hpp"
#include "orpam/covariance.hpp"
#include "orpam/error.hpp"
#include "orpam/mv.hpp"
#include "orpam/transforms.hpp"

#include <Eigen/Eigenvalues>

using namespace orpam;
using cd = std::complex<double>;

namespace {

Eigen::VectorXd eigvals(const CMatrix& R) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(R, Eigen::EigenvaluesOnly).eigenvalues();
}

CompensatedSpectrum comp(CVector v) {
  CompensatedSpectrum c;
  c.entries = std::move(v);
  return c;
}

}  // namespace

TEST_CASE("snapshots are sliding windows") {
  CVector x(4);
  x << cd(1, 0), cd(2, 1), cd(3, -1), cd(4, 2);
  const SnapshotSet s = make_snapshots(comp(x), 2);
  REQUIRE(s.count() == 3);
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(s.snapshot(m)(0) == x(static_cast<Eigen::Index>(m)));
    CHECK(s.snapshot(m)(1) == x(static_cast<Eigen::Index>(m + 1)));
  }
  const SnapshotSet whole = make_snapshots(comp(x), 4);
  CHECK(whole.count() == 1);
  CHECK((CVector(whole.snapshot(0)) - x).norm() == 0.0);

  const SnapshotSet ones = make_snapshots(comp(CVector::Ones(5)), 3);
  CHECK(ones.count() == 3);
  for (std::size_t m = 0; m < 3; ++m) CHECK((CVector(ones.snapshot(m)) - CVector::Ones(3)).norm() == 0.0);
}

TEST_CASE("subband length outside [2, K] is a parameter error") {
  const CompensatedSpectrum c = comp(CVector::Ones(5));
  for (std::size_t L : {0u, 1u, 6u}) {
    try {
      make_snapshots(c, L);
      FAIL("accepted L");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParameter);
    }
  }
}

TEST_CASE("mean snapshot equals the direct average") {
  std::mt19937_64 rng(21);
  const CVector x = oracle::random_cvector(rng, 31);
  const SnapshotSet s = make_snapshots(comp(x), 15);
  CVector ref = CVector::Zero(15);
  for (std::size_t m = 0; m < s.count(); ++m) ref += s.snapshot(m);
  ref /= static_cast<double>(s.count());
  CHECK((s.mean_snapshot() - ref).norm() <= 1e-13 * ref.norm());
}

TEST_CASE("covariance of small known snapshot sets") {
  SUBCASE("single snapshot is the outer product") {
    CVector v(3);
    v << cd(1, 2), cd(-1, 0.5), cd(0, 3);
    const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(v), 3), 0.0);
    CHECK((R.matrix - v * v.adjoint()).norm() <= 1e-14);
    CHECK(R.trace_before_loading == doctest::Approx(v.squaredNorm()));
  }
  SUBCASE("each basis vector once gives I/L") {
    for (Eigen::Index L : {2, 4, 7}) {
      CVector x = CVector::Zero(2 * L - 1);
      x(L - 1) = 1.0;
      const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(x), static_cast<std::size_t>(L)), 0.0);
      CHECK((R.matrix - CMatrix::Identity(L, L) / static_cast<double>(L)).norm() <= 1e-15);
    }
  }
  SUBCASE("random snapshots match the double loop, loading lifts the spectrum") {
    std::mt19937_64 rng(22);
    const CVector x = oracle::random_cvector(rng, 19);  // L=4, M=16
    const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(x), 4), 0.01);
    CHECK((R.matrix - oracle::naive_covariance(x, 4, 0.01)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(eigvals(R.matrix).minCoeff() >= 0.01 * R.trace_before_loading / 4 - 1e-10);
    CHECK(R.loading_factor == 0.01);
  }
}

TEST_CASE("estimates are Hermitian and positive semidefinite") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> kdist(4, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = kdist(rng);
    std::uniform_int_distribution<int> ldist(2, K);
    const int L = ldist(rng);
    const double loading = trial % 2 ? 0.0 : 0.05;
    const CVector x = oracle::random_cvector(rng, K);
    for (bool fb : {false, true}) {
      const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(x), L), CovarianceOptions{loading, fb});
      const double tr = R.matrix.trace().real();
      CHECK((R.matrix - CMatrix(R.matrix.adjoint())).cwiseAbs().maxCoeff() <= 1e-12);
      const Eigen::VectorXd ev = eigvals(R.matrix);
      CHECK(ev.minCoeff() >= -1e-10 * tr);
      CHECK(ev.minCoeff() >= loading * R.trace_before_loading / L - 1e-10 * tr);
    }
  }
}

TEST_CASE("forward-backward averaging is persymmetric") {
  std::mt19937_64 rng(24);
  const CVector x = oracle::random_cvector(rng, 21);
  const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(x), 8), CovarianceOptions{0.0, true});
  const CMatrix J = CMatrix::Identity(8, 8).rowwise().reverse();
  CHECK((J * R.matrix.conjugate() * J - R.matrix).norm() <= 1e-13 * R.matrix.norm());
}

TEST_CASE("coherent spectrum gives the scaled all-ones matrix") {
  const cd c(0.6, -0.8);
  const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(CVector::Constant(20, c)), 10), 0.0);
  CHECK((R.matrix - std::norm(c) * CMatrix::Ones(10, 10)).norm() <= 1e-13);
  const Eigen::VectorXd ev = eigvals(R.matrix);
  CHECK(ev(9) == doctest::Approx(10 * std::norm(c)));
  CHECK(ev.head(9).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("more loading never lowers any eigenvalue") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const CVector x = oracle::random_cvector(rng, 25);
    const SnapshotSet s = make_snapshots(comp(x), 12);
    const double d1 = 0.01 * trial, d2 = d1 + 0.005 * (1 + trial % 5);
    const CMatrix diff = estimate_covariance(s, d2).matrix - estimate_covariance(s, d1).matrix;
    CHECK(eigvals(diff).minCoeff() >= -1e-12);
  }
}

TEST_CASE("off-target impulse gives a Toeplitz covariance") {
  std::vector<double> x(256, 0.0);
  x[70] = 1.0;
  const PassbandSpectrum p = select_passband(forward_dft(AScan(x, 200e6)), 10e6, 40e6);
  const CMatrix R = estimate_covariance(make_snapshots(phase_compensate(p, 64.0), 30), 0.0).matrix;
  for (Eigen::Index i = 1; i < R.rows(); ++i)
    for (Eigen::Index j = 1; j < R.cols(); ++j) CHECK(std::abs(R(i, j) - R(i - 1, j - 1)) <= 1e-10);
}

TEST_CASE("all-zero data without loading is flagged and refused by MV") {
  const CovarianceEstimate R = estimate_covariance(make_snapshots(comp(CVector::Zero(8)), 4), 0.0);
  CHECK(R.status == CovarianceStatus::kSingularWarning);
  CHECK(R.matrix.norm() == 0.0);
  try {
    mv_weight(R, SteeringVector::ones(4));
    FAIL("MV accepted a zero covariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularCovariance);
  }
}

TEST_CASE("default subband length") {
  CHECK(default_subband_length(31) == 15);
  CHECK(default_subband_length(33) == 16);
  CHECK(default_subband_length(4) == 2);
  CHECK(default_subband_length(3) == 2);
}
