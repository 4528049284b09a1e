#include "doctest.h"
#include "oracles.hpp"
#include "orpam/error.hpp"
#include "orpam/simd/kernels.hpp"

#include <string>
#include <vector>

using namespace orpam;
using cd = std::complex<double>;

namespace {

std::vector<cd> rand_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<cd> v(n);
  for (auto& x : v) x = cd(g(rng), g(rng));
  return v;
}

cd naive_dot(const std::vector<cd>& a, const std::vector<cd>& b) {
  cd s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

std::vector<const simd::KernelTable*> tables() {
  std::vector<const simd::KernelTable*> t{&simd::scalar_kernels()};
  if (simd::avx2_kernels()) t.push_back(simd::avx2_kernels());
  return t;
}

}  // namespace

TEST_CASE("scalar dot_conj and multiply match naive loops") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 3u, 8u, 17u, 64u}) {
    auto a = rand_vec(rng, n), b = rand_vec(rng, n);
    CHECK(std::abs(simd::scalar_kernels().dot_conj(a.data(), b.data(), n) - naive_dot(a, b)) <= 1e-12 * (1.0 + n));
    std::vector<cd> out(n);
    simd::scalar_kernels().multiply(a.data(), b.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == a[i] * b[i]);
  }
}

TEST_CASE("every kernel table agrees with the scalar reference") {
  std::mt19937_64 rng(12);
  const auto& ref = simd::scalar_kernels();
  for (const auto* k : tables()) {
    CAPTURE(std::string(k->name));
    for (std::size_t n = 0; n <= 67; ++n) {
      auto a = rand_vec(rng, n), b = rand_vec(rng, n);
      const cd d0 = ref.dot_conj(a.data(), b.data(), n);
      const cd d1 = k->dot_conj(a.data(), b.data(), n);
      double scale = 0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i]) * std::abs(b[i]);
      CHECK(std::abs(d0 - d1) <= 1e-14 * (scale + 1.0));

      std::vector<cd> o0(n), o1(n);
      ref.multiply(a.data(), b.data(), o0.data(), n);
      k->multiply(a.data(), b.data(), o1.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o0[i] - o1[i]) <= 1e-15 * (std::abs(o0[i]) + 1e-300) * 4);
    }
  }
}

TEST_CASE("multiply may alias its output") {
  std::mt19937_64 rng(13);
  for (const auto* k : tables()) {
    auto a = rand_vec(rng, 21), b = rand_vec(rng, 21);
    std::vector<cd> expect(21);
    simd::scalar_kernels().multiply(a.data(), b.data(), expect.data(), 21);
    k->multiply(a.data(), b.data(), a.data(), 21);
    for (std::size_t i = 0; i < 21; ++i) CHECK(std::abs(a[i] - expect[i]) <= 1e-14 * std::abs(expect[i]));
  }
}

TEST_CASE("sliding covariance matches the double loop for every table") {
  std::mt19937_64 rng(14);
  for (const auto* k : tables()) {
    for (std::size_t K : {4u, 9u, 31u, 33u}) {
      for (std::size_t L : {std::size_t{2}, K / 2, K}) {
        if (L < 2) continue;
        auto x = rand_vec(rng, K);
        std::vector<cd> R(L * L);
        k->sliding_covariance(x.data(), K, L, R.data());
        Eigen::VectorXcd xv = Eigen::Map<Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(K));
        const Eigen::MatrixXcd ref = oracle::naive_covariance(xv, static_cast<Eigen::Index>(L), 0.0);
        for (std::size_t j = 0; j < L; ++j)
          for (std::size_t i = 0; i < L; ++i) CHECK(std::abs(R[j * L + i] - ref(i, j)) <= 1e-12);
        for (std::size_t i = 0; i < L; ++i) CHECK(R[i * L + i].imag() == 0.0);
      }
    }
  }
}

TEST_CASE("span wrappers reject mismatched lengths") {
  std::vector<cd> a(4), b(5), out(4);
  CHECK_THROWS_AS(simd::dot_conj(a, b), Error);
  CHECK_THROWS_AS(simd::multiply(a, b, out), Error);
  std::vector<cd> R(8);
  CHECK_THROWS_AS(simd::sliding_covariance(a, 3, R), Error);
}

TEST_CASE("active table is one of the known variants") {
  const std::string name(simd::active_kernels().name);
  CHECK((name == "scalar" || name == "avx2"));
  if (!simd::avx2_kernels()) CHECK(name == "scalar");
}
