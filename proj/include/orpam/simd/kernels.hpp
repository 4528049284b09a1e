#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace orpam::simd {

using cdouble = std::complex<double>;

// Complex inner loops of the reconstruction. Every kernel has a scalar
// reference implementation; vector variants must agree with it to rounding.
struct KernelTable {
  std::string_view name;

  // sum_i conj(a[i]) * b[i]
  cdouble (*dot_conj)(const cdouble* a, const cdouble* b, std::size_t n);

  // out[i] = a[i] * b[i]; out may alias a or b.
  void (*multiply)(const cdouble* a, const cdouble* b, cdouble* out, std::size_t n);

  // Column-major L x L Hermitian R with
  //   R(i, j) = (1/M) sum_{m<M} x[m+i] * conj(x[m+j]),  M = n - L + 1.
  void (*sliding_covariance)(const cdouble* x, std::size_t n, std::size_t L, cdouble* R);
};

const KernelTable& scalar_kernels();

/// nullptr when the build or the running CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

/// Chosen once per process: AVX2 when available, unless the environment
/// variable ORPAM_SIMD=scalar forces the reference path.
const KernelTable& active_kernels();

// Convenience wrappers over active_kernels().
cdouble dot_conj(std::span<const cdouble> a, std::span<const cdouble> b);
void multiply(std::span<const cdouble> a, std::span<const cdouble> b, std::span<cdouble> out);
void sliding_covariance(std::span<const cdouble> x, std::size_t L, std::span<cdouble> R);

}  // namespace orpam::simd
