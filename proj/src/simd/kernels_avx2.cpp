#include <immintrin.h>

#include "kernels_internal.hpp"

namespace orpam::simd::detail {

namespace {

inline __m256d load2(const cdouble* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

}  // namespace

cdouble dot_conj_avx2(const cdouble* a, const cdouble* b, std::size_t n) {
  // Lanes hold [re0 im0 re1 im1]. acc_re collects ar*br and ai*bi, acc_im
  // collects ar*bi and ai*br; the horizontal step folds the pairs.
  __m256d acc_re0 = _mm256_setzero_pd(), acc_im0 = _mm256_setzero_pd();
  __m256d acc_re1 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = load2(a + i), vb0 = load2(b + i);
    const __m256d va1 = load2(a + i + 2), vb1 = load2(b + i + 2);
    acc_re0 = _mm256_fmadd_pd(va0, vb0, acc_re0);
    acc_re1 = _mm256_fmadd_pd(va1, vb1, acc_re1);
    acc_im0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), acc_im0);
    acc_im1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), acc_im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i), vb = load2(b + i);
    acc_re0 = _mm256_fmadd_pd(va, vb, acc_re0);
    acc_im0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im0);
  }
  const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
  const __m256d acc_im = _mm256_add_pd(acc_im0, acc_im1);
  alignas(32) double r[4];
  alignas(32) double m[4];
  _mm256_store_pd(r, acc_re);
  _mm256_store_pd(m, acc_im);
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (m[0] - m[1]) + (m[2] - m[3]);
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void multiply_avx2(const cdouble* a, const cdouble* b, cdouble* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i), vb = load2(b + i);
    const __m256d re_dup = _mm256_movedup_pd(va);
    const __m256d im_dup = _mm256_permute_pd(va, 0b1111);
    const __m256d cross = _mm256_mul_pd(im_dup, _mm256_permute_pd(vb, 0b0101));
    _mm256_storeu_pd(reinterpret_cast<double*>(out + i), _mm256_fmaddsub_pd(re_dup, vb, cross));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void sliding_covariance_avx2(const cdouble* x, std::size_t n, std::size_t L, cdouble* R) {
  const std::size_t M = n - L + 1;
  const double inv_m = 1.0 / static_cast<double>(M);
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t i = j; i < L; ++i) {
      const cdouble s = std::conj(dot_conj_avx2(x + i, x + j, M)) * inv_m;
      R[j * L + i] = s;
      R[i * L + j] = std::conj(s);
    }
    R[j * L + j] = {R[j * L + j].real(), 0.0};
  }
}

}  // namespace orpam::simd::detail
