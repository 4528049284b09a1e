#include "kernels_internal.hpp"

namespace orpam::simd::detail {

cdouble dot_conj_scalar(const cdouble* a, const cdouble* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void multiply_scalar(const cdouble* a, const cdouble* b, cdouble* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void sliding_covariance_scalar(const cdouble* x, std::size_t n, std::size_t L, cdouble* R) {
  const std::size_t M = n - L + 1;
  const double inv_m = 1.0 / static_cast<double>(M);
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t i = j; i < L; ++i) {
      // sum_m x[m+i] conj(x[m+j]) == conj(sum_m conj(x[m+i]) x[m+j])
      const cdouble s = std::conj(dot_conj_scalar(x + i, x + j, M)) * inv_m;
      R[j * L + i] = s;
      R[i * L + j] = std::conj(s);
    }
    R[j * L + j] = {R[j * L + j].real(), 0.0};
  }
}

}  // namespace orpam::simd::detail
