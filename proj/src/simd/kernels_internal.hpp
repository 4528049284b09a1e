#pragma once

#include "orpam/simd/kernels.hpp"

namespace orpam::simd::detail {

cdouble dot_conj_scalar(const cdouble* a, const cdouble* b, std::size_t n);
void multiply_scalar(const cdouble* a, const cdouble* b, cdouble* out, std::size_t n);
void sliding_covariance_scalar(const cdouble* x, std::size_t n, std::size_t L, cdouble* R);

#ifdef ORPAM_HAVE_AVX2
cdouble dot_conj_avx2(const cdouble* a, const cdouble* b, std::size_t n);
void multiply_avx2(const cdouble* a, const cdouble* b, cdouble* out, std::size_t n);
void sliding_covariance_avx2(const cdouble* x, std::size_t n, std::size_t L, cdouble* R);
#endif

}  // namespace orpam::simd::detail
