#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "orpam/error.hpp"

namespace orpam::simd {

namespace {

bool cpu_has_avx2() {
#if defined(ORPAM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable kScalar{
    "scalar",
    &detail::dot_conj_scalar,
    &detail::multiply_scalar,
    &detail::sliding_covariance_scalar,
};

#ifdef ORPAM_HAVE_AVX2
const KernelTable kAvx2{
    "avx2",
    &detail::dot_conj_avx2,
    &detail::multiply_avx2,
    &detail::sliding_covariance_avx2,
};
#endif

const KernelTable& select() {
  const char* forced = std::getenv("ORPAM_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") return kScalar;
  if (const KernelTable* v = avx2_kernels()) return *v;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#ifdef ORPAM_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

cdouble dot_conj(std::span<const cdouble> a, std::span<const cdouble> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "dot_conj: length mismatch");
  return active_kernels().dot_conj(a.data(), b.data(), a.size());
}

void multiply(std::span<const cdouble> a, std::span<const cdouble> b, std::span<cdouble> out) {
  if (a.size() != b.size() || a.size() != out.size())
    throw Error(ErrorCode::kDimensionMismatch, "multiply: length mismatch");
  active_kernels().multiply(a.data(), b.data(), out.data(), a.size());
}

void sliding_covariance(std::span<const cdouble> x, std::size_t L, std::span<cdouble> R) {
  if (L < 1 || L > x.size() || R.size() != L * L)
    throw Error(ErrorCode::kDimensionMismatch, "sliding_covariance: bad dimensions");
  active_kernels().sliding_covariance(x.data(), x.size(), L, R.data());
}

}  // namespace orpam::simd
