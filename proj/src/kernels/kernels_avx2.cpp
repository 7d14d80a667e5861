// AVX2 backend. The only real content is the vector log2; the objective
// driver is shared with the scalar backend. Compiled with -mavx2 -mfma for
// this translation unit only, so nothing here may be called without the
// runtime CPU check in dispatch.cpp.
#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace netmimo::kernels {
namespace {

// log2 of 4 positive normal doubles. Splits off the exponent, renormalizes
// the mantissa into [sqrt(2)/2, sqrt(2)) and sums the odd atanh series in
// t = (m-1)/(m+1) through t^19, whose truncation error is below 1e-16.
inline __m256d log2_pd(__m256d x) {
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  const __m256d one = _mm256_set1_pd(1.0);

  __m256i bits = _mm256_castpd_si256(x);
  // Biased exponents fit in the low 32 bits of each lane; gather those four
  // dwords into the lower half and widen to doubles.
  __m256i exp64 = _mm256_srli_epi64(bits, 52);
  __m256i packed = _mm256_permutevar8x32_epi32(exp64, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
  __m128i exp32 = _mm_sub_epi32(_mm256_castsi256_si128(packed), _mm_set1_epi32(1023));
  __m256d e = _mm256_cvtepi32_pd(exp32);

  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  __m256d fold = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), fold);
  e = _mm256_add_pd(e, _mm256_and_pd(fold, one));

  __m256d t = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d t2 = _mm256_mul_pd(t, t);
  __m256d p = _mm256_set1_pd(1.0 / 19);
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 17));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 15));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 13));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 11));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 9));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 7));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 5));
  p = _mm256_fmadd_pd(p, t2, _mm256_set1_pd(1.0 / 3));
  p = _mm256_fmadd_pd(p, t2, one);

  const __m256d two_over_ln2 = _mm256_set1_pd(2.8853900817779268);
  return _mm256_fmadd_pd(_mm256_mul_pd(t, p), two_over_ln2, e);
}

void avx2_log2_batch(const double* x, double* out, int n) {
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, log2_pd(_mm256_loadu_pd(x + i)));
  }
  if (i < n) {
    // Short tail: pad with ones (log2 = 0) and store only the live lanes.
    alignas(32) double buf[4] = {1, 1, 1, 1};
    for (int j = i; j < n; ++j) buf[j - i] = x[j];
    alignas(32) double res[4];
    _mm256_store_pd(res, log2_pd(_mm256_load_pd(buf)));
    for (int j = i; j < n; ++j) out[j] = res[j - i];
  }
}

void avx2_objective_batch(const ObjectiveTerms& terms, const double* thetas, int n_points,
                          double* out) {
  detail::objective_batch_with(terms, thetas, n_points, out, avx2_log2_batch);
}

}  // namespace

const KernelOps& avx2_ops() {
  static const KernelOps ops{"avx2", avx2_log2_batch, avx2_objective_batch};
  return ops;
}

}  // namespace netmimo::kernels
