#include <cstddef>
#include <cstdint>

#include <immintrin.h>

// AVX2 variants. Matching results with the scalar reference is a hard
// requirement: the integer kernels are trivially exact, and pow runs the same
// repeated-squaring multiply schedule per lane (vmulpd rounds like scalar
// multiply; no FMA is emitted from intrinsics).
namespace keq::kernels::detail {

void gather_u32_avx2(std::uint32_t* dst, const std::uint32_t* table,
                     const std::uint32_t* idx, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i vi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
    __m256i g = _mm256_i32gather_epi32(reinterpret_cast<const int*>(table), vi, 4);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), g);
  }
  for (; i < n; ++i) dst[i] = table[idx[i]];
}

std::uint64_t fixed_mask64_avx2(const std::uint32_t* images, std::size_t n) {
  std::uint64_t mask = 0;
  std::size_t i = 0;
  const __m256i iota = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  for (; i + 8 <= n; i += 8) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(images + i));
    __m256i lane = _mm256_add_epi32(iota, _mm256_set1_epi32(static_cast<int>(i)));
    __m256i eq = _mm256_cmpeq_epi32(v, lane);
    unsigned bits = static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq)));
    mask |= static_cast<std::uint64_t>(bits) << i;
  }
  for (; i < n; ++i)
    if (images[i] == i) mask |= std::uint64_t{1} << i;
  return mask;
}

std::size_t filter_supersets64_avx2(const std::uint64_t* masks, std::size_t n,
                                    std::uint64_t support, std::uint32_t* out) {
  std::size_t k = 0;
  std::size_t i = 0;
  const __m256i vsup = _mm256_set1_epi64x(static_cast<long long>(support));
  for (; i + 4 <= n; i += 4) {
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks + i));
    __m256i anded = _mm256_and_si256(m, vsup);
    __m256i eq = _mm256_cmpeq_epi64(anded, vsup);
    unsigned bits = static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(eq)));
    while (bits) {
      unsigned j = static_cast<unsigned>(__builtin_ctz(bits));
      out[k++] = static_cast<std::uint32_t>(i + j);
      bits &= bits - 1;
    }
  }
  for (; i < n; ++i)
    if ((masks[i] & support) == support) out[k++] = static_cast<std::uint32_t>(i);
  return k;
}

void pow_inplace_avx2(double* xs, std::size_t n, unsigned e) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_set1_pd(1.0);
    __m256d b = _mm256_loadu_pd(xs + i);
    unsigned k = e;
    while (k) {
      if (k & 1u) r = _mm256_mul_pd(r, b);
      k >>= 1u;
      if (k) b = _mm256_mul_pd(b, b);
    }
    _mm256_storeu_pd(xs + i, r);
  }
  for (; i < n; ++i) {
    double r = 1.0;
    double b = xs[i];
    unsigned k = e;
    while (k) {
      if (k & 1u) r *= b;
      k >>= 1u;
      if (k) b *= b;
    }
    xs[i] = r;
  }
}

}  // namespace keq::kernels::detail
