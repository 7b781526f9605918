// Compiled with -mavx2; only reached after a CPUID check.
#include "symdyn/kernels.hpp"

#include <immintrin.h>

namespace symdyn::kernels::avx2 {

std::size_t count_mismatches(const Symbol* a, const Symbol* b, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    count += 32 - static_cast<std::size_t>(__builtin_popcount(equal));
  }
  return count + scalar::count_mismatches(a + i, b + i, n - i);
}

std::size_t count_symbol(const Symbol* w, std::size_t n, Symbol symbol) {
  const __m256i needle = _mm256_set1_epi8(static_cast<char>(symbol));
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + i));
    auto hits = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(v, needle)));
    count += static_cast<std::size_t>(__builtin_popcount(hits));
  }
  return count + scalar::count_symbol(w + i, n - i, symbol);
}

std::size_t first_mismatch(const Symbol* a, const Symbol* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    if (equal != 0xffffffffu) return i + static_cast<std::size_t>(__builtin_ctz(~equal));
  }
  return i + scalar::first_mismatch(a + i, b + i, n - i);
}

}  // namespace symdyn::kernels::avx2
