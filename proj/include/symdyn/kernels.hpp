#pragma once

// Byte-wise counting kernels over symbol buffers. Each kernel has a portable
// scalar reference and an AVX2 variant; the public entry points pick one at
// runtime from CPUID.

#include <cstddef>
#include <cstdint>
#include <span>

#include "symdyn/word.hpp"

namespace symdyn::kernels {

enum class Isa { scalar, avx2 };

/// Best ISA supported by this CPU and build.
Isa detected_isa();
/// Override for tests and benchmarks; returns the previous setting.
Isa force_isa(Isa isa);
Isa active_isa();
const char* isa_name(Isa isa);

/// Number of positions i < min(|a|, |b|) with a[i] != b[i].
std::size_t count_mismatches(std::span<const Symbol> a, std::span<const Symbol> b);
/// Number of positions holding `symbol`.
std::size_t count_symbol(std::span<const Symbol> word, Symbol symbol);
/// Index of the first differing position, or min(|a|, |b|) when none.
std::size_t first_mismatch(std::span<const Symbol> a, std::span<const Symbol> b);

namespace scalar {
std::size_t count_mismatches(const Symbol* a, const Symbol* b, std::size_t n);
std::size_t count_symbol(const Symbol* w, std::size_t n, Symbol symbol);
std::size_t first_mismatch(const Symbol* a, const Symbol* b, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
#define SYMDYN_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t count_mismatches(const Symbol* a, const Symbol* b, std::size_t n);
std::size_t count_symbol(const Symbol* w, std::size_t n, Symbol symbol);
std::size_t first_mismatch(const Symbol* a, const Symbol* b, std::size_t n);
}  // namespace avx2
#endif

}  // namespace symdyn::kernels
