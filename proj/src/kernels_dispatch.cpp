#include <algorithm>
#include <atomic>

#include "symdyn/kernels.hpp"

namespace symdyn::kernels {

namespace {

Isa probe() {
#if defined(SYMDYN_HAVE_AVX2_KERNELS)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

}  // namespace

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa force_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  return selected().exchange(isa);
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::scalar:
      break;
  }
  return "scalar";
}

std::size_t count_mismatches(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::size_t n = std::min(a.size(), b.size());
#if defined(SYMDYN_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::count_mismatches(a.data(), b.data(), n);
#endif
  return scalar::count_mismatches(a.data(), b.data(), n);
}

std::size_t count_symbol(std::span<const Symbol> word, Symbol symbol) {
#if defined(SYMDYN_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::count_symbol(word.data(), word.size(), symbol);
#endif
  return scalar::count_symbol(word.data(), word.size(), symbol);
}

std::size_t first_mismatch(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::size_t n = std::min(a.size(), b.size());
#if defined(SYMDYN_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::first_mismatch(a.data(), b.data(), n);
#endif
  return scalar::first_mismatch(a.data(), b.data(), n);
}

}  // namespace symdyn::kernels
