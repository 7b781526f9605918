#include "symdyn/kernels.hpp"

namespace symdyn::kernels::scalar {

std::size_t count_mismatches(const Symbol* a, const Symbol* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += a[i] != b[i];
  return count;
}

std::size_t count_symbol(const Symbol* w, std::size_t n, Symbol symbol) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += w[i] == symbol;
  return count;
}

std::size_t first_mismatch(const Symbol* a, const Symbol* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return i;
  }
  return n;
}

}  // namespace symdyn::kernels::scalar
