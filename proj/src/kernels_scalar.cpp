#include "aaa/kernels.hpp"

#include <bit>

namespace aaa::kernels::scalar {

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept {
  for (std::size_t w = 0; w < dst.size(); ++w) dst[w] ^= src[w];
}

unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept {
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < a.size(); ++w) acc ^= a[w] & b[w];
  return static_cast<unsigned>(std::popcount(acc) & 1);
}

std::size_t popcount(std::span<const std::uint64_t> words) noexcept {
  std::size_t n = 0;
  for (auto w : words) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

}  // namespace aaa::kernels::scalar
