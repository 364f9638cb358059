// Compiled with -mavx2; only reached after a runtime CPU check.
#include "aaa/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace aaa::kernels::avx2 {

namespace {

// Nibble-table popcount per byte, horizontally summed into four u64 lanes.
inline __m256i popcount_lanes(__m256i v) noexcept {
  const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(table, lo), _mm256_shuffle_epi8(table, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t fold_xor(__m256i v) noexcept {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] ^ lanes[1] ^ lanes[2] ^ lanes[3];
}

}  // namespace

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept {
  const std::size_t n = dst.size();
  std::size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst.data() + w);
    const auto* s = reinterpret_cast<const __m256i*>(src.data() + w);
    _mm256_storeu_si256(d, _mm256_xor_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; w < n; ++w) dst[w] ^= src[w];
}

unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept {
  const std::size_t n = a.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    const auto va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + w));
    const auto vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + w));
    acc = _mm256_xor_si256(acc, _mm256_and_si256(va, vb));
  }
  std::uint64_t tail = fold_xor(acc);
  for (; w < n; ++w) tail ^= a[w] & b[w];
  return static_cast<unsigned>(std::popcount(tail) & 1);
}

std::size_t popcount(std::span<const std::uint64_t> words) noexcept {
  const std::size_t n = words.size();
  __m256i acc = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= n; w += 4) {
    const auto v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words.data() + w));
    acc = _mm256_add_epi64(acc, popcount_lanes(v));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; w < n; ++w) total += static_cast<std::size_t>(std::popcount(words[w]));
  return total;
}

}  // namespace aaa::kernels::avx2
