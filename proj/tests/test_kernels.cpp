#include <doctest.h>

#include <bit>
#include <vector>

#include "aaa/bitcore.hpp"
#include "aaa/kernels.hpp"
#include "aaa/rng.hpp"

using namespace aaa;
namespace k = aaa::kernels;

namespace {

std::vector<std::uint64_t> random_words(Rng& rng, std::size_t n) {
  std::vector<std::uint64_t> w(n);
  rng.fill(w);
  return w;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar kernels agree with naive loops") {
    Rng rng(1);
    for (std::size_t n = 0; n < 40; ++n) {
      auto a = random_words(rng, n);
      const auto b = random_words(rng, n);
      std::size_t pop = 0;
      unsigned parity = 0;
      for (std::size_t i = 0; i < n; ++i) {
        pop += std::popcount(a[i]);
        parity ^= std::popcount(a[i] & b[i]) & 1u;
      }
      CHECK(k::scalar::popcount(a) == pop);
      CHECK(k::scalar::and_parity(a, b) == parity);
      auto expect = a;
      for (std::size_t i = 0; i < n; ++i) expect[i] ^= b[i];
      k::scalar::xor_into(a, b);
      CHECK(a == expect);
    }
  }

#if defined(AAA_HAVE_AVX2)
  TEST_CASE("avx2 kernels are equivalent to scalar on every length and alignment") {
    if (!k::isa_available(k::Isa::avx2)) return;
    Rng rng(2);
    for (std::size_t n = 0; n < 70; ++n)
      for (std::size_t offset = 0; offset < 4; ++offset) {
        auto base_a = random_words(rng, n + offset);
        const auto base_b = random_words(rng, n + offset);
        std::span<std::uint64_t> a(base_a.data() + offset, n);
        std::span<const std::uint64_t> b(base_b.data() + offset, n);
        CHECK(k::avx2::popcount(a) == k::scalar::popcount(a));
        CHECK(k::avx2::and_parity(a, b) == k::scalar::and_parity(a, b));
        std::vector<std::uint64_t> s(a.begin(), a.end());
        k::scalar::xor_into(s, b);
        k::avx2::xor_into(a, b);
        CHECK(std::equal(a.begin(), a.end(), s.begin()));
      }
  }

  TEST_CASE("avx2 popcount on saturated words") {
    if (!k::isa_available(k::Isa::avx2)) return;
    std::vector<std::uint64_t> ones(1000, ~0ULL);
    CHECK(k::avx2::popcount(ones) == 64000u);
  }
#endif

  TEST_CASE("rank is identical under every available kernel") {
    Rng rng(3);
    std::vector<Gf2Matrix> ms;
    for (int t = 0; t < 30; ++t) ms.push_back(Gf2Matrix::random(1 + rng.next_u64() % 40, 1 + rng.next_u64() % 300, rng));
    k::force_isa(k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    std::vector<std::size_t> scalar_ranks;
    for (const auto& m : ms) scalar_ranks.push_back(gf2_rank(m));
    if (k::isa_available(k::Isa::avx2)) {
      k::force_isa(k::Isa::avx2);
      for (std::size_t i = 0; i < ms.size(); ++i) CHECK(gf2_rank(ms[i]) == scalar_ranks[i]);
    }
    k::force_isa(std::nullopt);
    CHECK(k::active_isa() == k::detected_isa());
  }

  TEST_CASE("forcing an unavailable variant is rejected") {
    if (!k::isa_available(k::Isa::avx2)) {
      CHECK_THROWS(k::force_isa(k::Isa::avx2));
    } else {
      CHECK_NOTHROW(k::force_isa(k::Isa::avx2));
      k::force_isa(std::nullopt);
    }
  }
}
