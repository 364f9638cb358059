#include "aaa/errors.hpp"
#include "aaa/kernels.hpp"

namespace aaa::kernels {

namespace {

struct Table {
  void (*xor_into)(std::span<std::uint64_t>, std::span<const std::uint64_t>) noexcept;
  unsigned (*and_parity)(std::span<const std::uint64_t>, std::span<const std::uint64_t>) noexcept;
  std::size_t (*popcount)(std::span<const std::uint64_t>) noexcept;
  Isa isa;
};

constexpr Table kScalar{&scalar::xor_into, &scalar::and_parity, &scalar::popcount, Isa::scalar};
#if defined(AAA_HAVE_AVX2)
constexpr Table kAvx2{&avx2::xor_into, &avx2::and_parity, &avx2::popcount, Isa::avx2};
#endif

bool cpu_has_avx2() noexcept {
#if defined(AAA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table& table_for(Isa isa) noexcept {
#if defined(AAA_HAVE_AVX2)
  if (isa == Isa::avx2) return kAvx2;
#endif
  (void)isa;
  return kScalar;
}

const Table*& current() noexcept {
  static const Table* t = &table_for(detected_isa());
  return t;
}

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Isa detected_isa() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return current()->isa; }

void force_isa(std::optional<Isa> isa) {
  if (!isa) {
    current() = &table_for(detected_isa());
    return;
  }
  if (!isa_available(*isa)) throw ConfigError(std::string("kernel variant unavailable: ") + isa_name(*isa));
  current() = &table_for(*isa);
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept {
  current()->xor_into(dst, src);
}

unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept {
  return current()->and_parity(a, b);
}

std::size_t popcount(std::span<const std::uint64_t> words) noexcept { return current()->popcount(words); }

}  // namespace aaa::kernels
