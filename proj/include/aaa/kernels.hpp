#pragma once

// Bit-packed GF(2) word kernels. Every operation has a portable scalar
// reference in `scalar::` and, on x86-64 builds, an AVX2 variant in `avx2::`.
// The unqualified entry points dispatch at runtime to the best variant the
// CPU supports.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace aaa::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;

/// Whether `isa` was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// The variant chosen by CPU detection.
Isa detected_isa() noexcept;

/// The variant currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Pin dispatch to `isa` (or restore detection with nullopt). Not thread-safe;
/// meant for tests and benchmarks. Throws ConfigError if `isa` is unavailable.
void force_isa(std::optional<Isa> isa);

/// dst[w] ^= src[w]; spans must have equal length.
void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept;

/// Parity of popcount(a & b), i.e. the GF(2) inner product.
unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept;

/// Total number of set bits.
std::size_t popcount(std::span<const std::uint64_t> words) noexcept;

namespace scalar {
void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept;
unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept;
std::size_t popcount(std::span<const std::uint64_t> words) noexcept;
}  // namespace scalar

#if defined(AAA_HAVE_AVX2)
namespace avx2 {
void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) noexcept;
unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) noexcept;
std::size_t popcount(std::span<const std::uint64_t> words) noexcept;
}  // namespace avx2
#endif

}  // namespace aaa::kernels
