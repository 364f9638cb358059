#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aaa/bitcore.hpp"
#include "aaa/rng.hpp"

namespace aaa {

/// Stay probabilities of a binary Markov chain: alphas[k] = p(x_{k+2} = x_{k+1}),
/// i.e. alpha_2 ... alpha_j. A j-step chain has j-1 entries.
struct MarkovParams {
  std::vector<double> alphas;

  std::size_t steps() const noexcept { return alphas.size() + 1; }
  /// Throws DomainError if any alpha is outside [0,1].
  void validate() const;
};

/// Positional selection of bits from one raw packet. Bit offsets count from the
/// first byte, most-significant bit first.
struct PacketSelector {
  std::string packet_id;
  std::vector<std::size_t> offsets;
  /// Provenance label for how the offsets were derived; extraction is positional only.
  std::string transform;
};

/// L x j matrix of independent uniform bits.
BitMatrix gen_iid_bits(std::size_t rows, std::size_t cols, Rng& rng);
BitMatrix gen_iid_bits(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// 1 x j Markov bit sequence: x_1 uniform, x_i = x_{i-1} with probability alpha_i.
/// `params` must have j-1 entries (none when j == 0). Only single-row chains are
/// modelled; rows != 1 throws ConfigError.
BitMatrix gen_markov_bits(std::size_t cols, const MarkovParams& params, Rng& rng, std::size_t rows = 1);
BitMatrix gen_markov_bits(std::size_t cols, const MarkovParams& params, std::uint64_t seed, std::size_t rows = 1);

/// Extract the bits at `sel.offsets` (MSB-first within each byte).
std::vector<std::uint8_t> select_bits(std::span<const std::uint8_t> packet, const PacketSelector& sel);

/// Whole file as raw bytes.
std::vector<std::uint8_t> read_packet(const std::filesystem::path& path);

}  // namespace aaa
