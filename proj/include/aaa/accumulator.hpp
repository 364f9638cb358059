#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aaa/bitcore.hpp"

namespace aaa {

/// The L-bit running key K_{., j} and the number of folded time steps j.
/// Immutable; updates return a new state.
class KeyState {
 public:
  /// All-zero key of `length` bits at epoch 0.
  explicit KeyState(std::size_t length);

  std::size_t length() const noexcept { return length_; }
  std::size_t epoch() const noexcept { return epoch_; }
  std::uint8_t bit(std::size_t l) const;
  std::vector<std::uint8_t> bits() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Lowercase hex of the key read as an L-bit number whose most significant
  /// bit is row 0; ceil(L/4) digits, left-padded with zero bits.
  std::string to_hex() const;

  bool operator==(const KeyState&) const = default;

 private:
  friend KeyState aaa_update(const KeyState&, std::span<const std::uint8_t>);
  friend KeyState aaa_update_packed(const KeyState&, std::span<const std::uint64_t>);

  std::size_t length_;
  std::size_t epoch_ = 0;
  std::vector<std::uint64_t> words_;
};

/// K_{l,j} = K_{l,j-1} xor column[l]; epoch + 1. Throws ProtocolError on length mismatch.
KeyState aaa_update(const KeyState& state, std::span<const std::uint8_t> column);

/// Same as aaa_update with the column already bit-packed (BitMatrix column layout).
KeyState aaa_update_packed(const KeyState& state, std::span<const std::uint64_t> column);

/// Zero key, epoch 0, same length.
KeyState aaa_reinit(const KeyState& state);

/// Fold every column of `x` into a fresh key.
KeyState aaa_accumulate(const BitMatrix& x);

/// One key bit per (row, subset): parity of the row's bits at the subset's time
/// indices (0-based). Result has x.rows() rows and partition.size() columns.
/// Throws ConfigError for overlapping subsets or out-of-range indices.
BitMatrix partition_accumulate(const BitMatrix& x, const std::vector<std::vector<std::size_t>>& partition);

}  // namespace aaa
