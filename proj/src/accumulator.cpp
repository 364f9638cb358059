#include "aaa/accumulator.hpp"

#include <algorithm>

#include "aaa/errors.hpp"
#include "aaa/kernels.hpp"

namespace aaa {

KeyState::KeyState(std::size_t length) : length_(length), words_(words_for(length), 0) {
  if (length == 0) throw ProtocolError("key length must be positive");
}

std::uint8_t KeyState::bit(std::size_t l) const {
  if (l >= length_) throw ProtocolError("key bit index out of range");
  return static_cast<std::uint8_t>((words_[l / 64] >> (l % 64)) & 1u);
}

std::vector<std::uint8_t> KeyState::bits() const {
  std::vector<std::uint8_t> out(length_);
  for (std::size_t l = 0; l < length_; ++l) out[l] = bit(l);
  return out;
}

std::string KeyState::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (length_ + 3) / 4;
  const std::size_t pad = digits * 4 - length_;
  std::string out;
  out.reserve(digits);
  unsigned nibble = 0;
  for (std::size_t k = 0; k < digits * 4; ++k) {
    const unsigned b = k < pad ? 0u : bit(k - pad);
    nibble = (nibble << 1) | b;
    if (k % 4 == 3) {
      out.push_back(kDigits[nibble]);
      nibble = 0;
    }
  }
  return out;
}

KeyState aaa_update(const KeyState& state, std::span<const std::uint8_t> column) {
  if (column.size() != state.length())
    throw ProtocolError("column of " + std::to_string(column.size()) + " bits for a " +
                        std::to_string(state.length()) + "-bit key");
  for (auto b : column)
    if (b > 1) throw DomainError("column bits must be binary");
  return aaa_update_packed(state, pack_bits(column));
}

KeyState aaa_update_packed(const KeyState& state, std::span<const std::uint64_t> column) {
  if (column.size() != state.words_.size()) throw ProtocolError("packed column width does not match key length");
  KeyState next = state;
  kernels::xor_into(next.words_, column);
  ++next.epoch_;
  return next;
}

KeyState aaa_reinit(const KeyState& state) { return KeyState(state.length()); }

KeyState aaa_accumulate(const BitMatrix& x) {
  KeyState key(x.rows());
  for (std::size_t i = 0; i < x.cols(); ++i) key = aaa_update_packed(key, x.column_words(i));
  return key;
}

BitMatrix partition_accumulate(const BitMatrix& x, const std::vector<std::vector<std::size_t>>& partition) {
  std::vector<bool> used(x.cols(), false);
  for (const auto& subset : partition) {
    for (auto i : subset) {
      if (i >= x.cols())
        throw ConfigError("time index " + std::to_string(i) + " outside [0, " + std::to_string(x.cols()) + ")");
      if (used[i]) throw ConfigError("time index " + std::to_string(i) + " appears in more than one subset");
      used[i] = true;
    }
  }
  BitMatrix out(x.rows(), partition.size());
  std::vector<std::uint64_t> acc(x.words_per_column());
  for (std::size_t s = 0; s < partition.size(); ++s) {
    std::fill(acc.begin(), acc.end(), 0);
    for (auto i : partition[s]) kernels::xor_into(acc, x.column_words(i));
    auto dst = out.column_words(s);
    std::copy(acc.begin(), acc.end(), dst.begin());
  }
  return out;
}

}  // namespace aaa
