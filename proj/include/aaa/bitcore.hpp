#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aaa/rng.hpp"

namespace aaa {

/// Parity of a non-empty bit sequence. Throws DomainError("empty fold") on empty input.
std::uint8_t xor_fold(std::span<const std::uint8_t> bits);

/// -p log2 p, with 0 log 0 = 0.
double entropy_term(double p) noexcept;

/// h(alpha) in bits. Throws DomainError outside [0,1].
double binary_entropy(double alpha);

/// Number of 64-bit words needed for `bits` bits.
constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + 63) / 64; }

std::vector<std::uint64_t> pack_bits(std::span<const std::uint8_t> bits);

/// Exchanged bits X[l][i]: `rows` key positions by `cols` time steps.
///
/// Storage is column-major by time, one bit-packed column of `rows` bits per
/// time step, so a time step is a contiguous word span that can be folded into
/// a key directly.
class BitMatrix {
 public:
  /// Throws ConfigError when rows == 0.
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix from_rows(const std::vector<std::vector<std::uint8_t>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_column() const noexcept { return wpc_; }

  std::uint8_t get(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, std::uint8_t bit);

  std::span<const std::uint64_t> column_words(std::size_t col) const;
  std::span<std::uint64_t> column_words(std::size_t col);
  std::vector<std::uint8_t> column(std::size_t col) const;
  std::vector<std::uint8_t> row(std::size_t row) const;

  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t wpc_;
  std::vector<std::uint64_t> words_;
};

/// Dense matrix over GF(2), rows bit-packed.
class Gf2Matrix {
 public:
  Gf2Matrix(std::size_t rows, std::size_t cols);

  static Gf2Matrix identity(std::size_t n);
  static Gf2Matrix from_rows(const std::vector<std::vector<std::uint8_t>>& rows);
  /// Every entry independent and uniform.
  static Gf2Matrix random(std::size_t rows, std::size_t cols, Rng& rng);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return wpr_; }

  std::uint8_t get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, std::uint8_t bit);

  std::span<const std::uint64_t> row_words(std::size_t r) const;
  std::span<std::uint64_t> row_words(std::size_t r);

  /// y = M x over GF(2); `x` is bit-packed with cols() bits.
  std::vector<std::uint8_t> multiply(std::span<const std::uint64_t> x) const;
  std::vector<std::uint8_t> multiply_bits(std::span<const std::uint8_t> x) const;

  /// Sub-matrix keeping the listed columns in the given order.
  Gf2Matrix select_columns(std::span<const std::size_t> cols) const;

  bool operator==(const Gf2Matrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t wpr_;
  std::vector<std::uint64_t> words_;
};

/// Rank over GF(2) by Gaussian elimination.
std::size_t gf2_rank(const Gf2Matrix& m);

}  // namespace aaa
