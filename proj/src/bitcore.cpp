#include "aaa/bitcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aaa/errors.hpp"
#include "aaa/kernels.hpp"

namespace aaa {

std::uint8_t xor_fold(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw DomainError("empty fold");
  std::uint8_t acc = 0;
  for (auto b : bits) {
    if (b > 1) throw DomainError("xor_fold: non-binary value " + std::to_string(b));
    acc ^= b;
  }
  return acc;
}

double entropy_term(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double binary_entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("binary_entropy: alpha outside [0,1]");
  return entropy_term(alpha) + entropy_term(1.0 - alpha);
}

std::vector<std::uint64_t> pack_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint64_t> words(words_for(bits.size()), 0);
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k] & 1u) words[k / 64] |= std::uint64_t{1} << (k % 64);
  return words;
}

// --- BitMatrix ---

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpc_(words_for(rows)), words_(wpc_ * cols, 0) {
  if (rows == 0) throw ConfigError("BitMatrix needs at least one row");
}

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
  if (rows.empty()) throw ConfigError("BitMatrix needs at least one row");
  BitMatrix m(rows.size(), rows.front().size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    if (rows[l].size() != m.cols()) throw ConfigError("BitMatrix rows have unequal length");
    for (std::size_t i = 0; i < m.cols(); ++i) m.set(l, i, rows[l][i]);
  }
  return m;
}

std::uint8_t BitMatrix::get(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) throw ConfigError("BitMatrix index out of range");
  return static_cast<std::uint8_t>((words_[col * wpc_ + row / 64] >> (row % 64)) & 1u);
}

void BitMatrix::set(std::size_t row, std::size_t col, std::uint8_t bit) {
  if (row >= rows_ || col >= cols_) throw ConfigError("BitMatrix index out of range");
  if (bit > 1) throw DomainError("BitMatrix cells are binary");
  auto& w = words_[col * wpc_ + row / 64];
  const auto m = std::uint64_t{1} << (row % 64);
  w = bit ? (w | m) : (w & ~m);
}

std::span<const std::uint64_t> BitMatrix::column_words(std::size_t col) const {
  if (col >= cols_) throw ConfigError("BitMatrix column out of range");
  return {words_.data() + col * wpc_, wpc_};
}

std::span<std::uint64_t> BitMatrix::column_words(std::size_t col) {
  if (col >= cols_) throw ConfigError("BitMatrix column out of range");
  return {words_.data() + col * wpc_, wpc_};
}

std::vector<std::uint8_t> BitMatrix::column(std::size_t col) const {
  std::vector<std::uint8_t> out(rows_);
  for (std::size_t l = 0; l < rows_; ++l) out[l] = get(l, col);
  return out;
}

std::vector<std::uint8_t> BitMatrix::row(std::size_t row) const {
  std::vector<std::uint8_t> out(cols_);
  for (std::size_t i = 0; i < cols_; ++i) out[i] = get(row, i);
  return out;
}

// --- Gf2Matrix ---

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_(words_for(cols)), words_(wpr_ * rows, 0) {}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
  Gf2Matrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m.set(k, k, 1);
  return m;
}

Gf2Matrix Gf2Matrix::from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Gf2Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ConfigError("Gf2Matrix rows have unequal length");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Gf2Matrix Gf2Matrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  Gf2Matrix m(rows, cols);
  const std::uint64_t tail = (cols % 64) ? (std::uint64_t{1} << (cols % 64)) - 1 : ~std::uint64_t{0};
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = m.row_words(r);
    rng.fill(row);
    if (!row.empty()) row.back() &= tail;
  }
  return m;
}

std::uint8_t Gf2Matrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw ConfigError("Gf2Matrix index out of range");
  return static_cast<std::uint8_t>((words_[r * wpr_ + c / 64] >> (c % 64)) & 1u);
}

void Gf2Matrix::set(std::size_t r, std::size_t c, std::uint8_t bit) {
  if (r >= rows_ || c >= cols_) throw ConfigError("Gf2Matrix index out of range");
  if (bit > 1) throw DomainError("Gf2Matrix cells are binary");
  auto& w = words_[r * wpr_ + c / 64];
  const auto m = std::uint64_t{1} << (c % 64);
  w = bit ? (w | m) : (w & ~m);
}

std::span<const std::uint64_t> Gf2Matrix::row_words(std::size_t r) const {
  return {words_.data() + r * wpr_, wpr_};
}

std::span<std::uint64_t> Gf2Matrix::row_words(std::size_t r) { return {words_.data() + r * wpr_, wpr_}; }

std::vector<std::uint8_t> Gf2Matrix::multiply(std::span<const std::uint64_t> x) const {
  if (x.size() != wpr_) throw ConfigError("Gf2Matrix::multiply: vector length mismatch");
  std::vector<std::uint8_t> y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = static_cast<std::uint8_t>(kernels::and_parity(row_words(r), x));
  return y;
}

std::vector<std::uint8_t> Gf2Matrix::multiply_bits(std::span<const std::uint8_t> x) const {
  if (x.size() != cols_) throw ConfigError("Gf2Matrix::multiply: vector length mismatch");
  const auto packed = pack_bits(x);
  return multiply(packed);
}

Gf2Matrix Gf2Matrix::select_columns(std::span<const std::size_t> cols) const {
  Gf2Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols.size(); ++k) out.set(r, k, get(r, cols[k]));
  return out;
}

std::size_t gf2_rank(const Gf2Matrix& m) {
  Gf2Matrix work = m;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < work.cols() && rank < work.rows(); ++c) {
    const std::size_t word = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t pivot = rank;
    while (pivot < work.rows() && !(work.row_words(pivot)[word] & bit)) ++pivot;
    if (pivot == work.rows()) continue;
    if (pivot != rank) {
      auto a = work.row_words(pivot);
      auto b = work.row_words(rank);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    const auto pivot_row = work.row_words(rank);
    for (std::size_t r = rank + 1; r < work.rows(); ++r) {
      auto row = work.row_words(r);
      if (row[word] & bit) kernels::xor_into(row, pivot_row);
    }
    ++rank;
  }
  return rank;
}

}  // namespace aaa
