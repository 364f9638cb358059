#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aaa/bitcore.hpp"
#include "aaa/rng.hpp"

namespace aaa {

/// Miss probabilities, one row per key position: grid[l][i] = mu_{l,i}.
using MissGrid = std::vector<std::vector<double>>;

enum class InterceptMode { per_bit, per_file };

/// How Eve misses bits. In per-bit mode every cell is erased independently
/// with its own probability; in per-file mode all rows of time step i share a
/// single erasure event with probability mu_i.
class InterceptSchedule {
 public:
  /// Throws DomainError for mu outside [0,1], ConfigError for ragged rows.
  static InterceptSchedule per_bit(MissGrid grid);
  static InterceptSchedule per_file(std::vector<double> mu);

  InterceptMode mode() const noexcept { return mode_; }
  /// Per-bit grid (empty in per-file mode).
  const MissGrid& grid() const noexcept { return grid_; }
  /// Per-file list (empty in per-bit mode).
  const std::vector<double>& per_time() const noexcept { return per_time_; }

  /// Number of time steps covered.
  std::size_t cols() const noexcept;
  /// Miss probability of cell (l, i); per-file ignores l.
  double miss(std::size_t row, std::size_t col) const;

  /// Throws ConfigError unless the schedule covers exactly `rows` x `cols`.
  void check_dimensions(std::size_t rows, std::size_t cols) const;

 private:
  InterceptMode mode_ = InterceptMode::per_bit;
  MissGrid grid_;
  std::vector<double> per_time_;
};

enum class Trit : std::uint8_t { zero = 0, one = 1, erased = 2 };

/// Eve's observation of a BitMatrix: each cell is the bit or an erasure.
class EveView {
 public:
  EveView(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Trit at(std::size_t row, std::size_t col) const { return cells_.at(col * rows_ + row); }
  void set(std::size_t row, std::size_t col, Trit t) { cells_.at(col * rows_ + row) = t; }
  bool erased(std::size_t row, std::size_t col) const { return at(row, col) == Trit::erased; }

  std::size_t erased_count() const noexcept;

  bool operator==(const EveView&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Trit> cells_;
};

EveView intercept_per_bit(const BitMatrix& x, const InterceptSchedule& sched, Rng& rng);
EveView intercept_per_file(const BitMatrix& x, const InterceptSchedule& sched, Rng& rng);
/// Dispatches on sched.mode().
EveView intercept(const BitMatrix& x, const InterceptSchedule& sched, Rng& rng);

}  // namespace aaa
