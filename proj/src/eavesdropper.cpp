#include "aaa/eavesdropper.hpp"

#include <algorithm>
#include <string>

#include "aaa/errors.hpp"

namespace aaa {

namespace {

void check_probability(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("miss probability outside [0,1]");
}

Trit copy_of(const BitMatrix& x, std::size_t l, std::size_t i) {
  return x.get(l, i) ? Trit::one : Trit::zero;
}

}  // namespace

InterceptSchedule InterceptSchedule::per_bit(MissGrid grid) {
  if (grid.empty()) throw ConfigError("per-bit schedule needs at least one row");
  for (const auto& row : grid) {
    if (row.size() != grid.front().size()) throw ConfigError("per-bit schedule rows have unequal length");
    for (double mu : row) check_probability(mu);
  }
  InterceptSchedule s;
  s.mode_ = InterceptMode::per_bit;
  s.grid_ = std::move(grid);
  return s;
}

InterceptSchedule InterceptSchedule::per_file(std::vector<double> mu) {
  for (double m : mu) check_probability(m);
  InterceptSchedule s;
  s.mode_ = InterceptMode::per_file;
  s.per_time_ = std::move(mu);
  return s;
}

std::size_t InterceptSchedule::cols() const noexcept {
  return mode_ == InterceptMode::per_file ? per_time_.size() : grid_.front().size();
}

double InterceptSchedule::miss(std::size_t row, std::size_t col) const {
  if (mode_ == InterceptMode::per_file) return per_time_.at(col);
  return grid_.at(row).at(col);
}

void InterceptSchedule::check_dimensions(std::size_t rows, std::size_t cols) const {
  if (mode_ == InterceptMode::per_bit) {
    if (grid_.size() != rows || grid_.front().size() != cols)
      throw ConfigError("per-bit schedule is " + std::to_string(grid_.size()) + "x" +
                        std::to_string(grid_.front().size()) + ", bits are " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  } else if (per_time_.size() != cols) {
    throw ConfigError("per-file schedule has " + std::to_string(per_time_.size()) + " entries, bits have " +
                      std::to_string(cols) + " time steps");
  }
}

EveView::EveView(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, Trit::erased) {}

std::size_t EveView::erased_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), Trit::erased));
}

EveView intercept_per_bit(const BitMatrix& x, const InterceptSchedule& sched, Rng& rng) {
  if (sched.mode() != InterceptMode::per_bit) throw ConfigError("intercept_per_bit needs a per-bit schedule");
  sched.check_dimensions(x.rows(), x.cols());
  EveView view(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t l = 0; l < x.rows(); ++l)
      if (!rng.bernoulli(sched.grid()[l][i])) view.set(l, i, copy_of(x, l, i));
  return view;
}

EveView intercept_per_file(const BitMatrix& x, const InterceptSchedule& sched, Rng& rng) {
  if (sched.mode() != InterceptMode::per_file) throw ConfigError("intercept_per_file needs a per-file schedule");
  sched.check_dimensions(x.rows(), x.cols());
  EveView view(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.cols(); ++i) {
    if (rng.bernoulli(sched.per_time()[i])) continue;
    for (std::size_t l = 0; l < x.rows(); ++l) view.set(l, i, copy_of(x, l, i));
  }
  return view;
}

EveView intercept(const BitMatrix& x, const InterceptSchedule& sched, Rng& rng) {
  return sched.mode() == InterceptMode::per_bit ? intercept_per_bit(x, sched, rng)
                                                : intercept_per_file(x, sched, rng);
}

}  // namespace aaa
