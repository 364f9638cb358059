#pragma once

// Ground truth for the closed forms: exact conditional entropy by enumeration,
// Monte Carlo estimation, the multi-realization hash extractor and the
// one-time-pad scheme.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aaa/bitcore.hpp"
#include "aaa/eavesdropper.hpp"
#include "aaa/equivocation.hpp"
#include "aaa/rng.hpp"
#include "aaa/source.hpp"

namespace aaa {

enum class SourceKind { iid, markov };

struct SourceModel {
  SourceKind kind = SourceKind::iid;
  MarkovParams markov;

  static SourceModel iid() { return {}; }
  static SourceModel markov_chain(MarkovParams params) { return {SourceKind::markov, std::move(params)}; }
};

/// Cost bounds for exact enumeration.
struct EnumerationLimits {
  std::size_t max_row_steps = 12;      // per-bit, rows factorized: j
  std::size_t max_per_bit_cells = 16;  // per-bit: L * j
  std::size_t max_file_steps = 12;     // per-file: j
  std::size_t max_markov_steps = 12;   // Markov (single row): j
  std::size_t max_joint_cells = 8;     // per-bit without row factorization: L * j
  std::size_t max_joint_file_cells = 12;  // per-file without row factorization: L * j
};

struct OracleConfig {
  SourceModel source;
  InterceptSchedule intercept = InterceptSchedule::per_file({});
  std::size_t rows = 1;
  std::size_t cols = 0;
  EnumerationLimits limits;
  /// Exploit independence across rows (per-bit: rows are independent; per-file:
  /// rows are independent given the shared erasure pattern). false enumerates
  /// the full joint system, within the smaller joint limits.
  bool factorize = true;
};

/// H(K | E) restricted to one erasure pattern, for every pattern of a small
/// system. Patterns are bit masks over independent erasure events (cells or
/// whole columns); the source distribution is fixed at construction, so the
/// equivocation for any miss schedule is a weighted sum over the table.
class ErasureEntropyTable {
 public:
  /// One row of independent uniform bits, one event per time step.
  static ErasureEntropyTable iid_row(std::size_t steps);
  /// One Markov row, one event per time step.
  static ErasureEntropyTable markov_row(const MarkovParams& params);
  /// rows x cols independent uniform bits, one event per cell; event index is col * rows + row.
  static ErasureEntropyTable iid_joint_per_bit(std::size_t rows, std::size_t cols);
  /// rows x cols independent uniform bits, one event per column.
  static ErasureEntropyTable iid_joint_per_file(std::size_t rows, std::size_t cols);

  std::size_t events() const noexcept { return events_; }
  /// H(K | E, pattern) in bits.
  double entropy(std::uint64_t erased_mask) const { return entropy_.at(erased_mask); }

  /// sum over patterns of P(pattern) * entropy(pattern), event e erased with probability miss[e].
  double expected(std::span<const double> miss) const;

 private:
  ErasureEntropyTable(std::size_t events, std::vector<double> entropy)
      : events_(events), entropy_(std::move(entropy)) {}

  std::size_t events_;
  std::vector<double> entropy_;
};

/// H(K_j | E_j) by exhaustive enumeration of source realizations and erasure
/// patterns. Throws CapacityError past the enumeration limits,
/// UnsupportedModelError for multi-row Markov sources, ConfigError on
/// dimension mismatch.
double exact_equivocation(const OracleConfig& cfg);

/// Simulated equivocation: per key bit, the fraction of trials in which at
/// least one contributing bit was missed, summed over key bits, with its
/// binomial standard error. Trials are processed in fixed-size chunks, each on
/// its own split stream, so the result depends only on the seed and not on
/// `jobs`. Throws UnsupportedModelError for Markov sources.
MonteCarloEstimate mc_equivocation_independent(const SourceModel& source, const InterceptSchedule& sched,
                                               std::size_t rows, std::size_t trials, std::uint64_t seed,
                                               unsigned jobs = 1);

/// Multi-realization privacy amplification: per time step i a random linear
/// hash compresses the n realizations of X_i into floor(mu_i n) bits.
struct ExtractorRun {
  std::size_t n = 0;
  std::vector<double> mu;
  std::vector<Gf2Matrix> hashes;
  std::vector<std::vector<std::uint8_t>> outputs;
  /// Realizations of X_i that Eve missed.
  std::vector<std::size_t> missed;
  /// Rank of hash i restricted to the missed coordinates.
  std::vector<std::size_t> restricted_rank;

  std::size_t output_length() const noexcept;
  /// Output bits that are uniform given Eve's view (sum of restricted ranks).
  std::size_t secret_bits() const noexcept;
  bool full_rank(std::size_t i) const { return restricted_rank.at(i) == hashes.at(i).rows(); }
};

/// `realizations[m]` is the m-th independent 1 x j draw and `views[m]` Eve's view of it.
ExtractorRun hash_extract(std::span<const double> mu, std::span<const BitMatrix> realizations,
                          std::span<const EveView> views, Rng& rng);

/// Draws n i.i.d. realizations with per-bit erasures, then runs hash_extract.
ExtractorRun simulate_extractor(std::size_t n, std::span<const double> mu, Rng& rng);

/// floor(mu * n), the hash output length.
std::size_t extractor_rows(double mu, std::size_t n);

/// P(uniform random rows x cols GF(2) matrix has rank == rows) = prod_{t=1}^{rows} (1 - 2^{t-1-cols}).
double full_row_rank_probability(std::size_t rows, std::size_t cols);

/// Full-row-rank probability of the restricted hash averaged over the
/// Binomial(n, mu) number of missed coordinates.
double expected_full_rank_rate(std::size_t n, double mu);

/// Distribution of the hash output given Eve's view: enumerates every value
/// of the missed coordinates (observed ones fixed to `values`) and counts each
/// output, indexed by the output read as an integer (row 0 = bit 0).
std::vector<std::size_t> extractor_output_histogram(const Gf2Matrix& hash, std::span<const std::uint8_t> values,
                                                    std::span<const std::uint8_t> missed);

/// Element-wise S xor X. Throws ConfigError on length mismatch.
std::vector<std::uint8_t> otp_encode(std::span<const std::uint8_t> secret, std::span<const std::uint8_t> pad);

/// Secrecy rate I(S; X, S^X) - I(S; E, S^X) of the public one-time-pad
/// scheme, summed over time steps, from the exact per-step joint distribution.
double otp_secrecy_rate(std::span<const double> mu);

}  // namespace aaa
