#pragma once

// Scenario files, report emission and the verification sweep behind the CLI.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "aaa/eavesdropper.hpp"
#include "aaa/errors.hpp"
#include "aaa/oracle.hpp"

namespace aaa {

/// Scenario file rejected; carries the 1-based line of the offending text (0 if unknown).
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Output { closed_form, oracle, mc, capacity, maurer, extractor, markov_sweep };

const char* output_name(Output o) noexcept;

/// Bits taken from raw packet files: file i supplies time step i, offsets[l] supplies row l.
struct PacketSource {
  std::vector<std::filesystem::path> files;
  std::vector<std::size_t> offsets;
};

struct Scenario {
  std::string name;
  SourceModel source;
  std::optional<PacketSource> packets;
  InterceptSchedule intercept = InterceptSchedule::per_file({});
  std::size_t rows = 1;
  std::size_t cols = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> extractor_n;
  double sweep_step = 0.01;
  std::set<Output> outputs;
};

/// Parses and validates a JSON scenario. Relative packet paths resolve against `base_dir`.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  unsigned jobs = 1;
};

/// Runs one scenario and writes `<out>/<name>/summary.json` plus its CSV tables.
/// Returns the report. Output bytes depend only on the scenario and the seed.
EquivocationReport run_scenario(const Scenario& scenario, const RunOptions& options);

/// Symmetric-model sweep over alpha in [0,1] with the given step, at miss probability `mu`.
/// Columns: alpha, h_alpha, mu_hat, mu_hat_mirror, eps2, eps3, eps3_gt_eps2, eps2_exact, eps3_gt_eps2_exact.
std::string markov_sweep_csv(double step, double mu);

struct ExtractorDemo {
  std::size_t n = 0;
  double mu = 0.0;
  std::size_t draws = 0;
  std::size_t full_rank = 0;
  double empirical_rate = 0.0;
  double analytic_rate = 0.0;
  double std_error = 0.0;
  double mean_secret_fraction = 0.0;
  std::string csv;
};

/// `draws` independent single-step extractor runs with n realizations each.
ExtractorDemo extractor_demo(std::size_t n, double mu, std::size_t draws, std::uint64_t seed);

struct CheckResult {
  std::string name;
  std::string description;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  std::size_t points = 0;
  bool passed = false;
};

struct VerifySummary {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_passed() const noexcept;
  std::string to_json() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

/// Closed form vs exact enumeration (and Monte Carlo / extractor) over the default grids.
VerifySummary verify_all(const VerifyOptions& options);

/// 12 significant digits, as used in every CSV cell.
std::string format_number(double v);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace aaa
