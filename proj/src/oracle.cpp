#include "aaa/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "aaa/errors.hpp"

namespace aaa {

namespace {

// Every source realization x is a bit mask over `cells` cells; key bit l is
// the parity of x over row_masks[l]. Erasure event e hides event_cells[e].
struct EnumerationSystem {
  std::size_t cells = 0;
  std::vector<double> px;  // size 2^cells
  std::vector<std::uint32_t> row_masks;
  std::vector<std::uint32_t> event_cells;
};

std::uint32_t key_of(std::uint32_t x, const std::vector<std::uint32_t>& row_masks) {
  std::uint32_t k = 0;
  for (std::size_t l = 0; l < row_masks.size(); ++l)
    k |= static_cast<std::uint32_t>(std::popcount(x & row_masks[l]) & 1) << l;
  return k;
}

// H(K | X_observed) = -sum_{obs,k} p(k,obs) log2 p(k|obs).
double masked_conditional_entropy(const EnumerationSystem& sys, std::uint32_t erased) {
  const std::uint32_t all = sys.cells == 32 ? ~0u : ((1u << sys.cells) - 1);
  const std::uint32_t observed = all & ~erased;
  std::vector<double> joint(std::size_t{1} << sys.row_masks.size(), 0.0);
  std::vector<std::uint32_t> touched;
  double h = 0.0;

  std::uint32_t obs = 0;
  while (true) {
    double p_obs = 0.0;
    std::uint32_t hidden = 0;
    while (true) {
      const std::uint32_t x = obs | hidden;
      const double p = sys.px[x];
      if (p > 0.0) {
        const auto k = key_of(x, sys.row_masks);
        if (joint[k] == 0.0) touched.push_back(k);
        joint[k] += p;
        p_obs += p;
      }
      if (hidden == erased) break;
      hidden = (hidden - erased) & erased;
    }
    for (auto k : touched) {
      const double pk = joint[k];
      h -= pk * std::log2(pk / p_obs);
      joint[k] = 0.0;
    }
    touched.clear();
    if (obs == observed) break;
    obs = (obs - observed) & observed;
  }
  return h;
}

std::vector<double> table_entries(const EnumerationSystem& sys) {
  const std::size_t patterns = std::size_t{1} << sys.event_cells.size();
  std::vector<double> out(patterns);
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    std::uint32_t erased = 0;
    for (std::size_t e = 0; e < sys.event_cells.size(); ++e)
      if (mask >> e & 1u) erased |= sys.event_cells[e];
    out[mask] = masked_conditional_entropy(sys, erased);
  }
  return out;
}

EnumerationSystem iid_system(std::size_t rows, std::size_t cols) {
  EnumerationSystem sys;
  sys.cells = rows * cols;
  sys.px.assign(std::size_t{1} << sys.cells, std::ldexp(1.0, -static_cast<int>(sys.cells)));
  sys.row_masks.assign(rows, 0);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t l = 0; l < rows; ++l) sys.row_masks[l] |= 1u << (i * rows + l);
  return sys;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw CapacityError("exact enumeration limit exceeded (" + what + "); use Monte Carlo instead");
}

std::vector<double> schedule_row(const InterceptSchedule& sched, std::size_t row, std::size_t cols) {
  std::vector<double> mu(cols);
  for (std::size_t i = 0; i < cols; ++i) mu[i] = sched.miss(row, i);
  return mu;
}

double entropy_of(const std::map<std::vector<int>, double>& dist) {
  double h = 0.0;
  for (const auto& [_, p] : dist) h += entropy_term(p);
  return h;
}

// I(A;B) from a joint table keyed by (a..., b...) with `split` leading A entries.
double mutual_information(const std::map<std::vector<int>, double>& joint, std::size_t split) {
  std::map<std::vector<int>, double> pa, pb;
  for (const auto& [key, p] : joint) {
    pa[std::vector<int>(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(split))] += p;
    pb[std::vector<int>(key.begin() + static_cast<std::ptrdiff_t>(split), key.end())] += p;
  }
  return entropy_of(pa) + entropy_of(pb) - entropy_of(joint);
}

}  // namespace

// --- ErasureEntropyTable ---

ErasureEntropyTable ErasureEntropyTable::iid_row(std::size_t steps) {
  auto sys = iid_system(1, steps);
  for (std::size_t i = 0; i < steps; ++i) sys.event_cells.push_back(1u << i);
  return {steps, table_entries(sys)};
}

ErasureEntropyTable ErasureEntropyTable::markov_row(const MarkovParams& params) {
  params.validate();
  const std::size_t steps = params.steps();
  EnumerationSystem sys;
  sys.cells = steps;
  sys.row_masks = {steps == 32 ? ~0u : (1u << steps) - 1};
  sys.px.resize(std::size_t{1} << steps);
  for (std::uint32_t x = 0; x < sys.px.size(); ++x) {
    double p = 0.5;
    for (std::size_t i = 1; i < steps; ++i) {
      const bool stay = ((x >> i) & 1u) == ((x >> (i - 1)) & 1u);
      p *= stay ? params.alphas[i - 1] : 1.0 - params.alphas[i - 1];
    }
    sys.px[x] = p;
  }
  for (std::size_t i = 0; i < steps; ++i) sys.event_cells.push_back(1u << i);
  return {steps, table_entries(sys)};
}

ErasureEntropyTable ErasureEntropyTable::iid_joint_per_bit(std::size_t rows, std::size_t cols) {
  auto sys = iid_system(rows, cols);
  for (std::size_t c = 0; c < rows * cols; ++c) sys.event_cells.push_back(1u << c);
  return {rows * cols, table_entries(sys)};
}

ErasureEntropyTable ErasureEntropyTable::iid_joint_per_file(std::size_t rows, std::size_t cols) {
  auto sys = iid_system(rows, cols);
  for (std::size_t i = 0; i < cols; ++i) {
    std::uint32_t column = 0;
    for (std::size_t l = 0; l < rows; ++l) column |= 1u << (i * rows + l);
    sys.event_cells.push_back(column);
  }
  return {cols, table_entries(sys)};
}

double ErasureEntropyTable::expected(std::span<const double> miss) const {
  if (miss.size() != events_)
    throw ConfigError("schedule has " + std::to_string(miss.size()) + " events, table has " +
                      std::to_string(events_));
  for (double m : miss)
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("miss probability outside [0,1]");
  double total = 0.0;
  for (std::size_t mask = 0; mask < entropy_.size(); ++mask) {
    double p = 1.0;
    for (std::size_t e = 0; e < events_; ++e) p *= (mask >> e & 1u) ? miss[e] : 1.0 - miss[e];
    total += p * entropy_[mask];
  }
  return total;
}

// --- exact equivocation ---

double exact_equivocation(const OracleConfig& cfg) {
  const auto& sched = cfg.intercept;
  const auto& lim = cfg.limits;
  if (cfg.rows == 0) throw ConfigError("key length must be positive");
  sched.check_dimensions(cfg.rows, cfg.cols);

  if (cfg.source.kind == SourceKind::markov) {
    if (cfg.rows != 1) throw UnsupportedModelError("Markov sources are single-row");
    if (cfg.source.markov.steps() != cfg.cols && !(cfg.cols == 0 && cfg.source.markov.alphas.empty()))
      throw ConfigError("Markov chain length does not match the number of time steps");
    require(cfg.cols <= lim.max_markov_steps, "Markov j = " + std::to_string(cfg.cols));
    if (cfg.cols == 0) return 0.0;
    return ErasureEntropyTable::markov_row(cfg.source.markov).expected(schedule_row(sched, 0, cfg.cols));
  }

  const std::size_t cells = cfg.rows * cfg.cols;
  if (sched.mode() == InterceptMode::per_bit) {
    if (cfg.factorize) {
      require(cfg.cols <= lim.max_row_steps, "per-bit j = " + std::to_string(cfg.cols));
      require(cells <= lim.max_per_bit_cells, "per-bit L*j = " + std::to_string(cells));
      const auto table = ErasureEntropyTable::iid_row(cfg.cols);
      double total = 0.0;
      for (std::size_t l = 0; l < cfg.rows; ++l) total += table.expected(sched.grid()[l]);
      return total;
    }
    require(cells <= lim.max_joint_cells, "joint per-bit L*j = " + std::to_string(cells));
    std::vector<double> miss(cells);
    for (std::size_t i = 0; i < cfg.cols; ++i)
      for (std::size_t l = 0; l < cfg.rows; ++l) miss[i * cfg.rows + l] = sched.grid()[l][i];
    return ErasureEntropyTable::iid_joint_per_bit(cfg.rows, cfg.cols).expected(miss);
  }

  if (cfg.factorize) {
    require(cfg.cols <= lim.max_file_steps, "per-file j = " + std::to_string(cfg.cols));
    // Given the shared column pattern, rows are independent and identically distributed.
    return static_cast<double>(cfg.rows) * ErasureEntropyTable::iid_row(cfg.cols).expected(sched.per_time());
  }
  require(cells <= lim.max_joint_file_cells, "joint per-file L*j = " + std::to_string(cells));
  return ErasureEntropyTable::iid_joint_per_file(cfg.rows, cfg.cols).expected(sched.per_time());
}

// --- Monte Carlo ---

MonteCarloEstimate mc_equivocation_independent(const SourceModel& source, const InterceptSchedule& sched,
                                               std::size_t rows, std::size_t trials, std::uint64_t seed,
                                               unsigned jobs) {
  if (source.kind != SourceKind::iid) throw UnsupportedModelError("Monte Carlo estimate needs an independent source");
  if (rows == 0) throw ConfigError("key length must be positive");
  if (trials == 0) throw ConfigError("Monte Carlo needs at least one trial");
  const std::size_t cols = sched.cols();
  sched.check_dimensions(rows, cols);

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::vector<std::size_t>> secret(chunks, std::vector<std::size_t>(rows, 0));
  const Rng root(seed);

  auto run_chunk = [&](std::size_t c) {
    Rng rng = root.split(c);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(trials, begin + kChunk);
    auto& counts = secret[c];
    for (std::size_t t = begin; t < end; ++t) {
      const BitMatrix x = gen_iid_bits(rows, cols, rng);
      const EveView view = intercept(x, sched, rng);
      for (std::size_t l = 0; l < rows; ++l) {
        bool any_missed = false;
        for (std::size_t i = 0; i < cols && !any_missed; ++i) any_missed = view.erased(l, i);
        counts[l] += any_missed ? 1 : 0;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  const double n = static_cast<double>(trials);
  MonteCarloEstimate est;
  double variance = 0.0;
  std::vector<double> p(rows, 0.0);
  for (std::size_t l = 0; l < rows; ++l) {
    std::size_t total = 0;
    for (const auto& counts : secret) total += counts[l];
    p[l] = static_cast<double>(total) / n;
    est.value += p[l];
  }
  if (sched.mode() == InterceptMode::per_file) {
    // One shared event per trial: the row indicators coincide.
    const double q = p.front();
    est.std_error = static_cast<double>(rows) * std::sqrt(q * (1.0 - q) / n);
  } else {
    for (double q : p) variance += q * (1.0 - q) / n;
    est.std_error = std::sqrt(variance);
  }
  return est;
}

// --- extractor ---

std::size_t ExtractorRun::output_length() const noexcept {
  std::size_t total = 0;
  for (const auto& h : hashes) total += h.rows();
  return total;
}

std::size_t ExtractorRun::secret_bits() const noexcept {
  std::size_t total = 0;
  for (auto r : restricted_rank) total += r;
  return total;
}

std::size_t extractor_rows(double mu, std::size_t n) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("miss probability outside [0,1]");
  return static_cast<std::size_t>(std::floor(mu * static_cast<double>(n)));
}

ExtractorRun hash_extract(std::span<const double> mu, std::span<const BitMatrix> realizations,
                          std::span<const EveView> views, Rng& rng) {
  const std::size_t n = realizations.size();
  if (n == 0) throw ConfigError("extractor needs at least one realization");
  if (views.size() != n) throw ConfigError("one Eve view per realization required");
  for (std::size_t m = 0; m < n; ++m) {
    if (realizations[m].rows() != 1 || realizations[m].cols() != mu.size())
      throw ConfigError("realizations must be 1 x j with j = schedule length");
    if (views[m].rows() != 1 || views[m].cols() != mu.size()) throw ConfigError("Eve view shape mismatch");
  }

  ExtractorRun run;
  run.n = n;
  run.mu.assign(mu.begin(), mu.end());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::vector<std::uint8_t> column(n);
    std::vector<std::size_t> missed;
    for (std::size_t m = 0; m < n; ++m) {
      column[m] = realizations[m].get(0, i);
      if (views[m].erased(0, i)) missed.push_back(m);
    }
    Gf2Matrix hash = Gf2Matrix::random(extractor_rows(mu[i], n), n, rng);
    run.outputs.push_back(hash.multiply_bits(column));
    run.missed.push_back(missed.size());
    run.restricted_rank.push_back(gf2_rank(hash.select_columns(missed)));
    run.hashes.push_back(std::move(hash));
  }
  return run;
}

ExtractorRun simulate_extractor(std::size_t n, std::span<const double> mu, Rng& rng) {
  const auto sched = InterceptSchedule::per_bit({std::vector<double>(mu.begin(), mu.end())});
  std::vector<BitMatrix> xs;
  std::vector<EveView> views;
  xs.reserve(n);
  views.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    xs.push_back(gen_iid_bits(1, mu.size(), rng));
    views.push_back(intercept_per_bit(xs.back(), sched, rng));
  }
  return hash_extract(mu, xs, views, rng);
}

double full_row_rank_probability(std::size_t rows, std::size_t cols) {
  if (rows > cols) return 0.0;
  double p = 1.0;
  for (std::size_t t = 1; t <= rows; ++t)
    p *= 1.0 - std::ldexp(1.0, static_cast<int>(t) - 1 - static_cast<int>(cols));
  return p;
}

double expected_full_rank_rate(std::size_t n, double mu) {
  const std::size_t rows = extractor_rows(mu, n);
  double rate = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double log_pmf = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                           std::lgamma(static_cast<double>(n - k) + 1);
    double pmf;
    if (mu == 0.0)
      pmf = k == 0 ? 1.0 : 0.0;
    else if (mu == 1.0)
      pmf = k == n ? 1.0 : 0.0;
    else
      pmf = std::exp(log_pmf + static_cast<double>(k) * std::log(mu) +
                     static_cast<double>(n - k) * std::log1p(-mu));
    rate += pmf * full_row_rank_probability(rows, k);
  }
  return rate;
}

std::vector<std::size_t> extractor_output_histogram(const Gf2Matrix& hash, std::span<const std::uint8_t> values,
                                                    std::span<const std::uint8_t> missed) {
  if (values.size() != hash.cols() || missed.size() != hash.cols())
    throw ConfigError("histogram inputs must have one entry per hash column");
  if (hash.rows() > 20) throw CapacityError("histogram limited to 20 output bits");
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < hash.cols(); ++c)
    if (missed[c]) free_cols.push_back(c);
  if (free_cols.size() > 20) throw CapacityError("histogram limited to 20 missed coordinates");

  std::vector<std::size_t> hist(std::size_t{1} << hash.rows(), 0);
  std::vector<std::uint8_t> x(values.begin(), values.end());
  for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << free_cols.size()); ++assign) {
    for (std::size_t f = 0; f < free_cols.size(); ++f) x[free_cols[f]] = static_cast<std::uint8_t>(assign >> f & 1u);
    const auto y = hash.multiply_bits(x);
    std::size_t index = 0;
    for (std::size_t r = 0; r < y.size(); ++r) index |= std::size_t{y[r]} << r;
    ++hist[index];
  }
  return hist;
}

// --- one-time pad ---

std::vector<std::uint8_t> otp_encode(std::span<const std::uint8_t> secret, std::span<const std::uint8_t> pad) {
  if (secret.size() != pad.size())
    throw ConfigError("secret has " + std::to_string(secret.size()) + " bits, pad has " + std::to_string(pad.size()));
  std::vector<std::uint8_t> out(secret.size());
  for (std::size_t k = 0; k < secret.size(); ++k) out[k] = static_cast<std::uint8_t>((secret[k] ^ pad[k]) & 1u);
  return out;
}

double otp_secrecy_rate(std::span<const double> mu) {
  constexpr int kErased = 2;
  double rate = 0.0;
  for (double m : mu) {
    if (!(m >= 0.0 && m <= 1.0)) throw DomainError("miss probability outside [0,1]");
    std::map<std::vector<int>, double> bob, eve;  // keys (s, observation..., public)
    for (int s = 0; s < 2; ++s)
      for (int x = 0; x < 2; ++x) {
        const int pub = s ^ x;
        bob[{s, x, pub}] += 0.25;
        if (m < 1.0) eve[{s, x, pub}] += 0.25 * (1.0 - m);
        if (m > 0.0) eve[{s, kErased, pub}] += 0.25 * m;
      }
    rate += mutual_information(bob, 1) - mutual_information(eve, 1);
  }
  return rate;
}

}  // namespace aaa
