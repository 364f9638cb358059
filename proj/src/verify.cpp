#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "aaa/equivocation.hpp"
#include "aaa/oracle.hpp"
#include "aaa/scenario.hpp"

namespace aaa {

namespace {

constexpr double kExact = 1e-12;

// Values 0, 0.1, ..., 1.0, computed as k/10 so 1.0 and 0.5 are exact.
std::vector<double> unit_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
  return g;
}

// Calls f on every length-j schedule over `values`.
void for_each_schedule(std::size_t j, const std::vector<double>& values,
                       const std::function<void(const std::vector<double>&)>& f) {
  std::vector<std::size_t> idx(j, 0);
  std::vector<double> mu(j, values.front());
  while (true) {
    f(mu);
    std::size_t pos = 0;
    while (pos < j && ++idx[pos] == values.size()) {
      idx[pos] = 0;
      mu[pos] = values[0];
      ++pos;
    }
    if (pos == j) return;
    mu[pos] = values[idx[pos]];
  }
}

std::vector<double> rotated(const std::vector<double>& mu, std::size_t by) {
  std::vector<double> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) out[i] = mu[(i + by) % mu.size()];
  return out;
}

struct Tracker {
  CheckResult r;
  Tracker(std::string name, std::string description, double tolerance) {
    r.name = std::move(name);
    r.description = std::move(description);
    r.tolerance = tolerance;
    r.passed = true;
  }
  void deviation(double d) {
    ++r.points;
    r.max_deviation = std::max(r.max_deviation, std::isnan(d) ? INFINITY : d);
    if (!(d <= r.tolerance)) r.passed = false;
  }
  void require(bool ok) {
    ++r.points;
    if (!ok) r.passed = false;
  }
};

CheckResult check_per_bit() {
  Tracker t("per_bit_exact_vs_closed_form",
            "exact H(K|E) for independent per-bit erasures equals sum_l (1 - prod(1 - mu_li)); mu grid 0..1 step "
            "0.1, j <= 5, L <= 3 (row l uses the schedule rotated by l)",
            kExact);
  const auto grid = unit_grid();
  for (std::size_t j = 1; j <= 5; ++j) {
    const auto table = ErasureEntropyTable::iid_row(j);
    for_each_schedule(j, grid, [&](const std::vector<double>& mu) {
      for (std::size_t rows = 1; rows <= 3; ++rows) {
        MissGrid g;
        double exact = 0.0;
        for (std::size_t l = 0; l < rows; ++l) {
          g.push_back(rotated(mu, l));
          exact += table.expected(g.back());
        }
        t.deviation(std::abs(exact - eps_key_independent(g)));
      }
    });
  }
  return t.r;
}

CheckResult check_per_bit_joint() {
  Tracker t("per_bit_joint_vs_factorized",
            "unfactorized joint enumeration over all L*j cells equals the closed form (L*j <= 8, grid step 0.2)",
            kExact);
  const std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (std::size_t rows = 1; rows <= 2; ++rows)
    for (std::size_t j = 1; j * rows <= 8 && j <= 4; ++j) {
      const auto table = ErasureEntropyTable::iid_joint_per_bit(rows, j);
      for_each_schedule(rows * j, grid, [&](const std::vector<double>& cells) {
        MissGrid g(rows, std::vector<double>(j));
        for (std::size_t i = 0; i < j; ++i)
          for (std::size_t l = 0; l < rows; ++l) g[l][i] = cells[i * rows + l];
        t.deviation(std::abs(table.expected(cells) - eps_key_independent(g)));
      });
    }
  return t.r;
}

CheckResult check_per_file() {
  Tracker t("per_file_exact_vs_closed_form",
            "exact H(K|E) for file-coupled erasures equals L (1 - prod(1 - mu_i)); grid step 0.1, j <= 5, L <= 4; "
            "joint (unfactorized) enumeration for L*j <= 12",
            kExact);
  const auto grid = unit_grid();
  for (std::size_t j = 1; j <= 5; ++j) {
    const auto row = ErasureEntropyTable::iid_row(j);
    std::vector<std::pair<std::size_t, ErasureEntropyTable>> joints;
    for (std::size_t rows = 1; rows <= 4; ++rows)
      if (rows * j <= 12) joints.emplace_back(rows, ErasureEntropyTable::iid_joint_per_file(rows, j));
    for_each_schedule(j, grid, [&](const std::vector<double>& mu) {
      for (std::size_t rows = 1; rows <= 4; ++rows)
        t.deviation(std::abs(static_cast<double>(rows) * row.expected(mu) - eps_key_file(rows, mu)));
      for (const auto& [rows, table] : joints) t.deviation(std::abs(table.expected(mu) - eps_key_file(rows, mu)));
    });
  }
  return t.r;
}

CheckResult check_recursion(std::uint64_t seed) {
  Tracker t("recursion", "iterating (1 - mu) eps + mu from eps = 0 matches 1 - prod(1 - mu); 1000 random schedules",
            kExact);
  Rng rng = Rng(seed).split(101);
  for (int s = 0; s < 1000; ++s) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.next_u64() % 20);
    std::vector<double> mu(len);
    double eps = 0.0;
    for (auto& m : mu) {
      m = rng.uniform();
      eps = eps_recursive(eps, m);
    }
    t.deviation(std::abs(eps - eps_bit(mu)));
  }
  return t.r;
}

CheckResult check_limits() {
  Tracker t("limits",
            "constant mu: 1 - eps = (1 - mu)^j; any mu = 1 gives eps = 1 exactly; eps = 0 iff all mu = 0 "
            "(grid step 0.1, j <= 5)",
            kExact);
  const auto grid = unit_grid();
  for (double mu : grid)
    for (std::size_t j = 1; j <= 60; ++j) {
      const std::vector<double> sched(j, mu);
      t.deviation(std::abs((1.0 - eps_bit(sched)) - std::pow(1.0 - mu, static_cast<double>(j))));
    }
  for (std::size_t j = 1; j <= 5; ++j) {
    const auto table = ErasureEntropyTable::iid_row(j);
    for_each_schedule(j, grid, [&](const std::vector<double>& mu) {
      const double eps = eps_bit(mu);
      const bool has_one = std::find(mu.begin(), mu.end(), 1.0) != mu.end();
      const bool all_zero = std::all_of(mu.begin(), mu.end(), [](double m) { return m == 0.0; });
      if (has_one) {
        t.require(eps == 1.0);
        t.deviation(std::abs(table.expected(mu) - 1.0));
      }
      t.require((eps == 0.0) == all_zero);
      // non-decreasing in j
      t.require(eps >= eps_bit(std::span<const double>(mu.data(), j - 1)));
    });
  }
  return t.r;
}

CheckResult check_capacity_gap() {
  Tracker t("capacity_gap",
            "sum mu - (1 - prod(1 - mu)) >= -1e-12 on the grid; schedule (0,1,0,...,0), j = 10, estimate 0.05 "
            "gives 0.5 < 1 = eps",
            kExact);
  const auto grid = unit_grid();
  for (std::size_t j = 1; j <= 5; ++j)
    for_each_schedule(j, grid, [&](const std::vector<double>& mu) {
      t.deviation(std::max(0.0, eps_bit(mu) - capacity(mu)));
    });
  std::vector<double> truth(10, 0.0);
  truth[1] = 1.0;
  const std::vector<double> estimate(10, 0.05);
  t.deviation(std::abs(capacity(estimate) - 0.5));
  t.require(capacity(estimate) < eps_bit(truth));
  t.deviation(std::abs(eps_bit(truth) - 1.0));
  return t.r;
}

CheckResult check_maurer_and_otp() {
  Tracker t("maurer_and_otp_rates",
            "lower = upper secret-key bound = sum mu, and the one-time-pad secrecy rate = sum mu (grid, j <= 4)",
            kExact);
  const auto grid = unit_grid();
  for (std::size_t j = 0; j <= 4; ++j)
    for_each_schedule(j, grid, [&](const std::vector<double>& mu) {
      const auto b = maurer_bounds(mu);
      const double c = capacity(mu);
      t.deviation(std::abs(b.lower - c));
      t.deviation(std::abs(b.upper - c));
      t.deviation(std::abs(otp_secrecy_rate(mu) - c));
    });
  return t.r;
}

CheckResult check_markov_eps2() {
  Tracker t("markov_eps2",
            "exact two-step Markov equivocation equals the table weights (mu1(1-mu2) + (1-mu1)mu2) h(a) + mu1 mu2; "
            "grid step 0.1; the formula equals the independent value at a = 1/2 and mu1 mu2 at a in {0,1}",
            kExact);
  const auto grid = unit_grid();
  for (double a : grid) {
    const auto table = ErasureEntropyTable::markov_row({{a}});
    for_each_schedule(2, grid, [&](const std::vector<double>& mu) {
      const double closed = markov_eps2(mu[0], mu[1], a);
      t.deviation(std::abs(table.expected(mu) - closed));
      if (a == 0.5) t.deviation(std::abs(closed - eps_bit(mu)));
      if (a == 0.0 || a == 1.0) t.deviation(std::abs(closed - mu[0] * mu[1]));
      t.require(closed <= eps_bit(mu) + kExact);
    });
  }
  return t.r;
}

CheckResult check_markov_eps2_exact() {
  Tracker t("markov_eps2_exact_form",
            "exact two-step Markov equivocation equals (1 - (1-mu1)(1-mu2)) h(a), i.e. the table with the fully "
            "erased row carrying H(x1 ^ x2) = h(a); grid step 0.1",
            kExact);
  const auto grid = unit_grid();
  for (double a : grid) {
    const auto table = ErasureEntropyTable::markov_row({{a}});
    for_each_schedule(2, grid, [&](const std::vector<double>& mu) {
      t.deviation(std::abs(table.expected(mu) - markov_eps2_exact(mu[0], mu[1], a)));
    });
  }
  return t.r;
}

CheckResult check_markov_eps2_printed() {
  Tracker t("markov_eps2_printed_bracket",
            "the printed bracket 2 mu1 (1-mu2) h(a) + mu1 mu2 equals the table-weight formula exactly when "
            "mu1 = mu2 or h(a) = 0; max_deviation is over the points where it is expected to match",
            kExact);
  const auto grid = unit_grid();
  for (double a : grid)
    for_each_schedule(2, grid, [&](const std::vector<double>& mu) {
      const double diff = std::abs(markov_eps2(mu[0], mu[1], a) - markov_eps2_printed(mu[0], mu[1], a));
      const bool expected_match = mu[0] == mu[1] || binary_entropy(a) == 0.0;
      if (expected_match)
        t.deviation(diff);
      else
        t.require(diff > kExact);
    });
  return t.r;
}

CheckResult check_markov_eps3() {
  Tracker t("markov_eps3",
            "exact three-step Markov equivocation equals the eight-pattern assembly; the symmetric compact form "
            "agrees at equal mu and alpha; a = 1/2 reduces to the independent value, a in {0,1} to mu1 mu2 mu3",
            kExact);
  const auto grid = unit_grid();
  for (double a2 : grid)
    for (double a3 : grid) {
      const auto table = ErasureEntropyTable::markov_row({{a2, a3}});
      for_each_schedule(3, grid, [&](const std::vector<double>& mu) {
        const double closed = markov_eps3(mu[0], mu[1], mu[2], a2, a3);
        t.deviation(std::abs(table.expected(mu) - closed));
        if (a2 == a3 && mu[0] == mu[1] && mu[1] == mu[2])
          t.deviation(std::abs(markov_eps3_symmetric(mu[0], a2) - closed));
        if (a2 == 0.5 && a3 == 0.5) t.deviation(std::abs(closed - eps_bit(mu)));
        if ((a2 == 0.0 || a2 == 1.0) && (a3 == 0.0 || a3 == 1.0))
          t.deviation(std::abs(closed - mu[0] * mu[1] * mu[2]));
      });
    }
  return t.r;
}

CheckResult check_threshold() {
  Tracker t("mu_hat_threshold",
            "sign(eps3 - eps2) = sign(mu_hat(a) - mu) for the symmetric closed forms on a in {0.05..0.45}, mu in "
            "{0.05..0.95}; mu_hat(0) = 0, mu_hat(1/2) = 1, mu_hat(a) = mu_hat(1-a), finite-difference slope > 0 on "
            "(0, 1/2) with step 1e-4",
            kExact);
  for (int ai = 1; ai <= 9; ++ai) {
    const double a = ai * 0.05;
    const double threshold = mu_hat(a);
    for (int mi = 1; mi <= 19; ++mi) {
      const double mu = mi * 0.05;
      if (std::abs(threshold - mu) < 1e-9) continue;
      const double e2 = markov_eps2(mu, mu, a);
      const double e3 = markov_eps3_symmetric(mu, a);
      t.require((e3 > e2) == (threshold > mu));
    }
  }
  t.deviation(std::abs(mu_hat(0.0)));
  t.deviation(std::abs(mu_hat(0.5) - 1.0));
  for (int k = 0; k <= 1000; ++k) {
    const double a = k / 1000.0;
    t.deviation(std::abs(mu_hat(a) - mu_hat(1.0 - a)));
  }
  const double h = 1e-4;
  for (int k = 1; k + 1 < 5000; ++k) {
    const double a = k * h;
    t.require(mu_hat(a + h) - mu_hat(a) > 0.0);
  }
  return t.r;
}

CheckResult check_monte_carlo(std::uint64_t seed, unsigned jobs) {
  Tracker t("monte_carlo",
            "simulated equivocation within 5 standard errors of exact enumeration on 20 random configurations "
            "(20000 trials each); deviation in standard errors, floored at 1/trials",
            5.0);
  Rng rng = Rng(seed).split(202);
  constexpr std::size_t kTrials = 20000;
  for (int c = 0; c < 20; ++c) {
    const std::size_t rows = 1 + rng.next_u64() % 3;
    const std::size_t cols = 1 + rng.next_u64() % 5;
    const bool per_file = rng.bit();
    InterceptSchedule sched = InterceptSchedule::per_file({});
    if (per_file) {
      std::vector<double> mu(cols);
      for (auto& m : mu) m = std::round(rng.uniform() * 20.0) / 20.0;
      sched = InterceptSchedule::per_file(mu);
    } else {
      MissGrid g(rows, std::vector<double>(cols));
      for (auto& r : g)
        for (auto& m : r) m = std::round(rng.uniform() * 20.0) / 20.0;
      sched = InterceptSchedule::per_bit(g);
    }
    OracleConfig cfg;
    cfg.intercept = sched;
    cfg.rows = rows;
    cfg.cols = cols;
    const double exact = exact_equivocation(cfg);
    const auto est = mc_equivocation_independent(SourceModel::iid(), sched, rows, kTrials, rng.next_u64(), jobs);
    const double sigma = std::max(est.std_error, 1.0 / kTrials);
    t.deviation(std::abs(est.value - exact) / sigma);
  }
  return t.r;
}

CheckResult check_extractor(std::uint64_t seed) {
  Tracker t("extractor",
            "n = 64, mu = 0.5: full-row-rank rate of the restricted hash over 2000 draws within 5 sigma of the "
            "binomial-mixture value; n <= 8 exhaustive check that the output given Eve's view is uniform over "
            "2^rank values",
            5.0);
  const auto demo = extractor_demo(64, 0.5, 2000, Rng(seed).split(303).next_u64());
  t.deviation(std::abs(demo.empirical_rate - demo.analytic_rate) / demo.std_error);

  Rng rng = Rng(seed).split(304);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 8;
    const std::size_t rows = rng.next_u64() % (n + 1);
    const auto hash = Gf2Matrix::random(rows, n, rng);
    std::vector<std::uint8_t> values(n), missed(n);
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < n; ++c) {
      values[c] = rng.bit();
      missed[c] = rng.bit();
      if (missed[c]) free.push_back(c);
    }
    const auto rank = gf2_rank(hash.select_columns(free));
    const auto hist = extractor_output_histogram(hash, values, missed);
    std::size_t support = 0;
    bool flat = true;
    for (auto count : hist)
      if (count) {
        ++support;
        flat = flat && count == (std::size_t{1} << (free.size() - rank));
      }
    t.require(flat && support == (std::size_t{1} << rank));
  }
  return t.r;
}

}  // namespace

bool VerifySummary::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifySummary::to_json() const {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  doc["passed"] = all_passed();
  auto& arr = doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"tolerance", std::stod(format_number(c.tolerance))},
                   {"max_deviation", std::stod(format_number(c.max_deviation))},
                   {"points", c.points},
                   {"description", c.description}});
  }
  return doc.dump(2) + "\n";
}

VerifySummary verify_all(const VerifyOptions& options) {
  VerifySummary s;
  s.seed = options.seed;
  s.checks.push_back(check_per_bit());
  s.checks.push_back(check_per_bit_joint());
  s.checks.push_back(check_per_file());
  s.checks.push_back(check_recursion(options.seed));
  s.checks.push_back(check_limits());
  s.checks.push_back(check_capacity_gap());
  s.checks.push_back(check_maurer_and_otp());
  s.checks.push_back(check_markov_eps2());
  s.checks.push_back(check_markov_eps2_exact());
  s.checks.push_back(check_markov_eps2_printed());
  s.checks.push_back(check_markov_eps3());
  s.checks.push_back(check_threshold());
  s.checks.push_back(check_monte_carlo(options.seed, options.jobs));
  s.checks.push_back(check_extractor(options.seed));
  return s;
}

}  // namespace aaa
