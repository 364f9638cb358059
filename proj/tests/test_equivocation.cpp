#include <doctest.h>

#include <cmath>
#include <vector>

#include "aaa/equivocation.hpp"
#include "aaa/errors.hpp"
#include "aaa/oracle.hpp"

using namespace aaa;
using V = std::vector<double>;

namespace {

constexpr double kTol = 1e-12;

double oracle_markov(const V& mu, const V& alphas) {
  OracleConfig cfg;
  cfg.source = SourceModel::markov_chain(MarkovParams{alphas});
  cfg.intercept = InterceptSchedule::per_bit({mu});
  cfg.rows = 1;
  cfg.cols = mu.size();
  return exact_equivocation(cfg);
}

}  // namespace

TEST_SUITE("equivocation") {
  TEST_CASE("eps_bit examples") {
    CHECK(eps_bit(V{0, 1, 0, 0}) == 1.0);
    CHECK(eps_bit(V{0, 0, 0}) == 0.0);
    CHECK(eps_bit(V{0.5, 0.5}) == doctest::Approx(0.75).epsilon(kTol));
    CHECK(eps_bit(V{}) == 0.0);
    CHECK_THROWS_AS(eps_bit(V{0.5, 1.5}), DomainError);
  }

  TEST_CASE("recursion examples") {
    CHECK(eps_recursive(0.0, 0.37) == doctest::Approx(0.37));
    CHECK(eps_recursive(0.42, 1.0) == 1.0);
    CHECK(std::abs(eps_recursive(0.75, 0.2) - eps_bit(V{0.5, 0.5, 0.2})) < kTol);
    CHECK_THROWS_AS(eps_recursive(1.2, 0.5), DomainError);
  }

  TEST_CASE("asymptotic perfection for constant mu") {
    for (double mu : {0.05, 0.3, 0.9})
      for (std::size_t j = 1; j <= 60; ++j)
        CHECK(std::abs((1.0 - eps_bit(V(j, mu))) - std::pow(1.0 - mu, static_cast<double>(j))) < kTol);
  }

  TEST_CASE("key equivocations") {
    CHECK(eps_key_independent({{0.5, 0.5}, {0.2, 0.0}}) == doctest::Approx(0.95).epsilon(kTol));
    CHECK(eps_key_independent(MissGrid(4, V{0.1, 0.6})) == doctest::Approx(4 * eps_bit(V{0.1, 0.6})).epsilon(kTol));
    CHECK(eps_key_file(8, V{0, 1}) == 8.0);
    CHECK(eps_key_file(1, V{0.3, 0.4}) == eps_bit(V{0.3, 0.4}));
    CHECK(eps_key_file(3, V{0.5, 0.5}) == doctest::Approx(2.25).epsilon(kTol));
  }

  TEST_CASE("capacity, gap and bounds") {
    CHECK(capacity(V{0.5, 0.5}) == 1.0);
    CHECK(capacity(V{}) == 0.0);
    CHECK(capacity(V{0, 1, 0}) == eps_bit(V{0, 1, 0}));
    const auto b = maurer_bounds(V{0.3, 0.7});
    CHECK(std::abs(b.lower - 1.0) < kTol);
    CHECK(std::abs(b.upper - 1.0) < kTol);
    const auto e = maurer_bounds(V{});
    CHECK(e.lower == 0.0);
    CHECK(e.upper == 0.0);
    // Estimate of 0.05 per step for the schedule 0,1,0,...,0: the estimated capacity undershoots the real secrecy.
    V truth(10, 0.0);
    truth[1] = 1.0;
    CHECK(capacity(V(10, 0.05)) == doctest::Approx(0.5));
    CHECK(eps_bit(truth) == 1.0);
  }

  TEST_CASE("two-step Markov forms") {
    for (double m1 : {0.0, 0.3, 1.0})
      for (double m2 : {0.0, 0.6, 1.0}) {
        CHECK(std::abs(markov_eps2(m1, m2, 0.5) - eps_bit(V{m1, m2})) < kTol);
        CHECK(std::abs(markov_eps2(m1, m2, 0.0) - m1 * m2) < kTol);
        CHECK(std::abs(markov_eps2(m1, m2, 1.0) - m1 * m2) < kTol);
        CHECK(markov_eps2(m1, m2, 0.8) <= eps_bit(V{m1, m2}) + kTol);
      }
    CHECK(std::abs(markov_eps2_printed(0.4, 0.4, 0.8) - markov_eps2(0.4, 0.4, 0.8)) < kTol);
    CHECK(std::abs(markov_eps2_printed(0.4, 0.7, 0.8) - markov_eps2(0.4, 0.7, 0.8)) > 1e-3);
  }

  TEST_CASE("two-step Markov against enumeration") {
    const double exact = oracle_markov(V{0.4, 0.7}, V{0.8});
    CHECK(std::abs(exact - markov_eps2_exact(0.4, 0.7, 0.8)) < kTol);
    CHECK(exact == doctest::Approx(0.591981037807637).epsilon(1e-12));
    // The table weights give h(0.8) (0.12 + 0.42) + 0.28; the fully erased pattern contributes h(alpha), not 1.
    CHECK(std::abs(markov_eps2(0.4, 0.7, 0.8) - exact - 0.28 * (1.0 - binary_entropy(0.8))) < kTol);
  }

  TEST_CASE("weak correlation growth") {
    for (int ai = 0; ai <= 100; ++ai) {
      const double a = ai / 100.0;
      if (std::abs(binary_entropy(a) - 0.5) < 1e-9) continue;
      for (double mu : {0.1, 0.5, 0.9}) CHECK((markov_eps2(mu, mu, a) > mu) == (binary_entropy(a) > 0.5));
    }
  }

  TEST_CASE("markov helpers") {
    const auto half = markov_helpers(0.5, 0.5);
    for (int i = 0; i < 4; ++i) {
      CHECK(half.p_a_star[i] == 0.5);
      CHECK(half.p_x1x3[i] == 0.25);
    }
    CHECK(half.p_b == 0.5);
    CHECK(half.p_c == 0.5);
    CHECK(half.p_d == 0.5);
    const auto frozen = markov_helpers(1.0, 1.0);
    CHECK(frozen.p_a_star[0b00] == 1.0);
    CHECK(frozen.p_c == 1.0);
    const auto m = markov_helpers(0.3, 0.6);
    CHECK(m.p_a_star[0b00] == doctest::Approx(0.18 / 0.46).epsilon(1e-14));
    double total = 0.0;
    for (double p : m.p_x1x3) total += p;
    CHECK(std::abs(total - 1.0) < kTol);
    CHECK(m.p_b == 0.3);
    CHECK(m.p_d == 0.6);
    CHECK_THROWS_AS(markov_helpers(-0.1, 0.5), DomainError);
  }

  TEST_CASE("degenerate p_a* ratios are flagged and carry no weight") {
    const auto m = markov_helpers(1.0, 0.0);
    CHECK(m.p_a_degenerate[0b00]);
    CHECK(m.p_a_degenerate[0b11]);
    CHECK(m.p_a_star[0b00] == 0.5);
    CHECK(m.p_x1x3[0b00] == 0.0);
    CHECK(m.p_x1x3[0b11] == 0.0);
    for (double mu1 : {0.0, 0.25, 1.0})
      for (double mu2 : {0.0, 0.5, 1.0})
        for (double mu3 : {0.0, 0.75, 1.0})
          for (auto [a2, a3] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}, std::pair{0.0, 0.0}})
            CHECK(std::abs(markov_eps3(mu1, mu2, mu3, a2, a3) - oracle_markov(V{mu1, mu2, mu3}, V{a2, a3})) < kTol);
  }

  TEST_CASE("three-step Markov forms") {
    CHECK(std::abs(markov_eps3(0.2, 0.5, 0.7, 0.5, 0.5) - eps_bit(V{0.2, 0.5, 0.7})) < kTol);
    CHECK(std::abs(markov_eps3(0.2, 0.5, 0.7, 0.0, 1.0) - 0.2 * 0.5 * 0.7) < kTol);
    for (double mu : {0.0, 0.4, 1.0}) {
      CHECK(std::abs(markov_eps3_symmetric(mu, 0.5) - (1.0 - std::pow(1.0 - mu, 3))) < kTol);
      CHECK(std::abs(markov_eps3_symmetric(mu, 0.0) - mu * mu * mu) < kTol);
    }
    CHECK(std::abs(markov_eps3_symmetric(0.4, 0.3) - markov_eps3(0.4, 0.4, 0.4, 0.3, 0.3)) < kTol);
    CHECK(std::abs(oracle_markov(V{0.4, 0.4, 0.4}, V{0.3, 0.3}) - markov_eps3(0.4, 0.4, 0.4, 0.3, 0.3)) < kTol);
  }

  TEST_CASE("threshold mu_hat") {
    CHECK(mu_hat(0.0) == 0.0);
    CHECK(std::abs(mu_hat(0.5) - 1.0) < kTol);
    CHECK(std::abs(mu_hat(0.3) - mu_hat(0.7)) < kTol);
    for (int k = 1; k < 50; ++k) CHECK(mu_hat(k / 100.0) < mu_hat((k + 1) / 100.0));
  }
}
