#pragma once

// Closed-form equivocations of the XOR-accumulated key against an erasure
// eavesdropper. All quantities are in bits.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aaa/eavesdropper.hpp"

namespace aaa {

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Closed form next to its independent checks for one configuration.
struct EquivocationReport {
  std::optional<double> closed_form;
  std::optional<double> oracle;
  std::optional<MonteCarloEstimate> mc_estimate;
  double capacity = 0.0;
  /// capacity - closed_form, when closed_form is known.
  std::optional<double> gap;
};

/// 1 - prod(1 - mu_i); 0 for an empty schedule.
double eps_bit(std::span<const double> mu);

/// One step of the recursion: (1 - mu_next) eps + mu_next.
double eps_recursive(double eps, double mu_next);

/// Sum of eps_bit over the rows of a per-bit grid.
double eps_key_independent(const MissGrid& mu);

/// L * eps_bit(mu) for file-coupled interception.
double eps_key_file(std::size_t key_length, std::span<const double> mu);

/// Sum of mu_i: secret bits per independent realization.
double capacity(std::span<const double> mu);

struct MaurerBounds {
  double lower = 0.0;  // sum_i I(X_i;X_i) - I(X_i;E_i)
  double upper = 0.0;  // sum_i I(X_i;X_i | E_i)
};

/// Lower and upper secret-key-rate bounds for the erasure model, evaluated
/// term by term from the entropies of the per-time erasure channel.
MaurerBounds maurer_bounds(std::span<const double> mu);

/// Two-step Markov equivocation with the weights of the (k_2 | e_2) table:
/// (mu1 (1-mu2) + (1-mu1) mu2) h(alpha2) + mu1 mu2.
double markov_eps2(double mu1, double mu2, double alpha2);

/// Two-step equivocation with the fully erased pattern weighted by H(x1 ^ x2) = h(alpha2):
/// (1 - (1-mu1)(1-mu2)) h(alpha2). This is what exhaustive enumeration of the chain gives.
double markov_eps2_exact(double mu1, double mu2, double alpha2);

/// The bracket as printed next to the table, 2 mu1 (1-mu2) h(alpha2) + mu1 mu2.
/// Agrees with markov_eps2 only when mu1 == mu2 or h(alpha2) == 0; kept to
/// document that discrepancy.
double markov_eps2_printed(double mu1, double mu2, double alpha2);

/// Posterior helpers for the three-step chain. Pair index is (x1 << 1) | x3.
struct MarkovHelpers {
  /// p(x2 = 0 | x1, x3).
  std::array<double, 4> p_a_star{};
  /// True where p_a_star was 0/0 (conditioning event of probability zero); value set to 1/2.
  std::array<bool, 4> p_a_degenerate{};
  double p_b = 0.0;  // p(k3 = x3 | x3) = alpha2
  double p_c = 0.0;  // p(k3 = x2 | x2)
  double p_d = 0.0;  // p(k3 = x1 | x1) = alpha3
  std::array<double, 4> p_x1x3{};
};

MarkovHelpers markov_helpers(double alpha2, double alpha3);

/// Exact three-step Markov equivocation, assembled from the eight erasure
/// patterns of (e1, e2, e3), each weighted by its probability and the entropy
/// of k3 given the observation.
double markov_eps3(double mu1, double mu2, double mu3, double alpha2, double alpha3);

/// markov_eps3 with all mu and all alpha equal, in the compact form
/// mu^3 + 2 mu mu' h(a) + mu^2 mu' h(p_c) + mu mu'^2 [2 a a' + (a^2 + a'^2) h(p_a)].
double markov_eps3_symmetric(double mu, double alpha);

/// Miss-probability threshold below which a third correlated bit still raises
/// the equivocation (eps3 > eps2 iff mu < mu_hat(alpha), for 0 < mu < 1).
double mu_hat(double alpha);

}  // namespace aaa
