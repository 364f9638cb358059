#include "aaa/equivocation.hpp"

#include <string>

#include "aaa/bitcore.hpp"
#include "aaa/errors.hpp"

namespace aaa {

namespace {

double checked(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " outside [0,1]");
  return p;
}

void check_all(std::span<const double> mu) {
  for (double m : mu) checked(m, "miss probability");
}

double ratio_or_half(double num, double den, bool& degenerate) {
  degenerate = den == 0.0;
  return degenerate ? 0.5 : num / den;
}

}  // namespace

double eps_bit(std::span<const double> mu) {
  check_all(mu);
  double intercepted_all = 1.0;
  for (double m : mu) intercepted_all *= 1.0 - m;
  return 1.0 - intercepted_all;
}

double eps_recursive(double eps, double mu_next) {
  checked(eps, "equivocation");
  checked(mu_next, "miss probability");
  return (1.0 - mu_next) * eps + mu_next;
}

double eps_key_independent(const MissGrid& mu) {
  double total = 0.0;
  for (const auto& row : mu) total += eps_bit(row);
  return total;
}

double eps_key_file(std::size_t key_length, std::span<const double> mu) {
  return static_cast<double>(key_length) * eps_bit(mu);
}

double capacity(std::span<const double> mu) {
  check_all(mu);
  double sum = 0.0;
  for (double m : mu) sum += m;
  return sum;
}

MaurerBounds maurer_bounds(std::span<const double> mu) {
  check_all(mu);
  MaurerBounds b;
  for (double m : mu) {
    // X uniform; E = X with prob 1-m, erased with prob m.
    const double h_x = entropy_term(0.5) + entropy_term(0.5);
    const double h_e = 2.0 * entropy_term(0.5 * (1.0 - m)) + entropy_term(m);
    const double h_e_given_x = binary_entropy(m);
    const double h_x_given_e = h_x + h_e_given_x - h_e;
    const double i_xx = h_x;  // H(X) - H(X|X)
    const double i_xe = h_e - h_e_given_x;
    b.lower += i_xx - i_xe;
    b.upper += h_x_given_e;  // I(X;X|E) = H(X|E) - H(X|X,E)
  }
  return b;
}

double markov_eps2(double mu1, double mu2, double alpha2) {
  checked(mu1, "mu1");
  checked(mu2, "mu2");
  const double h = binary_entropy(alpha2);
  return (mu1 * (1.0 - mu2) + (1.0 - mu1) * mu2) * h + mu1 * mu2;
}

double markov_eps2_exact(double mu1, double mu2, double alpha2) {
  checked(mu1, "mu1");
  checked(mu2, "mu2");
  return (1.0 - (1.0 - mu1) * (1.0 - mu2)) * binary_entropy(alpha2);
}

double markov_eps2_printed(double mu1, double mu2, double alpha2) {
  checked(mu1, "mu1");
  checked(mu2, "mu2");
  const double h = binary_entropy(alpha2);
  return (mu1 * (1.0 - mu2) + (1.0 - mu2) * mu1) * h + mu1 * mu2;
}

MarkovHelpers markov_helpers(double alpha2, double alpha3) {
  const double a2 = checked(alpha2, "alpha2");
  const double a3 = checked(alpha3, "alpha3");
  const double b2 = 1.0 - a2;
  const double b3 = 1.0 - a3;
  const double same = a2 * a3 + b2 * b3;  // p(x3 = x1 | x1)
  const double diff = b2 * a3 + a2 * b3;  // p(x3 != x1 | x1)

  MarkovHelpers m;
  m.p_a_star[0b00] = ratio_or_half(a2 * a3, same, m.p_a_degenerate[0b00]);
  m.p_a_star[0b11] = ratio_or_half(b2 * b3, same, m.p_a_degenerate[0b11]);
  m.p_a_star[0b10] = ratio_or_half(b2 * a3, diff, m.p_a_degenerate[0b10]);
  m.p_a_star[0b01] = ratio_or_half(a2 * b3, diff, m.p_a_degenerate[0b01]);
  m.p_b = a2;
  m.p_c = same;
  m.p_d = a3;
  m.p_x1x3[0b00] = m.p_x1x3[0b11] = 0.5 * same;
  m.p_x1x3[0b10] = m.p_x1x3[0b01] = 0.5 * diff;
  return m;
}

double markov_eps3(double mu1, double mu2, double mu3, double alpha2, double alpha3) {
  checked(mu1, "mu1");
  checked(mu2, "mu2");
  checked(mu3, "mu3");
  const MarkovHelpers m = markov_helpers(alpha2, alpha3);
  const double n1 = 1.0 - mu1;
  const double n2 = 1.0 - mu2;
  const double n3 = 1.0 - mu3;

  // (e1, e2, e3) pattern -> weight * H(k3 | e3); "o" observed, "+" erased.
  double x1_x3_observed = 0.0;
  for (std::size_t pair = 0; pair < 4; ++pair) x1_x3_observed += m.p_x1x3[pair] * binary_entropy(m.p_a_star[pair]);

  double eps = 0.0;
  eps += n1 * n2 * n3 * 0.0;                          // o o o: key known
  eps += mu1 * n2 * n3 * binary_entropy(alpha2);      // + o o
  eps += n1 * mu2 * n3 * x1_x3_observed;              // o + o
  eps += n1 * n2 * mu3 * binary_entropy(alpha3);      // o o +
  eps += mu1 * mu2 * n3 * binary_entropy(m.p_b);      // + + o
  eps += mu1 * n2 * mu3 * binary_entropy(m.p_c);      // + o +
  eps += n1 * mu2 * mu3 * binary_entropy(m.p_d);      // o + +
  eps += mu1 * mu2 * mu3 * 1.0;                       // + + +
  return eps;
}

double markov_eps3_symmetric(double mu, double alpha) {
  checked(mu, "mu");
  const double a = checked(alpha, "alpha");
  const double ap = 1.0 - a;
  const double mp = 1.0 - mu;
  const double p_c = a * a + ap * ap;
  const double p_a = a * a / p_c;
  return mu * mu * mu + 2.0 * mu * mp * binary_entropy(a) + mu * mu * mp * binary_entropy(p_c) +
         mu * mp * mp * (2.0 * a * ap + p_c * binary_entropy(p_a));
}

double mu_hat(double alpha) {
  const double a = checked(alpha, "alpha");
  const double ap = 1.0 - a;
  const double p_c = a * a + ap * ap;
  const double p_a = a * a / p_c;
  const double eta = 2.0 * a * ap + p_c * binary_entropy(p_a);
  return eta / (1.0 + eta - binary_entropy(p_c));
}

}  // namespace aaa
