#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omega_sieve/bounded_value.hpp"
#include "omega_sieve/prime_table.hpp"

namespace omega_sieve {

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Density of A = {n(N-n)} (halved for odd N): two residue classes per odd
/// prime, one for p = 2. Dimension kappa = 2 with constant K = 3.
struct DensityModel {
  static constexpr double kappa = 2.0;
  static constexpr double K = 3.0;

  /// k = kappa + log K.
  static double k();
  static double g(std::uint64_t p) { return p == 2 ? 0.5 : 2.0 / static_cast<double>(p); }
  /// log(1 - g(p)).
  static double log_complement(std::uint64_t p);
};

/// g(d) for squarefree d, as an exact reduced fraction. Throws InvalidArgument otherwise.
Rational g_value(std::uint64_t d);

/// prod_{w <= p < z} (1 - g(p))^{-1} * (log w / log z)^2. Requires 2 <= w < z
/// and a table covering z.
double K_ratio(double w, double z, const PrimeTable& table);

struct KCase {
  std::string name;
  double value = 0;         // computed supremum / constant
  double bound = 0;         // the claimed bound
  double witness_w = 0;
  double witness_z = 0;
  bool holds = false;
};

struct KReport {
  KCase case1;  // exp(0.21) <= 1.24, with the 0.21 budget re-derived
  KCase case2;  // max over primes 3 <= w <= 285 <= 1.86
  KCase case3;  // 2 * 1.86 * log^2 2 / log^2 3 <= 1.49
  KCase case4;  // sup over 2 <= w < z < 286 == 3
  double case1_budget = 0;    // 2/log^2 286 + 2 * tail(1/(p(p-2)), 286)
  double tail_286 = 0;        // certified sum_{p>=286} 1/(p(p-2))
  double case4_margin = 1e-9;
  double K = DensityModel::K;
  bool holds() const { return case1.holds && case2.holds && case3.holds && case4.holds; }
  std::vector<std::string> failures() const;
};

/// Checks all four cases of the K-constant bound. Evaluates Case 4 at both
/// one-sided limits z -> q^- and z -> q^+ for every prime q below 286.
KReport verify_K();

/// V(z) = prod_{p<z} (1 - g(p)), held in log domain.
struct VProduct {
  double z = 0;
  double value_log = 0;
  double slack = 0;
  double value() const;
};

enum class ProductMode { exact, analytic_lower };

inline constexpr double kVLowerConstant = 0.2749;

/// Exact mode sums log(1 - g(p)) over the table; analytic mode returns
/// log(0.2749 / log^2 z) and requires z >= 1e10.
VProduct v_product(double z, ProductMode mode, const PrimeTable* table = nullptr);

/// Exact V(z) by streaming the sieve, for z beyond any stored table.
VProduct v_product_streamed(double z, unsigned threads = 1);

/// F(s, k) = 1 - (s+3)/(2 e^k) * (2 e k / (s-3))^{(s-3)/2}, valid for s >= 2k + 3.
/// Throws PreconditionError below that.
double main_sieve_factor(double s, double k);

/// Smallest s >= 2k + 3 with F(s, k) = 0, by bisection to 1e-12.
double min_level_exponent(double k);

/// 8 * 0.2634, the exponent constant of the remainder bound.
inline constexpr double kRemainderExpConstant = 2.1072;

/// exp(2.1072 + 8 alpha e^alpha - alpha s).
double remainder_constant(double alpha, double s);

/// argmin over alpha > 0 of remainder_constant(alpha, s): the root of
/// e^alpha (1 + alpha) = s / 8. Throws PreconditionError for s <= 8.
double optimize_alpha(double s);

/// delta log D + sum_{p<z} log(1 + 8 / p^delta): log of the Rankin majorant
/// D^delta prod_{p<z} (1 + 8 p^-delta) of R_4(A, D).
BoundedValue rankin_remainder_log(double z, double log_d, double delta, const PrimeTable& table);

/// sum_{d | P(z), d < D} tau_8(d) by enumerating divisors. Refuses (RangeError)
/// when more than 20 primes lie below z.
std::uint64_t remainder_exact_small(double z, double log_d);

/// The remaining scalar constants: the V lower bound re-derivation, the
/// remainder constant and its alpha, and the sieve factor at the default level.
struct ConstantsReport {
  // V lower bound
  double v_constant_rederived = 0;  // e^{2*0.2366 - 2*0.5357} / 2
  double tail_3 = 0;                // certified sum_{p>=3} 1/(p(p-2))
  double tail_chain = 0;            // 1/3 + sum_{p>2} 1/p^2
  bool v_constant_holds = false;
  std::string v_note;
  // remainder
  double remainder_at_fixed_alpha = 0;
  double alpha_opt = 0;
  double remainder_at_alpha_opt = 0;
  double exp_constant_rederived = 0;  // 8 * 0.2634
  bool remainder_holds = false;
  // sieve factor
  double k = 0;
  double sieve_factor = 0;
  double min_level = 0;
  bool sieve_factor_holds = false;

  bool holds() const { return v_constant_holds && remainder_holds && sieve_factor_holds; }
};

ConstantsReport verify_constants(double s = 18.4);

}  // namespace omega_sieve
