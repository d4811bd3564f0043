#include "omega_sieve/sieve_constants.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "omega_sieve/arith.hpp"
#include "omega_sieve/errors.hpp"
#include "omega_sieve/estimates.hpp"

namespace omega_sieve {

namespace {

constexpr std::uint64_t kCaseSplit = 286;
constexpr double kCase1Exponent = 0.21;
constexpr double kCase1Bound = 1.24;
constexpr double kCase2Bound = 1.86;
constexpr double kCase3Bound = 1.49;
constexpr double kTail286Bound = 0.073;
constexpr double kTail3Bound = 0.5357;

double bisect_root(auto f, double lo, double hi) {
  auto done = [](double a, double b) { return std::fabs(b - a) < 1e-12; };
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, done);
  return 0.5 * (a + b);
}

}  // namespace

double DensityModel::k() { return kappa + std::log(K); }

double DensityModel::log_complement(std::uint64_t p) {
  return p == 2 ? -std::numbers::ln2 : std::log1p(-2.0 / static_cast<double>(p));
}

Rational g_value(std::uint64_t d) {
  if (d == 0) throw InvalidArgument("g_value: d must be positive");
  const auto fm = big_omega(d);
  if (!fm.squarefree()) throw InvalidArgument("g_value: d = " + std::to_string(d) + " is not squarefree");
  const unsigned odd_primes = fm.omega_small - ((d % 2 == 0) ? 1u : 0u);
  Rational r{std::uint64_t{1} << odd_primes, d};
  const auto g = std::gcd(r.num, r.den);
  r.num /= g;
  r.den /= g;
  return r;
}

double K_ratio(double w, double z, const PrimeTable& table) {
  if (!(w >= 2) || !(z > w)) throw InvalidArgument("K_ratio: requires 2 <= w < z");
  const auto hi = static_cast<std::uint64_t>(std::ceil(z));
  if (hi > table.limit()) throw RangeError("K_ratio: z beyond table limit " + std::to_string(table.limit()));
  double log_prod = 0;
  for (auto p : table.primes_in(static_cast<std::uint64_t>(std::ceil(w)), hi))
    if (static_cast<double>(p) < z) log_prod -= DensityModel::log_complement(p);
  const double ratio = std::log(w) / std::log(z);
  return std::exp(log_prod) * ratio * ratio;
}

std::vector<std::string> KReport::failures() const {
  std::vector<std::string> out;
  for (const KCase* c : {&case1, &case2, &case3, &case4}) {
    if (!c->holds)
      out.push_back(c->name + ": value " + std::to_string(c->value) + " exceeds " + std::to_string(c->bound) +
                    " at (w, z) = (" + std::to_string(c->witness_w) + ", " + std::to_string(c->witness_z) + ")");
  }
  return out;
}

KReport verify_K() {
  KReport rep;
  const PrimeTable table(kCaseSplit + 1);
  const auto primes = table.primes_in(2, kCaseSplit);  // all primes < 286
  const double log_split = std::log(static_cast<double>(kCaseSplit));

  // Case 1: w >= 286. The budget 1/log^2 z + 1/log^2 w + 2 sum 1/(p(p-2)) must fit in 0.21.
  const BoundedValue tail = tail_sum_p_pminus2(static_cast<double>(kCaseSplit));
  rep.tail_286 = tail.upper();
  rep.case1_budget = 2.0 / (log_split * log_split) + 2.0 * rep.tail_286;
  rep.case1 = {"case1 (w >= 286)", std::exp(kCase1Exponent), kCase1Bound, static_cast<double>(kCaseSplit), 0, false};
  rep.case1.holds = rep.tail_286 <= kTail286Bound && rep.case1_budget <= kCase1Exponent &&
                    rep.case1.value <= kCase1Bound;

  // Case 2: 3 <= w <= 285 prime, z >= 286.
  rep.case2 = {"case2 (3 <= w <= 285, z >= 286)", 0, kCase2Bound, 0, static_cast<double>(kCaseSplit), false};
  for (auto w : primes) {
    if (w < 3) continue;
    double log_prod = 0;
    for (auto p : primes)
      if (p >= w) log_prod -= std::log1p(-2.0 / static_cast<double>(p));
    const double lr = std::log(static_cast<double>(w)) / log_split;
    const double v = kCase1Bound * lr * lr * std::exp(log_prod);
    if (v > rep.case2.value) {
      rep.case2.value = v;
      rep.case2.witness_w = static_cast<double>(w);
    }
  }
  rep.case2.holds = rep.case2.value <= kCase2Bound;

  // Case 3: w = 2, z >= 286, from the Case 2 constant.
  const double l2 = std::numbers::ln2;
  const double l3 = std::log(3.0);
  rep.case3 = {"case3 (w = 2, z >= 286)", 2.0 * kCase2Bound * (l2 * l2) / (l3 * l3), kCase3Bound, 2,
               static_cast<double>(kCaseSplit), false};
  rep.case3.holds = rep.case3.value <= kCase3Bound;

  // Case 4: z < 286. Between primes the ratio is monotone in z, so the
  // supremum is among the one-sided limits at primes q, with w = smallest
  // prime in the product.
  rep.case4 = {"case4 (z < 286)", 0, DensityModel::K, 0, 0, false};
  for (std::size_t a = 0; a < primes.size(); ++a) {
    const double log_w = std::log(static_cast<double>(primes[a]));
    double log_prod = 0;  // over primes[a .. b)
    for (std::size_t b = a; b < primes.size(); ++b) {
      const double log_q = std::log(static_cast<double>(primes[b]));
      const double lr = 2.0 * std::log(log_w / log_q);
      const double left = std::exp(log_prod + lr);  // z -> q^-
      log_prod -= DensityModel::log_complement(primes[b]);
      const double right = std::exp(log_prod + lr);  // z -> q^+
      for (double v : {left, right}) {
        if (v > rep.case4.value) {
          rep.case4.value = v;
          rep.case4.witness_w = static_cast<double>(primes[a]);
          rep.case4.witness_z = static_cast<double>(primes[b]);
        }
      }
    }
  }
  rep.case4.holds = rep.case4.value <= DensityModel::K + rep.case4_margin;
  return rep;
}

double VProduct::value() const { return std::exp(value_log); }

VProduct v_product(double z, ProductMode mode, const PrimeTable* table) {
  if (!(z >= 2)) throw InvalidArgument("v_product: z must be >= 2");
  if (mode == ProductMode::analytic_lower) {
    if (!(z >= kAnalyticRangeStart))
      throw RangeError("v_product: analytic lower bound only valid for z >= 1e10, got z = " + std::to_string(z));
    const double lz = std::log(z);
    const double v = std::log(kVLowerConstant) - 2.0 * std::log(lz);
    return {z, v, 4 * kUnitRoundoff * std::fabs(v)};
  }
  if (table == nullptr) throw InvalidArgument("v_product: exact mode requires a prime table");
  if (static_cast<std::uint64_t>(std::ceil(z)) > table->limit())
    throw RangeError("v_product: z beyond table limit " + std::to_string(table->limit()));
  CompensatedSum acc;
  for (auto p : *table) {
    if (static_cast<double>(p) >= z) break;
    acc.add(DensityModel::log_complement(p));
  }
  return {z, acc.value(), acc.slack()};
}

VProduct v_product_streamed(double z, unsigned threads) {
  const auto sums = streamed_prime_sums(z, threads);
  return {z, sums.log_v.value, sums.log_v.slack};
}

double main_sieve_factor(double s, double k) {
  if (!(k > 0)) throw InvalidArgument("main_sieve_factor: k must be positive");
  const double boundary = 2.0 * k + 3.0;
  if (s < boundary - 1e-12 * std::max(1.0, boundary))
    throw PreconditionError("main_sieve_factor: requires s >= 2k + 3 (s = " + std::to_string(s) +
                            ", 2k + 3 = " + std::to_string(boundary) + ")");
  const double h = (s - 3.0) / 2.0;
  const double log_term = std::log((s + 3.0) / 2.0) - k + h * std::log(2.0 * std::numbers::e * k / (s - 3.0));
  return 1.0 - std::exp(log_term);
}

double min_level_exponent(double k) {
  const double lo = 2.0 * k + 3.0;
  double hi = lo + 1.0;
  while (main_sieve_factor(hi, k) <= 0) hi = lo + 2.0 * (hi - lo);
  return bisect_root([k](double s) { return main_sieve_factor(s, k); }, lo, hi);
}

double remainder_constant(double alpha, double s) {
  return std::exp(kRemainderExpConstant + 8.0 * alpha * std::exp(alpha) - alpha * s);
}

double optimize_alpha(double s) {
  if (!(s > 8.0)) throw PreconditionError("optimize_alpha: no interior minimum for s <= 8");
  const double target = s / 8.0;
  return bisect_root([target](double a) { return std::exp(a) * (1.0 + a) - target; }, 0.0, std::log(target));
}

BoundedValue rankin_remainder_log(double z, double log_d, double delta, const PrimeTable& table) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("rankin_remainder_log: delta must lie in (0, 1)");
  if (!(log_d >= 0.0)) throw InvalidArgument("rankin_remainder_log: log D must be >= 0");
  if (static_cast<std::uint64_t>(std::ceil(z)) > table.limit())
    throw RangeError("rankin_remainder_log: z beyond table limit " + std::to_string(table.limit()));
  CompensatedSum acc;
  acc.add(delta * log_d);
  for (auto p : table) {
    if (static_cast<double>(p) >= z) break;
    acc.add(std::log1p(8.0 * std::exp(-delta * std::log(static_cast<double>(p)))));
  }
  return acc.bounded(Domain::log);
}

std::uint64_t remainder_exact_small(double z, double log_d) {
  std::vector<std::uint64_t> primes;
  for (auto p : simple_sieve(static_cast<std::uint64_t>(std::ceil(z))))
    if (static_cast<double>(p) < z) primes.push_back(p);
  if (primes.size() > 20)
    throw RangeError("remainder_exact_small: " + std::to_string(primes.size()) +
                     " primes below z; divisor enumeration refused beyond 20");
  using u128 = unsigned __int128;
  std::uint64_t total = 0;
  const std::size_t n = primes.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    u128 d = 1;
    std::uint64_t tau = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        d *= primes[i];
        tau *= 8;
      }
    }
    if (std::log(static_cast<double>(d)) < log_d) total += tau;
  }
  return total;
}

ConstantsReport verify_constants(double s) {
  ConstantsReport r;
  r.v_constant_rederived = 0.5 * std::exp(2.0 * kOddReciprocalSumConstant - 2.0 * kTail3Bound);
  r.tail_3 = tail_sum_p_pminus2(3.0).upper();
  const auto sq = tail_sum_p_squared(3.0);
  r.tail_chain = 1.0 / 3.0 + sq.upper();
  r.v_constant_holds = r.tail_3 <= kTail3Bound && r.tail_chain < kTail3Bound &&
                       r.v_constant_rederived >= kVLowerConstant &&
                       r.v_constant_rederived - kVLowerConstant <= 1e-4;
  r.v_note =
      "the 0.5357 bound controls half of the k >= 2 Taylor remainder; the exponent loss is 2 * 0.5357";

  r.remainder_at_fixed_alpha = remainder_constant(0.457, s);
  r.alpha_opt = optimize_alpha(s);
  r.remainder_at_alpha_opt = remainder_constant(r.alpha_opt, s);
  r.exp_constant_rederived = 8.0 * kReciprocalSumConstant;
  r.remainder_holds = r.remainder_at_fixed_alpha <= 0.591 &&
                      r.remainder_at_alpha_opt <= r.remainder_at_fixed_alpha &&
                      std::fabs(r.exp_constant_rederived - kRemainderExpConstant) <= 1e-4;

  r.k = DensityModel::k();
  r.sieve_factor = main_sieve_factor(s, r.k);
  r.min_level = min_level_exponent(r.k);
  r.sieve_factor_holds = r.sieve_factor > 0;
  return r;
}

}  // namespace omega_sieve
