#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "omega_sieve/arith.hpp"
#include "omega_sieve/prime_table.hpp"

namespace omega_sieve {

/// A = { n(N-n) : 1 <= n <= N-1 } for even N, { n(N-n)/2 } for odd N.
class SiftedSetModel {
 public:
  explicit SiftedSetModel(std::uint64_t n_value);

  std::uint64_t N() const { return n_; }
  bool even() const { return n_ % 2 == 0; }
  std::uint64_t size() const { return n_ - 1; }

  /// Whether the member indexed by n is divisible by the odd number d.
  /// Evaluated as d | n(N-n) without forming the product.
  bool member_divisible(std::uint64_t n, std::uint64_t d) const;

 private:
  std::uint64_t n_;
};

inline constexpr std::uint64_t kDeskBound = 10'000'000;

/// #{1 <= n <= N-1 : member(n) has no prime factor < z}. Refuses N > 1e7.
std::uint64_t sifted_count_exact(std::uint64_t n_value, double z);

struct Residual {
  std::uint64_t count = 0;  // |A_d|
  double expected = 0;      // (N - 1) g(d)
  double r = 0;             // |A_d| - (N - 1) g(d)
  bool admissible = true;   // gcd(d, N) == 1: only then |r| <= tau(d) is claimed
  std::uint64_t tau = 1;    // 2^omega(d)
};

/// r_d = |A_d| - (N-1) g(d) for odd squarefree d, counted over residues mod d.
Residual r_d_residual(std::uint64_t n_value, std::uint64_t d);

enum class WitnessMethod { brute, primegap };

struct DecompositionWitness {
  std::uint64_t N = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  unsigned omega_ab = 0;
  WitnessMethod method = WitnessMethod::brute;
};

/// Minimises Omega(a) + Omega(N - a) over 1 <= a <= N/2; ties go to the
/// smallest a. Stops early once a provable lower bound is reached.
/// Requires N < spf.limit().
DecompositionWitness min_omega_decomposition(std::uint64_t n_value, const SmallestFactorTable& spf);

/// Lower bound on min_a Omega(a(N-a)) from primality of N-1, N-2 and (N-1)/2.
unsigned min_omega_lower_bound(std::uint64_t n_value, const SmallestFactorTable& spf);

inline constexpr std::uint64_t kMaxGapBound = 1476;

/// a = m p for the largest prime p with m p < N, b = N - a. Requires
/// m = 1 or prime, m * 1476 <= 2^(K-2), and 2m < N <= m * table.limit().
/// Throws PreconditionError on the hypothesis, RangeError on N.
DecompositionWitness primegap_witness(std::uint64_t n_value, std::uint64_t m, unsigned K, const PrimeTable& table);

struct ScanReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  unsigned target = 0;
  std::uint64_t checked = 0;
  std::vector<std::uint64_t> failures;
  unsigned max_min_omega = 0;
  std::uint64_t argmax = 0;  // smallest N attaining max_min_omega
  std::map<unsigned, std::uint64_t> histogram;
  std::uint64_t primegap_hits = 0;  // N whose primegap witness already met the target
};

/// For every N in [lo, hi]: tries the primegap witness (m = 1), then computes
/// the exact minimum Omega(ab). Failures are N whose minimum exceeds target.
/// Parallel over N with a deterministic merge.
ScanReport scan_range(std::uint64_t lo, std::uint64_t hi, unsigned target, unsigned threads = 1);

}  // namespace omega_sieve
