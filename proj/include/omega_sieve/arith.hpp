#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace omega_sieve {

/// Omega (with multiplicity) and omega (distinct) of n.
struct FactorMultiplicity {
  std::uint64_t n = 1;
  unsigned omega_big = 0;
  unsigned omega_small = 0;

  bool squarefree() const { return omega_big == omega_small; }
};

/// Smallest-prime-factor lookup for 2 <= n < limit.
class SmallestFactorTable {
 public:
  explicit SmallestFactorTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  std::uint32_t at(std::uint64_t n) const { return spf_[n]; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

/// Deterministic Miller-Rabin, exact for all 64-bit n.
bool is_prime_u64(std::uint64_t n);

/// Prime factorisation as (prime, exponent) pairs in increasing prime order.
/// Uses trial division, then Miller-Rabin and Pollard-Brent rho on the cofactor.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// Exact Omega/omega. When `spf` covers n the lookup path is used.
/// Throws InvalidArgument for n = 0 or when n is outside a supplied table.
FactorMultiplicity big_omega(std::uint64_t n, const SmallestFactorTable* spf = nullptr);

/// tau_k(d) = k^omega(d) for squarefree d. Throws InvalidArgument for
/// non-squarefree d or k = 0, RangeError on 64-bit overflow.
std::uint64_t tau_k_squarefree(std::uint64_t d, std::uint64_t k);

}  // namespace omega_sieve
