#pragma once

#include <cstdint>

#include "omega_sieve/bounded_value.hpp"
#include "omega_sieve/prime_table.hpp"

namespace omega_sieve {

/// Explicit Mertens-type constants (valid for z >= 1e10):
///   sum_{p<z} 1/p       < log log z + 0.2634
///   sum_{2<p<z} 1/p     < log log z - 0.2366
///   sum_{p<z} log p / p < log z
inline constexpr double kReciprocalSumConstant = 0.2634;
inline constexpr double kOddReciprocalSumConstant = 0.2366;
inline constexpr double kAnalyticRangeStart = 1e10;

/// Lower end of the interval form used for the K constant (w, z >= 286).
inline constexpr double kIntervalBoundStart = 286.0;

/// Exact partial sums stop here; beyond it a telescoping tail is added.
inline constexpr std::uint64_t kTailCutoff = 1'000'000;

enum class SumMode { exact, analytic_upper };

/// sum_{p<z} 1/p. Exact mode needs `table` with limit >= ceil(z); analytic
/// mode returns log log z + 0.2634 and requires z >= 1e10.
BoundedValue prime_reciprocal_sum(double z, SumMode mode, const PrimeTable* table = nullptr);

/// 2 log(log z / log w) + 1/log^2 z + 1/log^2 w, the upper bound for
/// 2 sum_{w<=p<=z} 1/p. Requires 286 <= w <= z.
BoundedValue interval_reciprocal_bound(double w, double z);

/// sum_{p<z} log p / p, exact or the analytic bound log z (z >= 1e10).
BoundedValue sum_logp_over_p(double z, SumMode mode, const PrimeTable* table = nullptr);

/// Certified upper bound on sum_{p>=w} 1/(p(p-2)): exact partial sum below
/// 1e6 plus the tail 1/(C-2), C = max(w, 1e6). Requires w >= 3.
BoundedValue tail_sum_p_pminus2(double w);

/// Certified upper bound on sum_{p>=w} 1/p^2, same construction with tail 1/(C-1).
BoundedValue tail_sum_p_squared(double w);

/// One streamed pass over the primes below z. Used for z far beyond any
/// stored table (up to 1e10 and a little beyond).
struct StreamedSums {
  double z = 0;
  std::uint64_t prime_count = 0;
  BoundedValue reciprocal;       // sum 1/p
  BoundedValue log_p_over_p;     // sum log p / p
  BoundedValue log_v;            // sum log(1 - g(p)), g(2) = 1/2, g(p) = 2/p
};

StreamedSums streamed_prime_sums(double z, unsigned threads = 1,
                                 std::uint64_t span = SegmentedSieve::kDefaultSpan);

}  // namespace omega_sieve
