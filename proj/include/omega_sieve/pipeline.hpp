#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "omega_sieve/bounded_value.hpp"
#include "omega_sieve/prime_table.hpp"

namespace omega_sieve {

/// Parameters of a sieve verification run. D = z^s is never formed outside
/// log domain; z = N^{1/r}.
struct SieveParams {
  double s = 18.4;
  double k = 0;  // 0 selects kappa + log K = 2 + log 3
  unsigned r = 20;
  std::vector<double> delta_set{0.2, 0.8, 0.9};
  double margin = 1e-6;

  double effective_k() const;
  /// Throws PreconditionError / InvalidArgument when s < 2k + 3, the delta
  /// set is empty or a delta lies outside (0, 1).
  void validate() const;
};

inline constexpr std::uint64_t kDefaultFinalCheckpoint = 10'000'000'147ull;

/// Index of the checkpoint after the one with prime index i:
/// i + 1 while i < 100, otherwise i + 10^(l-1) where 10^l <= i < 10^(l+1).
std::uint64_t next_checkpoint_index(std::uint64_t i);

/// The prime checkpoint following prime q. Requires q prime in the table and
/// the next checkpoint below its limit (RangeError otherwise).
std::uint64_t checkpoint_schedule(std::uint64_t q, const PrimeTable& table);

enum class Verdict { positive, failed };

struct DeltaAttempt {
  double delta = 0;
  double log_remainder = 0;
  double slack = 0;
};

/// Lower bound S(q_lo, q_hi) for sieving levels z in (q_lo, q_hi].
/// threshold = params.margin + slack; positive iff log_main - log_remainder > threshold.
struct IntervalCertificate {
  std::uint64_t q_lo = 0;
  std::uint64_t q_hi = 0;
  double delta_used = 0;
  double log_main = 0;
  double log_remainder = 0;
  double slack = 0;
  double threshold = 0;
  Verdict verdict = Verdict::failed;
  std::vector<DeltaAttempt> attempts;  // filled for failures only

  double excess() const { return log_main - log_remainder - threshold; }
};

/// Computes the certificate for one delta. `log_v` is log V(q_hi) and
/// `rankin_sum` is sum_{p<q_hi} log(1 + 8 p^-delta), both running prefix values.
/// Throws PreconditionError when F(s, k) <= 0.
IntervalCertificate interval_lower_bound(std::uint64_t q_lo, std::uint64_t q_hi, double delta,
                                         const SieveParams& params, const BoundedValue& log_v,
                                         const BoundedValue& rankin_sum);

/// Full state of a Case 2 run after an integral number of segments. Enough
/// to resume bit-identically.
struct Case2State {
  std::uint64_t position = 2;      // next integer to sieve
  std::uint64_t prime_index = 0;   // primes absorbed so far
  std::uint64_t q_lo = 0;          // current checkpoint (0 before the first prime)
  std::uint64_t next_index = 1;    // prime index of the next checkpoint
  std::uint64_t intervals = 0;
  std::uint64_t failures = 0;
  double worst_excess = 0;         // min over positive certificates of excess()
  bool any_positive = false;
  CompensatedSum::State log_v;
  std::vector<CompensatedSum::State> rankin;  // one per delta
};

struct Case2Summary {
  std::uint64_t intervals = 0;
  std::uint64_t failures = 0;
  double worst_margin = 0;  // smallest excess over the threshold among positive certificates
  std::uint64_t q_end = 0;
  std::uint64_t primes = 0;
  bool complete = false;
};

struct Case2Options {
  unsigned threads = 1;
  std::uint64_t checkpoint_every = 1'000'000;  // primes between checkpoint callbacks
  std::function<void(const Case2State&)> on_checkpoint;
  std::optional<Case2State> resume;
  /// Stop (incomplete) at the first segment end with at least this many primes absorbed. 0 = never.
  std::uint64_t stop_after_primes = 0;
  std::uint64_t span = SegmentedSieve::kDefaultSpan;
};

/// Smallest prime >= q_max, the final checkpoint of a run. nullopt for q_max < 3.
std::optional<std::uint64_t> final_checkpoint(double q_max);

/// Streams the primes up to the final checkpoint, maintaining running log V and
/// Rankin sums, and emits one certificate per checkpoint interval in order.
/// For each interval the deltas are tried in order; the first positive one is
/// emitted, otherwise a failure certificate listing every attempt.
Case2Summary run_case2(double q_max, const SieveParams& params,
                       const std::function<void(const IntervalCertificate&)>& sink,
                       const Case2Options& options = {});

struct Case3Result {
  bool holds = false;
  double lhs_log = 0;
  double rhs_log = 0;
  double difference() const { return lhs_log - rhs_log; }
  // constants re-derivation
  double lhs_constant = 4.0;
  double lhs_constant_rederived = 0;  // r^2 * 0.2749 * F(s, k)
  double rhs_constant = 1.182;
  double rhs_constant_rederived = 0;  // 2 * 0.591
  double exponent = 0;                // s / r
  bool constants_hold = false;
};

/// Compares 4(N-1)/log^2 N with 1.182/r^8 N^{s/r} log^8 N in log domain.
/// Requires log10_n > 0.
Case3Result check_case3(double log10_n, const SieveParams& params = {});

}  // namespace omega_sieve
