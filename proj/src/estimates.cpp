#include "omega_sieve/estimates.hpp"

#include <cmath>
#include <string>

#include "omega_sieve/errors.hpp"
#include "omega_sieve/segment_stream.hpp"

namespace omega_sieve {

namespace {

std::uint64_t ceil_u64(double z) { return static_cast<std::uint64_t>(std::ceil(z)); }

void require_table(const PrimeTable* table, double z, const char* op) {
  if (table == nullptr) throw InvalidArgument(std::string(op) + ": exact mode requires a prime table");
  if (ceil_u64(z) > table->limit())
    throw RangeError(std::string(op) + ": z = " + std::to_string(z) + " beyond table limit " +
                     std::to_string(table->limit()));
}

void require_analytic_range(double z, const char* op) {
  if (!(z >= kAnalyticRangeStart))
    throw RangeError(std::string(op) + ": analytic bound only valid for z >= 1e10, got z = " + std::to_string(z));
}

template <class Term>
BoundedValue table_sum(const PrimeTable& table, double z, Term term) {
  CompensatedSum acc;
  for (std::uint64_t p : table) {
    if (static_cast<double>(p) >= z) break;
    acc.add(term(p));
  }
  return acc.bounded();
}

template <class Term>
BoundedValue sieve_tail(double w, Term term, double tail) {
  if (!(w >= 3)) throw InvalidArgument("tail sum requires w >= 3");
  CompensatedSum acc;
  std::uint64_t start = ceil_u64(w);
  if (start < kTailCutoff) {
    SegmentedSieve sieve(start, kTailCutoff);
    std::vector<std::uint64_t> primes;
    while (sieve.next(primes))
      for (auto p : primes) acc.add(term(static_cast<double>(p)));
  }
  acc.add(tail);
  return acc.bounded();
}

}  // namespace

BoundedValue prime_reciprocal_sum(double z, SumMode mode, const PrimeTable* table) {
  if (!(z >= 2)) throw InvalidArgument("prime_reciprocal_sum: z must be >= 2");
  if (mode == SumMode::analytic_upper) {
    require_analytic_range(z, "prime_reciprocal_sum");
    return BoundedValue::evaluated(std::log(std::log(z)) + kReciprocalSumConstant);
  }
  require_table(table, z, "prime_reciprocal_sum");
  return table_sum(*table, z, [](std::uint64_t p) { return 1.0 / static_cast<double>(p); });
}

BoundedValue interval_reciprocal_bound(double w, double z) {
  if (!(w >= kIntervalBoundStart))
    throw RangeError("interval_reciprocal_bound: requires w >= 286, got w = " + std::to_string(w));
  if (!(z >= w)) throw InvalidArgument("interval_reciprocal_bound: requires z >= w");
  const double lw = std::log(w);
  const double lz = std::log(z);
  const double v = 2.0 * std::log(lz / lw) + 1.0 / (lz * lz) + 1.0 / (lw * lw);
  return BoundedValue::evaluated(v, Domain::linear, 8.0);
}

BoundedValue sum_logp_over_p(double z, SumMode mode, const PrimeTable* table) {
  if (!(z >= 2)) throw InvalidArgument("sum_logp_over_p: z must be >= 2");
  if (mode == SumMode::analytic_upper) {
    require_analytic_range(z, "sum_logp_over_p");
    return BoundedValue::evaluated(std::log(z));
  }
  require_table(table, z, "sum_logp_over_p");
  return table_sum(*table, z, [](std::uint64_t p) {
    const double x = static_cast<double>(p);
    return std::log(x) / x;
  });
}

BoundedValue tail_sum_p_pminus2(double w) {
  const double c = std::max(std::ceil(w), static_cast<double>(kTailCutoff));
  return sieve_tail(w, [](double p) { return 1.0 / (p * (p - 2.0)); }, 1.0 / (c - 2.0));
}

BoundedValue tail_sum_p_squared(double w) {
  const double c = std::max(std::ceil(w), static_cast<double>(kTailCutoff));
  return sieve_tail(w, [](double p) { return 1.0 / (p * p); }, 1.0 / (c - 1.0));
}

StreamedSums streamed_prime_sums(double z, unsigned threads, std::uint64_t span) {
  if (!(z >= 2)) throw InvalidArgument("streamed_prime_sums: z must be >= 2");
  struct Partial {
    CompensatedSum reciprocal, log_p_over_p, log_v;
    std::uint64_t count = 0;
  };
  Partial total;
  const std::uint64_t stop = ceil_u64(z);
  stream_segments<Partial>(
      2, stop, threads,
      [](std::uint64_t, std::uint64_t, const std::vector<std::uint64_t>& primes) {
        Partial part;
        for (auto p : primes) {
          const double x = static_cast<double>(p);
          part.reciprocal.add(1.0 / x);
          part.log_p_over_p.add(std::log(x) / x);
          part.log_v.add(p == 2 ? std::log(0.5) : std::log1p(-2.0 / x));
        }
        part.count = primes.size();
        return part;
      },
      [&](std::uint64_t, std::uint64_t, const std::vector<std::uint64_t>&, Partial& part) {
        total.reciprocal.merge(part.reciprocal);
        total.log_p_over_p.merge(part.log_p_over_p);
        total.log_v.merge(part.log_v);
        total.count += part.count;
        return true;
      },
      span);
  return {z, total.count, total.reciprocal.bounded(), total.log_p_over_p.bounded(),
          total.log_v.bounded(Domain::log)};
}

}  // namespace omega_sieve
