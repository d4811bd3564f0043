#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "omega_sieve/prime_table.hpp"

namespace omega_sieve {

/// Sieves [start, stop) in fixed segments of `span` integers. `map` runs on
/// up to 2 * threads segments concurrently; `consume` then sees every segment
/// sequentially in increasing order. Returning false from `consume` stops
/// the stream. Results depend only on the segment contents, never on the
/// thread count.
///
///   map:     Result(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint64_t>& primes)
///   consume: bool(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint64_t>& primes, Result&)
template <class Result, class Map, class Consume>
void stream_segments(std::uint64_t start, std::uint64_t stop, unsigned threads, Map&& map,
                     Consume&& consume, std::uint64_t span = SegmentedSieve::kDefaultSpan) {
  if (stop <= start) return;
  const SegmentedSieve sieve(start, stop, span);
  const int workers = static_cast<int>(std::max(1u, threads));
  const std::size_t batch = static_cast<std::size_t>(workers) * 2;
  std::vector<std::vector<std::uint64_t>> primes(batch);
  std::vector<Result> results(batch);
  std::vector<std::uint64_t> bounds(batch + 1);

  for (std::uint64_t pos = start; pos < stop;) {
    std::size_t n = 0;
    bounds[0] = pos;
    while (n < batch && bounds[n] < stop) {
      bounds[n + 1] = std::min(stop, bounds[n] + sieve.span());
      ++n;
    }
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::size_t i = 0; i < n; ++i) {
      sieve.sieve_range(bounds[i], bounds[i + 1], primes[i]);
      results[i] = map(bounds[i], bounds[i + 1], primes[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!consume(bounds[i], bounds[i + 1], primes[i], results[i])) return;
    pos = bounds[n];
  }
}

}  // namespace omega_sieve
