#pragma once

#include <cstdint>
#include <filesystem>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

namespace omega_sieve {

/// Integer square root, exact for all 64-bit inputs.
std::uint64_t isqrt(std::uint64_t n);

/// Primes <= limit by a plain sieve of Eratosthenes. Used for base primes
/// and as a reference in tests; not intended for large limits.
std::vector<std::uint64_t> simple_sieve(std::uint64_t limit);

/// Streams the primes of [start, stop) one segment at a time.
///
/// Segments are odd-only byte sieves over a fixed span of integers. Base
/// primes up to sqrt(stop) are computed once at construction. A cursor is
/// single-consumer; independent cursors can run concurrently.
class SegmentedSieve {
 public:
  static constexpr std::uint64_t kDefaultSpan = std::uint64_t{1} << 21;

  SegmentedSieve(std::uint64_t start, std::uint64_t stop,
                 std::uint64_t span = kDefaultSpan);

  /// Replaces `out` with the primes of the next segment in increasing order.
  /// Returns false once the range is exhausted.
  bool next(std::vector<std::uint64_t>& out);

  /// Sieves [lo, hi) without touching the cursor. Thread-safe for distinct
  /// output vectors; requires hi <= stop().
  void sieve_range(std::uint64_t lo, std::uint64_t hi,
                   std::vector<std::uint64_t>& out) const;

  std::uint64_t position() const { return pos_; }
  std::uint64_t stop() const { return stop_; }
  std::uint64_t span() const { return span_; }

 private:
  std::uint64_t pos_;
  std::uint64_t stop_;
  std::uint64_t span_;
  std::vector<std::uint32_t> base_primes_;
};

/// Immutable store of the primes below `limit`, with pi(x) and p_i queries.
///
/// Storage is an odd-only bitset plus cumulative popcounts per 64-bit word,
/// so count() is O(1) and select() is a binary search over words.
class PrimeTable {
 public:
  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::uint64_t*;
    using reference = std::uint64_t;

    const_iterator() = default;
    std::uint64_t operator*() const { return value_; }
    const_iterator& operator++();
    const_iterator operator++(int) {
      auto tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const const_iterator& o) const { return value_ == o.value_; }

   private:
    friend class PrimeTable;
    const_iterator(const PrimeTable* t, std::uint64_t v) : table_(t), value_(v) {}
    const PrimeTable* table_ = nullptr;
    std::uint64_t value_ = 0;
  };

  /// Sieves [2, limit). Throws InvalidArgument if limit < 3.
  explicit PrimeTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  /// Number of primes below limit().
  std::uint64_t size() const { return total_; }

  bool contains(std::uint64_t n) const;

  /// pi(x): number of primes <= x. Requires x < limit().
  std::uint64_t count(std::uint64_t x) const;

  /// The i-th prime (1-based). Requires 1 <= i <= size().
  std::uint64_t select(std::uint64_t i) const;

  /// Smallest prime > n, or nullopt if none below limit().
  std::optional<std::uint64_t> next_prime(std::uint64_t n) const;

  /// Largest prime <= x, or nullopt if x < 2. Requires x < limit().
  std::optional<std::uint64_t> prev_prime(std::uint64_t x) const;

  const_iterator begin() const;
  const_iterator end() const { return {this, 0}; }

  /// Primes p with lo <= p < hi (hi clamped to limit()).
  std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) const;

  /// Writes the table's bitset segments to `path`. Format: magic "OMSVPTB1",
  /// u64 limit, u64 segment count, then per segment a u64 byte length
  /// followed by the bitset bytes. All integers little-endian.
  void save(const std::filesystem::path& path) const;
  static std::optional<PrimeTable> load(const std::filesystem::path& path);

 private:
  PrimeTable() = default;
  void finish_counts();
  bool odd_bit(std::uint64_t idx) const {
    return (bits_[idx >> 6] >> (idx & 63)) & 1u;
  }

  std::uint64_t limit_ = 0;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> bits_;        // bit i <=> 2i+1 prime
  std::vector<std::uint64_t> cumulative_;  // primes among odd bits before word w
};

/// Builds a table, consulting the OMEGA_SIEVE_CACHE directory when set.
/// A missing or unreadable cache entry falls back to sieving.
PrimeTable build_table(std::uint64_t limit);

struct PrimeGap {
  std::uint64_t gap = 0;
  std::uint64_t at = 0;  // smaller prime of the first pair attaining gap
};

/// Largest p_{i+1} - p_i with p_{i+1} <= limit. Streams segments; never
/// stores the full prime list. Throws InvalidArgument if limit < 5.
PrimeGap max_prime_gap(std::uint64_t limit);

}  // namespace omega_sieve
