#include "omega_sieve/prime_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "omega_sieve/errors.hpp"

namespace omega_sieve {

namespace {

constexpr char kTableMagic[8] = {'O', 'M', 'S', 'V', 'P', 'T', 'B', '1'};
constexpr std::uint64_t kCacheSegmentWords = 1u << 16;

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

bool read_u64(std::istream& is, std::uint64_t& v) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return true;
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > 0xFFFFFFFFull || r * r > n)) --r;
  while (r + 1 <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) primes.push_back(i);
  return primes;
}

// ---------------------------------------------------------------------------
// SegmentedSieve

SegmentedSieve::SegmentedSieve(std::uint64_t start, std::uint64_t stop,
                               std::uint64_t span)
    : pos_(start), stop_(stop), span_(std::max<std::uint64_t>(span, 64)) {
  if (stop_ > 2) {
    for (auto p : simple_sieve(isqrt(stop_ - 1)))
      if (p > 2) base_primes_.push_back(static_cast<std::uint32_t>(p));
  }
}

bool SegmentedSieve::next(std::vector<std::uint64_t>& out) {
  out.clear();
  if (pos_ >= stop_) return false;
  std::uint64_t hi = std::min(stop_, pos_ + span_);
  sieve_range(pos_, hi, out);
  pos_ = hi;
  return true;
}

void SegmentedSieve::sieve_range(std::uint64_t lo, std::uint64_t hi,
                                 std::vector<std::uint64_t>& out) const {
  out.clear();
  if (hi <= lo) return;
  if (lo <= 2 && hi > 2) out.push_back(2);
  std::uint64_t first_odd = lo | 1u;
  if (first_odd >= hi) return;
  const std::uint64_t n = (hi - first_odd + 1) / 2;  // odd numbers in segment
  std::vector<unsigned char> composite(n, 0);
  if (first_odd == 1) composite[0] = 1;

  for (std::uint32_t p32 : base_primes_) {
    const std::uint64_t p = p32;
    const std::uint64_t sq = p * p;
    if (sq >= hi) break;
    std::uint64_t m = std::max(sq, (first_odd + p - 1) / p * p);
    if ((m & 1u) == 0) m += p;
    for (std::uint64_t idx = (m - first_odd) / 2; idx < n; idx += p) composite[idx] = 1;
  }

  for (std::uint64_t i = 0; i < n; ++i)
    if (!composite[i]) out.push_back(first_odd + 2 * i);
}

// ---------------------------------------------------------------------------
// PrimeTable

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 3) throw InvalidArgument("PrimeTable: limit must be >= 3, got " + std::to_string(limit));
  const std::uint64_t odd_count = limit / 2;  // odd numbers 1,3,...,< limit
  bits_.assign((odd_count + 63) / 64, 0);
  SegmentedSieve sieve(3, limit);
  std::vector<std::uint64_t> primes;
  while (sieve.next(primes)) {
    for (auto p : primes) {
      const std::uint64_t idx = p / 2;
      bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
    }
  }
  finish_counts();
}

void PrimeTable::finish_counts() {
  cumulative_.resize(bits_.size() + 1);
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    cumulative_[w] = acc;
    acc += static_cast<std::uint64_t>(std::popcount(bits_[w]));
  }
  cumulative_[bits_.size()] = acc;
  total_ = acc + 1;  // the prime 2
}

bool PrimeTable::contains(std::uint64_t n) const {
  if (n >= limit_) throw RangeError("PrimeTable::contains: " + std::to_string(n) + " beyond limit " + std::to_string(limit_));
  if (n == 2) return true;
  if (n < 2 || (n & 1u) == 0) return false;
  return odd_bit(n / 2);
}

std::uint64_t PrimeTable::count(std::uint64_t x) const {
  if (x >= limit_) throw RangeError("PrimeTable::count: x = " + std::to_string(x) + " beyond limit " + std::to_string(limit_));
  if (x < 2) return 0;
  // odd indices 0..idx inclusive, where 2*idx+1 <= x
  const std::uint64_t idx = (x - 1) / 2;
  const std::uint64_t w = idx >> 6;
  const unsigned b = static_cast<unsigned>(idx & 63);
  const std::uint64_t mask = b == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (b + 1)) - 1);
  return 1 + cumulative_[w] + static_cast<std::uint64_t>(std::popcount(bits_[w] & mask));
}

std::uint64_t PrimeTable::select(std::uint64_t i) const {
  if (i == 0 || i > total_)
    throw RangeError("PrimeTable::select: index " + std::to_string(i) + " beyond table of " +
                     std::to_string(total_) + " primes below limit " + std::to_string(limit_));
  if (i == 1) return 2;
  const std::uint64_t rank = i - 1;  // 1-based rank among odd primes
  // last word whose cumulative count is < rank
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end() - 1, rank);
  std::size_t w = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  std::uint64_t need = rank - cumulative_[w];
  std::uint64_t word = bits_[w];
  for (std::uint64_t k = 1; k < need; ++k) word &= word - 1;
  const std::uint64_t idx = w * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
  return 2 * idx + 1;
}

std::optional<std::uint64_t> PrimeTable::next_prime(std::uint64_t n) const {
  if (n < 2) return 2;
  std::uint64_t idx = (n + 1) / 2;  // first odd > n is 2*idx+1
  std::uint64_t w = idx >> 6;
  if (w >= bits_.size()) return std::nullopt;
  std::uint64_t word = bits_[w] & (~std::uint64_t{0} << (idx & 63));
  while (word == 0) {
    if (++w >= bits_.size()) return std::nullopt;
    word = bits_[w];
  }
  const std::uint64_t p = 2 * (w * 64 + static_cast<std::uint64_t>(std::countr_zero(word))) + 1;
  if (p >= limit_) return std::nullopt;
  return p;
}

std::optional<std::uint64_t> PrimeTable::prev_prime(std::uint64_t x) const {
  const std::uint64_t c = count(x);
  if (c == 0) return std::nullopt;
  return select(c);
}

PrimeTable::const_iterator& PrimeTable::const_iterator::operator++() {
  auto nxt = table_->next_prime(value_);
  value_ = nxt ? *nxt : 0;
  return *this;
}

PrimeTable::const_iterator PrimeTable::begin() const { return {this, 2}; }

std::vector<std::uint64_t> PrimeTable::primes_in(std::uint64_t lo, std::uint64_t hi) const {
  std::vector<std::uint64_t> out;
  hi = std::min(hi, limit_);
  auto p = lo <= 2 ? std::optional<std::uint64_t>{2} : next_prime(lo - 1);
  while (p && *p < hi) {
    out.push_back(*p);
    p = next_prime(*p);
  }
  return out;
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write prime cache " + path.string());
  os.write(kTableMagic, sizeof kTableMagic);
  write_u64(os, limit_);
  const std::uint64_t segments = (bits_.size() + kCacheSegmentWords - 1) / kCacheSegmentWords;
  write_u64(os, segments);
  for (std::uint64_t s = 0; s < segments; ++s) {
    const std::uint64_t w0 = s * kCacheSegmentWords;
    const std::uint64_t w1 = std::min<std::uint64_t>(bits_.size(), w0 + kCacheSegmentWords);
    write_u64(os, (w1 - w0) * 8);
    for (std::uint64_t w = w0; w < w1; ++w) write_u64(os, bits_[w]);
  }
  if (!os) throw IoError("short write to prime cache " + path.string());
}

std::optional<PrimeTable> PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, 8) || !std::equal(magic, magic + 8, kTableMagic)) return std::nullopt;
  PrimeTable t;
  std::uint64_t segments = 0;
  if (!read_u64(is, t.limit_) || !read_u64(is, segments) || t.limit_ < 3) return std::nullopt;
  const std::uint64_t words = (t.limit_ / 2 + 63) / 64;
  t.bits_.reserve(words);
  for (std::uint64_t s = 0; s < segments; ++s) {
    std::uint64_t len = 0;
    if (!read_u64(is, len) || len % 8 != 0) return std::nullopt;
    for (std::uint64_t k = 0; k < len / 8; ++k) {
      std::uint64_t w = 0;
      if (!read_u64(is, w)) return std::nullopt;
      t.bits_.push_back(w);
    }
  }
  if (t.bits_.size() != words) return std::nullopt;
  t.finish_counts();
  return t;
}

PrimeTable build_table(std::uint64_t limit) {
  const char* dir = std::getenv("OMEGA_SIEVE_CACHE");
  if (dir == nullptr || *dir == '\0') return PrimeTable(limit);
  const auto path = std::filesystem::path(dir) / ("primes_" + std::to_string(limit) + ".bin");
  if (auto cached = PrimeTable::load(path); cached && cached->limit() == limit) return std::move(*cached);
  PrimeTable t(limit);
  try {
    std::filesystem::create_directories(dir);
    t.save(path);
  } catch (const std::exception&) {
    // cache is best-effort
  }
  return t;
}

PrimeGap max_prime_gap(std::uint64_t limit) {
  if (limit < 5) throw InvalidArgument("max_prime_gap: limit must be >= 5, got " + std::to_string(limit));
  PrimeGap best;
  std::uint64_t prev = 0;
  SegmentedSieve sieve(2, limit + 1);
  std::vector<std::uint64_t> primes;
  while (sieve.next(primes)) {
    for (auto p : primes) {
      if (prev != 0 && p - prev > best.gap) best = {p - prev, prev};
      prev = p;
    }
  }
  return best;
}

}  // namespace omega_sieve
