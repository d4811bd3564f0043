#include "omega_sieve/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>

#include "omega_sieve/errors.hpp"

namespace omega_sieve {

namespace {

std::uint64_t count_congruent(std::uint64_t upto, std::uint64_t x, std::uint64_t d) {
  return upto >= x ? (upto - x) / d + 1 : 0;  // n in [0, upto] with n = x mod d
}

bool spf_prime(std::uint64_t x, const SmallestFactorTable& spf) { return x >= 2 && spf.at(x) == x; }

unsigned omega_from_spf(std::uint64_t x, const SmallestFactorTable& spf) {
  unsigned k = 0;
  while (x > 1) {
    x /= spf.at(x);
    ++k;
  }
  return k;
}

template <class Omega>
DecompositionWitness search_min(std::uint64_t n_value, unsigned lower_bound, Omega omega) {
  DecompositionWitness best{n_value, 0, 0, std::numeric_limits<unsigned>::max(), WitnessMethod::brute};
  for (std::uint64_t a = 1; a <= n_value / 2; ++a) {
    const unsigned v = omega(a) + omega(n_value - a);
    if (v < best.omega_ab) {
      best.a = a;
      best.b = n_value - a;
      best.omega_ab = v;
      if (v <= lower_bound) break;
    }
  }
  return best;
}

}  // namespace

SiftedSetModel::SiftedSetModel(std::uint64_t n_value) : n_(n_value) {
  if (n_value < 2) throw InvalidArgument("SiftedSetModel: N must be >= 2");
}

bool SiftedSetModel::member_divisible(std::uint64_t n, std::uint64_t d) const {
  using u128 = unsigned __int128;
  return static_cast<u128>(n % d) * ((n_ - n) % d) % d == 0;
}

std::uint64_t sifted_count_exact(std::uint64_t n_value, double z) {
  const SiftedSetModel model(n_value);
  if (n_value > kDeskBound)
    throw RangeError("sifted_count_exact: N = " + std::to_string(n_value) +
                     " above the desk bound 1e7; use the sieve pipeline for large N");
  if (z <= 2.0) return model.size();
  const SmallestFactorTable spf(n_value + 1);
  std::uint64_t survivors = 0;
  for (std::uint64_t n = 1; n < n_value; ++n) {
    const std::uint64_t a = n, b = n_value - n;
    int twos = std::countr_zero(a) + std::countr_zero(b);
    if (!model.even()) --twos;  // member is n(N-n)/2
    if (twos > 0) continue;     // 2 < z divides the member
    const std::uint64_t oa = a >> std::countr_zero(a);
    const std::uint64_t ob = b >> std::countr_zero(b);
    std::uint64_t smallest = std::numeric_limits<std::uint64_t>::max();
    if (oa > 1) smallest = std::min<std::uint64_t>(smallest, spf.at(oa));
    if (ob > 1) smallest = std::min<std::uint64_t>(smallest, spf.at(ob));
    if (static_cast<double>(smallest) >= z) ++survivors;
  }
  return survivors;
}

Residual r_d_residual(std::uint64_t n_value, std::uint64_t d) {
  const SiftedSetModel model(n_value);
  if (d == 0 || d % 2 == 0) throw InvalidArgument("r_d_residual: d must be odd and positive");
  const auto fm = big_omega(d);
  if (!fm.squarefree()) throw InvalidArgument("r_d_residual: d = " + std::to_string(d) + " is not squarefree");
  Residual res;
  using u128 = unsigned __int128;
  const std::uint64_t n_mod = n_value % d;
  for (std::uint64_t x = 0; x < d; ++x) {
    if (static_cast<u128>(x) * ((n_mod + d - x) % d) % d != 0) continue;
    res.count += count_congruent(n_value - 1, x, d) - (x == 0 ? 1 : 0);
  }
  res.expected = static_cast<double>(model.size()) * static_cast<double>(std::uint64_t{1} << fm.omega_small) /
                 static_cast<double>(d);
  res.r = static_cast<double>(res.count) - res.expected;
  res.admissible = std::gcd(d, n_value) == 1;
  res.tau = std::uint64_t{1} << fm.omega_small;
  return res;
}

unsigned min_omega_lower_bound(std::uint64_t n_value, const SmallestFactorTable& spf) {
  if (n_value == 2) return 0;
  if (spf_prime(n_value - 1, spf)) return 1;
  if (n_value % 2 == 0) return 2;
  // odd N: Omega sum 2 needs N - 2 prime or N - 1 = 2q with q prime
  if (spf_prime(n_value - 2, spf) || spf_prime((n_value - 1) / 2, spf)) return 2;
  return 3;
}

DecompositionWitness min_omega_decomposition(std::uint64_t n_value, const SmallestFactorTable& spf) {
  if (n_value < 2) throw InvalidArgument("min_omega_decomposition: N must be >= 2");
  if (n_value >= spf.limit())
    throw RangeError("min_omega_decomposition: N = " + std::to_string(n_value) + " outside spf table limit " +
                     std::to_string(spf.limit()));
  return search_min(n_value, min_omega_lower_bound(n_value, spf),
                    [&spf](std::uint64_t x) { return omega_from_spf(x, spf); });
}

DecompositionWitness primegap_witness(std::uint64_t n_value, std::uint64_t m, unsigned K, const PrimeTable& table) {
  if (m == 0 || (m != 1 && !is_prime_u64(m)))
    throw InvalidArgument("primegap_witness: m must be 1 or prime, got " + std::to_string(m));
  const bool hypothesis = K >= 2 && (K - 2 >= 63 || m * kMaxGapBound <= (std::uint64_t{1} << (K - 2)));
  if (!hypothesis)
    throw PreconditionError("primegap_witness: hypothesis m * 1476 <= 2^(K-2) fails for m = " + std::to_string(m) +
                            ", K = " + std::to_string(K));
  if (n_value <= 2 * m || (n_value - 1) / m >= table.limit())
    throw RangeError("primegap_witness: N = " + std::to_string(n_value) + " outside (2m, m * " +
                     std::to_string(table.limit()) + "]");
  const std::uint64_t p = *table.prev_prime((n_value - 1) / m);
  DecompositionWitness w{n_value, m * p, n_value - m * p, 0, WitnessMethod::primegap};
  w.omega_ab = big_omega(w.a).omega_big + big_omega(w.b).omega_big;
  if (w.omega_ab > K)
    throw VerificationFailure("primegap_witness: Omega(ab) = " + std::to_string(w.omega_ab) + " > K = " +
                              std::to_string(K) + " at N = " + std::to_string(n_value));
  return w;
}

ScanReport scan_range(std::uint64_t lo, std::uint64_t hi, unsigned target, unsigned threads) {
  ScanReport rep;
  rep.lo = lo;
  rep.hi = hi;
  rep.target = target;
  if (lo > hi) return rep;
  if (lo < 2) throw InvalidArgument("scan_range: lo must be >= 2");
  if (hi > kDeskBound) throw RangeError("scan_range: hi above the desk bound 1e7");

  const SmallestFactorTable spf(hi + 1);
  std::vector<std::uint8_t> omega(hi + 1, 0);
  for (std::uint64_t n = 2; n <= hi; ++n) omega[n] = static_cast<std::uint8_t>(omega[n / spf.at(n)] + 1);
  const PrimeTable table(std::max<std::uint64_t>(hi + 1, 3));
  const bool use_primegap = target >= 2 && (target - 2 >= 63 || kMaxGapBound <= (std::uint64_t{1} << (target - 2)));

  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (hi - lo) / kChunk + 1;
  struct Partial {
    std::vector<std::uint64_t> failures;
    std::map<unsigned, std::uint64_t> histogram;
    unsigned max_min = 0;
    std::uint64_t argmax = 0;
    std::uint64_t primegap_hits = 0;
  };
  std::vector<Partial> parts(chunks);

#pragma omp parallel for num_threads(static_cast<int>(std::max(1u, threads))) schedule(dynamic, 1)
  for (std::uint64_t c = 0; c < chunks; ++c) {
    Partial& part = parts[c];
    const std::uint64_t first = lo + c * kChunk;
    const std::uint64_t last = std::min(hi, first + kChunk - 1);
    for (std::uint64_t n = first; n <= last; ++n) {
      if (use_primegap && n >= 3) {
        const std::uint64_t p = *table.prev_prime(n - 1);
        if (static_cast<unsigned>(1 + omega[n - p]) <= target) ++part.primegap_hits;
      }
      const auto w = search_min(n, min_omega_lower_bound(n, spf), [&omega](std::uint64_t x) { return omega[x]; });
      ++part.histogram[w.omega_ab];
      if (part.argmax == 0 || w.omega_ab > part.max_min) {
        part.max_min = w.omega_ab;
        part.argmax = n;
      }
      if (w.omega_ab > target) part.failures.push_back(n);
    }
  }

  for (const auto& part : parts) {
    for (auto [k, v] : part.histogram) rep.histogram[k] += v;
    rep.failures.insert(rep.failures.end(), part.failures.begin(), part.failures.end());
    if (part.argmax != 0 && (rep.argmax == 0 || part.max_min > rep.max_min_omega)) {
      rep.max_min_omega = part.max_min;
      rep.argmax = part.argmax;
    }
    rep.primegap_hits += part.primegap_hits;
  }
  rep.checked = hi - lo + 1;
  return rep;
}

}  // namespace omega_sieve
