#include "omega_sieve/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "omega_sieve/errors.hpp"
#include "omega_sieve/prime_table.hpp"

namespace omega_sieve {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kTrialBound = 1u << 12;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1u) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = simple_sieve(kTrialBound);
  return primes;
}

// Brent's variant; n odd composite.
std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

}  // namespace

SmallestFactorTable::SmallestFactorTable(std::uint64_t limit) : limit_(limit), spf_(limit, 0) {
  if (limit > 0xFFFFFFFFull) throw InvalidArgument("SmallestFactorTable: limit too large");
  for (std::uint64_t i = 2; i < limit; ++i) {
    if (spf_[i] != 0) continue;
    spf_[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t j = i * i; j < limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
  }
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("factorize: n must be positive");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (auto p : trial_primes()) {
    if (p * p > n) break;
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n == 1) return out;
  std::vector<std::uint64_t> rest;
  if (n < kTrialBound * kTrialBound)
    rest.push_back(n);
  else
    factor_large(n, rest);
  std::sort(rest.begin(), rest.end());
  for (auto p : rest) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

FactorMultiplicity big_omega(std::uint64_t n, const SmallestFactorTable* spf) {
  if (n == 0) throw InvalidArgument("big_omega: n must be positive");
  FactorMultiplicity fm{n, 0, 0};
  if (spf != nullptr) {
    if (n >= spf->limit())
      throw InvalidArgument("big_omega: n = " + std::to_string(n) + " outside spf table limit " +
                            std::to_string(spf->limit()));
    std::uint64_t last = 0;
    while (n > 1) {
      const std::uint64_t p = spf->at(n);
      ++fm.omega_big;
      if (p != last) ++fm.omega_small;
      last = p;
      n /= p;
    }
    return fm;
  }
  for (auto [p, e] : factorize(n)) {
    fm.omega_big += e;
    ++fm.omega_small;
  }
  return fm;
}

std::uint64_t tau_k_squarefree(std::uint64_t d, std::uint64_t k) {
  if (k == 0) throw InvalidArgument("tau_k_squarefree: k must be >= 1");
  const auto fm = big_omega(d);
  if (!fm.squarefree()) throw InvalidArgument("tau_k_squarefree: d = " + std::to_string(d) + " is not squarefree");
  std::uint64_t r = 1;
  for (unsigned i = 0; i < fm.omega_small; ++i) {
    if (r > UINT64_MAX / k) throw RangeError("tau_k_squarefree: result overflows 64 bits");
    r *= k;
  }
  return r;
}

}  // namespace omega_sieve
