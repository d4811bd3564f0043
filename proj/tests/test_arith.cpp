#include <doctest.h>

#include <random>

#include "omega_sieve/arith.hpp"
#include "omega_sieve/errors.hpp"

using namespace omega_sieve;

namespace {

unsigned naive_omega(std::uint64_t n) {
  unsigned c = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) n /= d, ++c;
  return c + (n > 1);
}

}  // namespace

TEST_CASE("big omega examples") {
  CHECK(big_omega(1).omega_big == 0);
  CHECK(big_omega(1).omega_small == 0);
  CHECK(big_omega(12).omega_big == 3);
  CHECK(big_omega(12).omega_small == 2);
  CHECK(big_omega(1024).omega_big == 10);
  CHECK_THROWS_AS(big_omega(0), InvalidArgument);
  const SmallestFactorTable spf(100);
  CHECK_THROWS_AS(big_omega(100, &spf), InvalidArgument);
}

TEST_CASE("omega invariants up to 1e5") {
  const SmallestFactorTable spf(100'001);
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const FactorMultiplicity f = big_omega(n, &spf);
    REQUIRE(f.omega_big == naive_omega(n));
    REQUIRE(f.omega_big == big_omega(n).omega_big);
    REQUIRE(f.omega_big >= f.omega_small);
    REQUIRE((f.omega_big == 0) == (n == 1));
    REQUIRE((std::uint64_t{1} << f.omega_big) <= n);
  }
}

TEST_CASE("omega is completely additive") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(1, 3'000'000'000ull);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t a = dist(rng), b = i % 2 ? a * 3 % 1000 + 1 : dist(rng);
    REQUIRE(big_omega(a * b).omega_big == big_omega(a).omega_big + big_omega(b).omega_big);
  }
}

TEST_CASE("Miller-Rabin and factorisation at 64-bit scale") {
  CHECK(is_prime_u64(10'000'000'147ull));
  CHECK_FALSE(is_prime_u64(10'000'000'149ull));
  CHECK(is_prime_u64(18'446'744'073'709'551'557ull));
  CHECK_FALSE(is_prime_u64(3'215'031'751ull));  // strong pseudoprime to 2, 3, 5, 7
  const auto f = factorize(600'851'475'143ull);
  REQUIRE(f.size() == 4);
  CHECK(f[3].first == 6857);
  const std::uint64_t semiprime = 4'294'967'291ull * 4'294'967'279ull;
  const auto g = factorize(semiprime);
  REQUIRE(g.size() == 2);
  CHECK(g[0].first == 4'294'967'279ull);
  CHECK(big_omega(semiprime).omega_big == 2);
}

TEST_CASE("tau_k on squarefree arguments") {
  CHECK(tau_k_squarefree(6, 4) == 16);
  CHECK(tau_k_squarefree(1, 8) == 1);
  CHECK(tau_k_squarefree(30, 8) == 512);
  CHECK_THROWS_AS(tau_k_squarefree(12, 2), InvalidArgument);
  CHECK_THROWS_AS(tau_k_squarefree(6, 0), InvalidArgument);
  CHECK_THROWS_AS(tau_k_squarefree(614889782588491410ull, 1ull << 32), RangeError);

  const std::uint64_t sq[] = {1, 2, 3, 5, 7, 11, 13, 6, 10, 15, 21, 35, 77, 143};
  for (std::uint64_t a : sq)
    for (std::uint64_t b : sq) {
      bool coprime = true;
      for (std::uint64_t x = 2; x <= 13; ++x)
        if (a % x == 0 && b % x == 0) coprime = false;
      if (!coprime) continue;
      for (std::uint64_t k : {2ull, 4ull, 8ull})
        CHECK(tau_k_squarefree(a * b, k) == tau_k_squarefree(a, k) * tau_k_squarefree(b, k));
    }
}
