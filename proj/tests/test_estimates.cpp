#include <doctest.h>

#include <cmath>

#include "omega_sieve/errors.hpp"
#include "omega_sieve/estimates.hpp"

using namespace omega_sieve;

TEST_CASE("reciprocal sum examples") {
  const PrimeTable t(1'000'001);
  const BoundedValue s10 = prime_reciprocal_sum(10, SumMode::exact, &t);
  const double exact10 = 1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7;
  CHECK(std::fabs(s10.value - exact10) <= s10.slack + 1e-16);
  CHECK(s10.slack > 0);
  CHECK(prime_reciprocal_sum(1e10, SumMode::analytic_upper).value == doctest::Approx(3.4000).epsilon(1e-4));
  CHECK_THROWS_AS(prime_reciprocal_sum(1e9, SumMode::analytic_upper), RangeError);
  CHECK_THROWS_AS(prime_reciprocal_sum(2e6, SumMode::exact, &t), RangeError);
  CHECK_THROWS_AS(prime_reciprocal_sum(10, SumMode::exact, nullptr), InvalidArgument);
}

TEST_CASE("reciprocal sum to 1e8 matches the pinned value") {
  const PrimeTable t(100'000'001);
  const BoundedValue s = prime_reciprocal_sum(1e8, SumMode::exact, &t);
  CHECK(std::fabs(s.value - 3.1746) < 5e-4);
  CHECK(std::fabs(s.value - 3.17497523) < 1e-8);  // independent numpy sieve
  CHECK(s.slack < 1e-8);
}

TEST_CASE("exact sums are monotone in z") {
  const PrimeTable t(200'001);
  double prev = 0, prev_log = 0;
  for (double z = 2; z <= 200'000; z *= 1.37) {
    const double v = prime_reciprocal_sum(z, SumMode::exact, &t).value;
    const double l = sum_logp_over_p(z, SumMode::exact, &t).value;
    REQUIRE(v >= prev);
    REQUIRE(l >= prev_log);
    prev = v, prev_log = l;
  }
}

TEST_CASE("interval reciprocal bound") {
  const double l286 = std::log(286.0);
  CHECK(interval_reciprocal_bound(286, 286).value == doctest::Approx(2 / (l286 * l286)).epsilon(1e-12));
  CHECK(interval_reciprocal_bound(286, 286).value == doctest::Approx(0.0625).epsilon(1e-3));
  const double expected = 2 * std::log(2.0) + 1 / (4 * l286 * l286) + 1 / (l286 * l286);
  CHECK(interval_reciprocal_bound(286, 286.0 * 286.0).value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(interval_reciprocal_bound(286, 286.0 * 286.0).value == doctest::Approx(1.425369).epsilon(1e-6));
  CHECK_THROWS_AS(interval_reciprocal_bound(285, 1000), RangeError);

  const PrimeTable t(1'000'001);
  const double upto = prime_reciprocal_sum(1'000'000.5, SumMode::exact, &t).value;
  const double below = prime_reciprocal_sum(286, SumMode::exact, &t).value;
  const BoundedValue lhs{2 * (upto - below), 1e-12, Domain::linear};
  CHECK(certified_less(lhs, interval_reciprocal_bound(286, 1e6)));
  for (double w : {286.0, 1000.0, 5000.0, 30000.0})
    for (double z : {w * 2, w * 17, 1e6}) {
      if (z < w || z > 1e6) continue;
      const double s = prime_reciprocal_sum(std::floor(z) + 0.5, SumMode::exact, &t).value -
                       prime_reciprocal_sum(w, SumMode::exact, &t).value;
      CHECK(2 * s < interval_reciprocal_bound(w, z).lower());
    }
}

TEST_CASE("sum of log p / p") {
  const PrimeTable t(1'000'001);
  CHECK(sum_logp_over_p(3, SumMode::exact, &t).value == doctest::Approx(std::log(2.0) / 2).epsilon(1e-15));
  CHECK(sum_logp_over_p(1e10, SumMode::analytic_upper).value == doctest::Approx(23.0259).epsilon(1e-5));
  const BoundedValue m = sum_logp_over_p(1e6, SumMode::exact, &t);
  CHECK(m.value == doctest::Approx(12.48).epsilon(1e-3));
  CHECK(certified_less(m, std::log(1e6)));
  CHECK_THROWS_AS(sum_logp_over_p(100, SumMode::analytic_upper), RangeError);
}

TEST_CASE("tail sums") {
  CHECK(tail_sum_p_pminus2(286).upper() <= 0.073);
  CHECK(tail_sum_p_pminus2(3).upper() <= 0.5357);
  CHECK(tail_sum_p_pminus2(1e6).upper() <= 2e-6);
  CHECK(1.0 / 3 + tail_sum_p_squared(3).upper() < 0.5357);
  CHECK_THROWS_AS(tail_sum_p_pminus2(2), InvalidArgument);

  // Oracle: a longer partial sum must stay below the certified bound, which in turn
  // may exceed it by no more than the tail beyond the internal cutoff.
  const PrimeTable t(10'000'001);
  long double partial = 0;
  for (std::uint64_t p : t)
    if (p >= 286) partial += 1.0L / (static_cast<long double>(p) * (p - 2));
  CHECK(static_cast<double>(partial) < tail_sum_p_pminus2(286).upper());
  CHECK(tail_sum_p_pminus2(286).upper() - static_cast<double>(partial) < 2e-6);
}

TEST_CASE("streamed sums agree with the table and across threads and spans") {
  const PrimeTable t(2'000'001);
  const StreamedSums a = streamed_prime_sums(2e6, 1);
  const StreamedSums b = streamed_prime_sums(2e6, 3, 1 << 16);
  CHECK(a.prime_count == t.size());
  CHECK(std::fabs(a.reciprocal.value - prime_reciprocal_sum(2e6, SumMode::exact, &t).value) <=
        a.reciprocal.slack + prime_reciprocal_sum(2e6, SumMode::exact, &t).slack);
  CHECK(std::fabs(a.log_p_over_p.value - sum_logp_over_p(2e6, SumMode::exact, &t).value) <=
        a.log_p_over_p.slack + sum_logp_over_p(2e6, SumMode::exact, &t).slack);
  CHECK(std::fabs(a.reciprocal.value - b.reciprocal.value) <= a.reciprocal.slack + b.reciprocal.slack);
  CHECK(std::fabs(a.log_v.value - b.log_v.value) <= a.log_v.slack + b.log_v.slack);
  const StreamedSums c = streamed_prime_sums(2e6, 4);
  CHECK(c.reciprocal.value == a.reciprocal.value);
  CHECK(c.log_v.value == a.log_v.value);
}
