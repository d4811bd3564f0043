#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "omega_sieve/bounded_value.hpp"

using namespace omega_sieve;

TEST_CASE("certified comparison respects slack") {
  const BoundedValue a{1.0, 0.1, Domain::linear};
  const BoundedValue b{1.15, 0.1, Domain::linear};
  CHECK_FALSE(certified_less(a, b));
  CHECK(certified_less(a, BoundedValue{1.3, 0.1, Domain::linear}));
  CHECK(certified_less(a, 1.2));
  CHECK_FALSE(certified_less(a, 1.1));
  CHECK(certified_less(0.8, a));
}

TEST_CASE("slack composition is monotone") {
  const BoundedValue a = BoundedValue::evaluated(0.3);
  const BoundedValue b = BoundedValue::evaluated(0.7);
  const BoundedValue s = a + b;
  CHECK(s.slack >= a.slack + b.slack);
  CHECK(s.slack <= a.slack + b.slack + kUnitRoundoff * 1.0 + 1e-30);
  CHECK((a - b).slack >= a.slack + b.slack);
  CHECK((3.0 * a).slack >= 3.0 * a.slack);
}

TEST_CASE("compensated sum encloses the exact sum under any ordering") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(-20, 20);
  std::vector<double> xs(20000);
  for (double& x : xs) x = std::ldexp(1.0, static_cast<int>(mag(rng))) * (rng() % 2 ? 1 : -1) / 3.0;
  long double reference = 0;
  for (double x : xs) reference += x;

  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(xs.begin(), xs.end(), rng);
    CompensatedSum s;
    for (double x : xs) s.add(x);
    REQUIRE(std::fabs(static_cast<long double>(s.value()) - reference) <= s.slack());
    CHECK(s.count() == xs.size());
  }
}

TEST_CASE("merge equals sequential accumulation") {
  CompensatedSum whole, left, right;
  for (int i = 1; i <= 1000; ++i) {
    whole.add(1.0 / i);
    (i <= 400 ? left : right).add(1.0 / i);
  }
  left.merge(right);
  CHECK(left.count() == whole.count() + 1);  // the merge itself is one more rounding step
  CHECK(left.abs_sum() == doctest::Approx(whole.abs_sum()).epsilon(1e-15));
  CHECK(std::fabs(left.value() - whole.value()) <= left.slack() + whole.slack());
}

TEST_CASE("state round trip is exact") {
  CompensatedSum s;
  for (int i = 1; i <= 100; ++i) s.add(std::log1p(1.0 / i));
  const CompensatedSum t = CompensatedSum::from_state(s.state());
  CHECK(t.value() == s.value());
  CHECK(t.slack() == s.slack());
  CHECK(t.count() == s.count());
}
