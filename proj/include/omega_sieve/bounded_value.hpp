#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace omega_sieve {

inline constexpr double kUnitRoundoff = 0x1p-52;

enum class Domain { linear, log };

/// A real number with an absolute error budget. Certified comparisons
/// require the intervals [value - slack, value + slack] to be separated.
struct BoundedValue {
  double value = 0.0;
  double slack = 0.0;
  Domain domain = Domain::linear;

  double lower() const { return value - slack; }
  double upper() const { return value + slack; }

  /// Slack for a single correctly-rounded-ish libm evaluation of magnitude |v|.
  static BoundedValue evaluated(double v, Domain d = Domain::linear, double ulps = 2.0) {
    return {v, ulps * kUnitRoundoff * std::fabs(v), d};
  }
  static BoundedValue exact(double v, Domain d = Domain::linear) { return {v, 0.0, d}; }
};

/// Sum of two bounded values; slack grows by both slacks plus one rounding.
inline BoundedValue operator+(const BoundedValue& a, const BoundedValue& b) {
  const double v = a.value + b.value;
  return {v, a.slack + b.slack + kUnitRoundoff * std::fabs(v), a.domain};
}

inline BoundedValue operator-(const BoundedValue& a, const BoundedValue& b) {
  const double v = a.value - b.value;
  return {v, a.slack + b.slack + kUnitRoundoff * std::fabs(v), a.domain};
}

inline BoundedValue operator*(double c, const BoundedValue& a) {
  const double v = c * a.value;
  return {v, std::fabs(c) * a.slack + kUnitRoundoff * std::fabs(v), a.domain};
}

/// a < b with margin: a.value + a.slack < b.value - b.slack.
inline bool certified_less(const BoundedValue& a, const BoundedValue& b) { return a.upper() < b.lower(); }
inline bool certified_less(const BoundedValue& a, double b) { return a.upper() < b; }
inline bool certified_less(double a, const BoundedValue& b) { return a < b.lower(); }

/// Neumaier-compensated running sum that also tracks sum |x_i| and the term
/// count, from which the certified slack is derived.
///
/// slack = (count + term_ulps) * u * sum|x_i|, covering summation rounding
/// and the per-term evaluation error of the caller's libm calls.
class CompensatedSum {
 public:
  explicit CompensatedSum(double term_ulps = 4.0) : term_ulps_(term_ulps) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_sum_ += std::fabs(x);
    ++count_;
  }

  /// Merges a partial sum accumulated elsewhere (e.g. one chunk).
  void merge(const CompensatedSum& other) {
    const double abs_before = abs_sum_;
    const std::uint64_t count_before = count_;
    add(other.sum_);
    comp_ += other.comp_;
    abs_sum_ = abs_before + other.abs_sum_;
    count_ = count_before + other.count_ + 1;
  }

  double value() const { return sum_ + comp_; }
  double slack() const {
    return (static_cast<double>(count_) + term_ulps_) * kUnitRoundoff * abs_sum_;
  }
  BoundedValue bounded(Domain d = Domain::linear) const { return {value(), slack(), d}; }

  std::uint64_t count() const { return count_; }
  double abs_sum() const { return abs_sum_; }

  /// Raw state, for bit-exact checkpoint/resume.
  struct State {
    double sum = 0.0;
    double comp = 0.0;
    double abs_sum = 0.0;
    std::uint64_t count = 0;
    double term_ulps = 4.0;
  };
  State state() const { return {sum_, comp_, abs_sum_, count_, term_ulps_}; }
  static CompensatedSum from_state(const State& s) {
    CompensatedSum c(s.term_ulps);
    c.sum_ = s.sum;
    c.comp_ = s.comp;
    c.abs_sum_ = s.abs_sum;
    c.count_ = s.count;
    return c;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_sum_ = 0.0;
  std::uint64_t count_ = 0;
  double term_ulps_;
};

}  // namespace omega_sieve
