#include "omega_sieve/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "omega_sieve/arith.hpp"
#include "omega_sieve/errors.hpp"
#include "omega_sieve/segment_stream.hpp"
#include "omega_sieve/sieve_constants.hpp"

namespace omega_sieve {

double SieveParams::effective_k() const { return k > 0 ? k : DensityModel::k(); }

void SieveParams::validate() const {
  const double kk = effective_k();
  if (s < 2.0 * kk + 3.0)
    throw PreconditionError("SieveParams: s = " + std::to_string(s) + " below 2k + 3 = " + std::to_string(2 * kk + 3));
  if (r == 0) throw InvalidArgument("SieveParams: r must be positive");
  if (delta_set.empty()) throw InvalidArgument("SieveParams: delta set is empty");
  for (double d : delta_set)
    if (!(d > 0.0 && d < 1.0)) throw InvalidArgument("SieveParams: delta " + std::to_string(d) + " outside (0, 1)");
  if (!(margin >= 0.0)) throw InvalidArgument("SieveParams: margin must be nonnegative");
}

std::uint64_t next_checkpoint_index(std::uint64_t i) {
  if (i < 100) return i + 1;
  std::uint64_t step = 1;  // 10^(l-1)
  for (std::uint64_t t = i; t >= 100; t /= 10) step *= 10;
  return i + step;
}

std::uint64_t checkpoint_schedule(std::uint64_t q, const PrimeTable& table) {
  if (q < 2 || !table.contains(q)) throw InvalidArgument("checkpoint_schedule: q = " + std::to_string(q) + " is not prime");
  return table.select(next_checkpoint_index(table.count(q)));
}

IntervalCertificate interval_lower_bound(std::uint64_t q_lo, std::uint64_t q_hi, double delta,
                                         const SieveParams& params, const BoundedValue& log_v,
                                         const BoundedValue& rankin_sum) {
  const double k = params.effective_k();
  const double f = main_sieve_factor(params.s, k);
  if (!(f > 0))
    throw PreconditionError("interval_lower_bound: sieve factor F(s, k) = " + std::to_string(f) +
                            " is not positive; the bound is vacuous");
  if (q_lo >= q_hi) throw InvalidArgument("interval_lower_bound: requires q_lo < q_hi");

  const double r_log_lo = static_cast<double>(params.r) * std::log(static_cast<double>(q_lo));
  // log(q_lo^r - 1)
  const auto log_x = BoundedValue::evaluated(r_log_lo + std::log1p(-std::exp(-r_log_lo)), Domain::log, 4);
  const auto log_f = BoundedValue::evaluated(std::log(f), Domain::log, 16);
  const BoundedValue log_main = log_x + log_v + log_f;

  const auto level = BoundedValue::evaluated(
      std::numbers::ln2 + delta * params.s * std::log(static_cast<double>(q_hi)), Domain::log, 4);
  const BoundedValue log_rem = level + rankin_sum;

  IntervalCertificate c;
  c.q_lo = q_lo;
  c.q_hi = q_hi;
  c.delta_used = delta;
  c.log_main = log_main.value;
  c.log_remainder = log_rem.value;
  c.slack = log_main.slack + log_rem.slack;
  c.threshold = params.margin + c.slack;
  c.verdict = c.log_main - c.log_remainder > c.threshold ? Verdict::positive : Verdict::failed;
  return c;
}

std::optional<std::uint64_t> final_checkpoint(double q_max) {
  if (!(q_max >= 3)) return std::nullopt;
  auto q = static_cast<std::uint64_t>(std::ceil(q_max));
  while (!is_prime_u64(q)) ++q;
  return q;
}

namespace {

struct SegmentTerms {
  std::vector<double> log_v;
  std::vector<double> rankin;  // prime-major, delta-minor
};

}  // namespace

Case2Summary run_case2(double q_max, const SieveParams& params,
                       const std::function<void(const IntervalCertificate&)>& sink,
                       const Case2Options& options) {
  params.validate();
  const std::size_t nd = params.delta_set.size();
  Case2Summary summary;
  const auto q_end = final_checkpoint(q_max);
  if (!q_end) {
    summary.complete = true;
    return summary;
  }
  summary.q_end = *q_end;

  Case2State st;
  st.log_v = CompensatedSum().state();
  st.rankin.assign(nd, CompensatedSum().state());
  if (options.resume) {
    st = *options.resume;
    if (st.rankin.size() != nd) throw InvalidArgument("run_case2: resume state does not match the delta set");
  }
  CompensatedSum log_v = CompensatedSum::from_state(st.log_v);
  std::vector<CompensatedSum> rankin;
  for (const auto& r : st.rankin) rankin.push_back(CompensatedSum::from_state(r));

  auto snapshot = [&] {
    st.log_v = log_v.state();
    for (std::size_t j = 0; j < nd; ++j) st.rankin[j] = rankin[j].state();
  };
  auto fill_summary = [&] {
    summary.intervals = st.intervals;
    summary.failures = st.failures;
    summary.worst_margin = st.any_positive ? st.worst_excess : 0.0;
    summary.primes = st.prime_index;
  };

  auto emit = [&](std::uint64_t q_hi) {
    IntervalCertificate best;
    bool have_best = false;
    std::vector<DeltaAttempt> attempts;
    const BoundedValue v = log_v.bounded(Domain::log);
    for (std::size_t j = 0; j < nd; ++j) {
      auto c = interval_lower_bound(st.q_lo, q_hi, params.delta_set[j], params, v, rankin[j].bounded(Domain::log));
      attempts.push_back({c.delta_used, c.log_remainder, c.slack});
      if (c.verdict == Verdict::positive) {
        best = c;
        have_best = true;
        break;
      }
      if (!have_best || c.excess() > best.excess()) best = c;
      have_best = true;
    }
    if (best.verdict == Verdict::positive) {
      if (!st.any_positive || best.excess() < st.worst_excess) st.worst_excess = best.excess();
      st.any_positive = true;
    } else {
      best.attempts = std::move(attempts);
      ++st.failures;
    }
    ++st.intervals;
    sink(best);
  };

  const std::uint64_t stop = *q_end + 1;
  std::uint64_t last_saved = st.prime_index;
  bool finished = st.position >= stop;
  const std::vector<double> deltas = params.delta_set;

  stream_segments<SegmentTerms>(
      st.position, stop, options.threads,
      [&deltas, nd](std::uint64_t, std::uint64_t, const std::vector<std::uint64_t>& primes) {
        SegmentTerms t;
        t.log_v.resize(primes.size());
        t.rankin.resize(primes.size() * nd);
        for (std::size_t i = 0; i < primes.size(); ++i) {
          const double lp = std::log(static_cast<double>(primes[i]));
          t.log_v[i] = DensityModel::log_complement(primes[i]);
          for (std::size_t j = 0; j < nd; ++j) t.rankin[i * nd + j] = std::log1p(8.0 * std::exp(-deltas[j] * lp));
        }
        return t;
      },
      [&](std::uint64_t, std::uint64_t hi, const std::vector<std::uint64_t>& primes, SegmentTerms& t) {
        for (std::size_t i = 0; i < primes.size(); ++i) {
          const std::uint64_t p = primes[i];
          const std::uint64_t idx = ++st.prime_index;
          if (idx == st.next_index || p == *q_end) {
            if (st.q_lo != 0) emit(p);
            st.q_lo = p;
            st.next_index = next_checkpoint_index(idx);
          }
          log_v.add(t.log_v[i]);
          for (std::size_t j = 0; j < nd; ++j) rankin[j].add(t.rankin[i * nd + j]);
          if (p == *q_end) {
            finished = true;
            break;
          }
        }
        st.position = hi;
        if (finished) return false;
        if (options.on_checkpoint && st.prime_index - last_saved >= options.checkpoint_every) {
          snapshot();
          options.on_checkpoint(st);
          last_saved = st.prime_index;
        }
        return !(options.stop_after_primes != 0 && st.prime_index >= options.stop_after_primes);
      },
      options.span);

  snapshot();
  fill_summary();
  summary.complete = finished;
  return summary;
}

Case3Result check_case3(double log10_n, const SieveParams& params) {
  if (!(log10_n > 0)) throw InvalidArgument("check_case3: log10 N must be positive");
  Case3Result r;
  const double ln_n = log10_n * std::numbers::ln10;
  const double log_ln = std::log(ln_n);
  const double rr = static_cast<double>(params.r);
  r.exponent = params.s / rr;
  // log(N - 1) = log N + log1p(-1/N)
  r.lhs_log = std::log(r.lhs_constant) + ln_n + std::log1p(-std::exp(-ln_n)) - 2.0 * log_ln;
  r.rhs_log = std::log(r.rhs_constant) - 8.0 * std::log(rr) + r.exponent * ln_n + 8.0 * log_ln;
  const double slack = 16 * kUnitRoundoff * (std::fabs(r.lhs_log) + std::fabs(r.rhs_log) + ln_n);
  r.holds = r.lhs_log - r.rhs_log > slack;

  const double f = main_sieve_factor(params.s, params.effective_k());
  r.lhs_constant_rederived = rr * rr * kVLowerConstant * f;
  r.rhs_constant_rederived = 2.0 * 0.591;
  r.constants_hold = r.lhs_constant_rederived >= r.lhs_constant &&
                     std::fabs(r.rhs_constant_rederived - r.rhs_constant) <= 1e-12 &&
                     remainder_constant(0.457, params.s) <= 0.591;
  return r;
}

}  // namespace omega_sieve
