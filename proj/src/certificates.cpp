#include "omega_sieve/certificates.hpp"

#include <unistd.h>

#include <bit>
#include <cstring>
#include <fstream>

#include "omega_sieve/errors.hpp"

namespace omega_sieve {

namespace {

constexpr char kCheckpointMagic[8] = {'O', 'M', 'S', 'V', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kCheckpointVersion = 1;

const char* verdict_name(Verdict v) { return v == Verdict::positive ? "positive" : "failed"; }

class BinaryOut {
 public:
  explicit BinaryOut(std::ostream& os) : os_(os) {}
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os_.write(reinterpret_cast<const char*>(b), 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void sum(const CompensatedSum::State& s) {
    f64(s.sum);
    f64(s.comp);
    f64(s.abs_sum);
    u64(s.count);
    f64(s.term_ulps);
  }

 private:
  std::ostream& os_;
};

class BinaryIn {
 public:
  explicit BinaryIn(std::istream& is) : is_(is) {}
  std::uint64_t u64() {
    unsigned char b[8];
    if (!is_.read(reinterpret_cast<char*>(b), 8)) throw IoError("truncated checkpoint");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  CompensatedSum::State sum() {
    CompensatedSum::State s;
    s.sum = f64();
    s.comp = f64();
    s.abs_sum = f64();
    s.count = u64();
    s.term_ulps = f64();
    return s;
  }

 private:
  std::istream& is_;
};

}  // namespace

json to_json(const SieveParams& p) {
  return {{"s", p.s}, {"k", p.effective_k()}, {"r", p.r}, {"deltas", p.delta_set}, {"margin", p.margin}};
}

SieveParams sieve_params_from_json(const json& j) {
  SieveParams p;
  p.s = j.at("s").get<double>();
  p.k = j.at("k").get<double>();
  p.r = j.at("r").get<unsigned>();
  p.delta_set = j.at("deltas").get<std::vector<double>>();
  p.margin = j.at("margin").get<double>();
  return p;
}

json to_json(const IntervalCertificate& c) {
  json j = {{"q_lo", c.q_lo},
            {"q_hi", c.q_hi},
            {"delta", c.delta_used},
            {"log_main", c.log_main},
            {"log_remainder", c.log_remainder},
            {"margin", c.threshold},
            {"verdict", verdict_name(c.verdict)}};
  if (!c.attempts.empty()) {
    json attempts = json::array();
    for (const auto& a : c.attempts)
      attempts.push_back({{"delta", a.delta}, {"log_remainder", a.log_remainder}, {"slack", a.slack}});
    j["attempts"] = attempts;
  }
  return j;
}

json to_json(const Case2Summary& s, const SieveParams& p, double q_max) {
  return {{"summary",
           {{"intervals", s.intervals},
            {"failures", s.failures},
            {"worst_margin", s.worst_margin},
            {"q_end", s.q_end},
            {"primes", s.primes},
            {"complete", s.complete},
            {"q_max", q_max},
            {"params", to_json(p)}}}};
}

namespace {
json case_json(const KCase& c) {
  return {{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"witness_w", c.witness_w},
          {"witness_z", c.witness_z}, {"holds", c.holds}};
}
}  // namespace

json to_json(const KReport& r) {
  return {{"case1", case_json(r.case1)},
          {"case1_budget", r.case1_budget},
          {"tail_286", r.tail_286},
          {"case2", case_json(r.case2)},
          {"case3", case_json(r.case3)},
          {"case4", case_json(r.case4)},
          {"K", r.K},
          {"holds", r.holds()}};
}

json to_json(const ConstantsReport& r) {
  return {{"v_lower",
           {{"constant_rederived", r.v_constant_rederived},
            {"tail_3", r.tail_3},
            {"tail_chain", r.tail_chain},
            {"holds", r.v_constant_holds},
            {"note", r.v_note}}},
          {"remainder",
           {{"at_alpha_0.457", r.remainder_at_fixed_alpha},
            {"alpha_opt", r.alpha_opt},
            {"at_alpha_opt", r.remainder_at_alpha_opt},
            {"exp_constant_rederived", r.exp_constant_rederived},
            {"holds", r.remainder_holds}}},
          {"sieve_factor",
           {{"k", r.k}, {"F", r.sieve_factor}, {"min_level", r.min_level}, {"holds", r.sieve_factor_holds}}},
          {"holds", r.holds()}};
}

json to_json(const Case3Result& r) {
  return {{"holds", r.holds},
          {"lhs_log", r.lhs_log},
          {"rhs_log", r.rhs_log},
          {"difference", r.difference()},
          {"lhs_constant_rederived", r.lhs_constant_rederived},
          {"rhs_constant_rederived", r.rhs_constant_rederived},
          {"exponent", r.exponent},
          {"constants_hold", r.constants_hold}};
}

json to_json(const ScanReport& r) {
  json hist = json::object();
  for (auto [k, v] : r.histogram) hist[std::to_string(k)] = v;
  return {{"range", {r.lo, r.hi}},
          {"target", r.target},
          {"checked", r.checked},
          {"failures", r.failures},
          {"max_min_omega", r.max_min_omega},
          {"argmax", r.argmax},
          {"histogram", hist},
          {"primegap_hits", r.primegap_hits}};
}

json to_json(const DecompositionWitness& w) {
  return {{"N", w.N},
          {"a", w.a},
          {"b", w.b},
          {"omega_ab", w.omega_ab},
          {"method", w.method == WitnessMethod::brute ? "brute" : "primegap"}};
}

json to_json(const PrimeGap& g, std::uint64_t limit) {
  return {{"limit", limit}, {"gap", g.gap}, {"at", g.at}, {"within_1476", g.gap <= kMaxGapBound}};
}

// ---------------------------------------------------------------------------

CertificateWriter::CertificateWriter(const std::filesystem::path& path, std::uint64_t offset) : path_(path) {
  std::error_code ec;
  if (offset == 0) {
    file_ = std::fopen(path.c_str(), "wb");
  } else {
    if (std::filesystem::file_size(path, ec) < offset || ec)
      throw IoError("certificate file " + path.string() + " is shorter than its checkpoint offset");
    std::filesystem::resize_file(path, offset, ec);
    if (ec) throw IoError("cannot truncate " + path.string() + ": " + ec.message());
    file_ = std::fopen(path.c_str(), "ab");
  }
  if (file_ == nullptr) throw IoError("cannot open certificate file " + path.string());
  offset_ = offset;
}

CertificateWriter::~CertificateWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

void CertificateWriter::write(const json& line) {
  const std::string s = line.dump() + "\n";
  if (std::fwrite(s.data(), 1, s.size(), file_) != s.size() || std::fflush(file_) != 0)
    throw IoError("write to " + path_.string() + " failed");
  offset_ += s.size();
}

void CertificateWriter::sync() {
  if (std::fflush(file_) != 0 || ::fsync(::fileno(file_)) != 0) throw IoError("fsync of " + path_.string() + " failed");
}

void save_checkpoint(const std::filesystem::path& path, const RunCheckpoint& ckpt) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write checkpoint " + tmp.string());
    os.write(kCheckpointMagic, 8);
    BinaryOut out(os);
    out.u64(kCheckpointVersion);
    out.f64(ckpt.params.s);
    out.f64(ckpt.params.effective_k());
    out.u64(ckpt.params.r);
    out.f64(ckpt.params.margin);
    out.f64(ckpt.q_max);
    out.u64(ckpt.params.delta_set.size());
    for (double d : ckpt.params.delta_set) out.f64(d);
    out.u64(ckpt.output_offset);
    const Case2State& st = ckpt.state;
    out.u64(st.position);
    out.u64(st.prime_index);
    out.u64(st.q_lo);
    out.u64(st.next_index);
    out.u64(st.intervals);
    out.u64(st.failures);
    out.f64(st.worst_excess);
    out.u64(st.any_positive ? 1 : 0);
    out.sum(st.log_v);
    for (const auto& r : st.rankin) out.sum(r);
    os.flush();
    if (!os) throw IoError("short write to checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot install checkpoint " + path.string() + ": " + ec.message());
}

std::optional<RunCheckpoint> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw IoError("not a checkpoint file: " + path.string());
  BinaryIn in(is);
  if (in.u64() != kCheckpointVersion) throw IoError("unsupported checkpoint version in " + path.string());
  RunCheckpoint c;
  c.params.s = in.f64();
  c.params.k = in.f64();
  c.params.r = static_cast<unsigned>(in.u64());
  c.params.margin = in.f64();
  c.q_max = in.f64();
  const std::uint64_t nd = in.u64();
  if (nd > 64) throw IoError("corrupt checkpoint " + path.string());
  c.params.delta_set.resize(nd);
  for (auto& d : c.params.delta_set) d = in.f64();
  c.output_offset = in.u64();
  Case2State& st = c.state;
  st.position = in.u64();
  st.prime_index = in.u64();
  st.q_lo = in.u64();
  st.next_index = in.u64();
  st.intervals = in.u64();
  st.failures = in.u64();
  st.worst_excess = in.f64();
  st.any_positive = in.u64() != 0;
  st.log_v = in.sum();
  st.rankin.resize(nd);
  for (auto& r : st.rankin) r = in.sum();
  return c;
}

bool same_run(const SieveParams& a, double qa, const SieveParams& b, double qb) {
  auto eq = [](double x, double y) { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
  if (!eq(a.s, b.s) || !eq(a.effective_k(), b.effective_k()) || a.r != b.r || !eq(a.margin, b.margin) || !eq(qa, qb))
    return false;
  if (a.delta_set.size() != b.delta_set.size()) return false;
  for (std::size_t i = 0; i < a.delta_set.size(); ++i)
    if (!eq(a.delta_set[i], b.delta_set[i])) return false;
  return true;
}

RecheckResult recheck_certificates(const std::filesystem::path& path) {
  RecheckResult res;
  std::ifstream is(path);
  if (!is) {
    res.problems.push_back("cannot open " + path.string());
    return res;
  }
  std::string line;
  std::uint64_t expected_lo = 2;
  std::optional<json> summary;
  std::uint64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      res.problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
      continue;
    }
    if (summary) {
      res.problems.push_back("line " + std::to_string(line_no) + ": data after summary");
      continue;
    }
    if (j.contains("summary")) {
      summary = j["summary"];
      continue;
    }
    const auto q_lo = j.at("q_lo").get<std::uint64_t>();
    const auto q_hi = j.at("q_hi").get<std::uint64_t>();
    const double diff = j.at("log_main").get<double>() - j.at("log_remainder").get<double>();
    const bool positive = diff > j.at("margin").get<double>();
    const bool stored = j.at("verdict").get<std::string>() == "positive";
    if (positive != stored)
      res.problems.push_back("interval (" + std::to_string(q_lo) + ", " + std::to_string(q_hi) +
                             "]: stored verdict disagrees with stored log values");
    if (q_lo != expected_lo)
      res.problems.push_back("interval starting at " + std::to_string(q_lo) + " does not continue from " +
                             std::to_string(expected_lo));
    if (q_hi <= q_lo) res.problems.push_back("empty interval at " + std::to_string(q_lo));
    expected_lo = q_hi;
    ++res.intervals;
    if (!positive) ++res.failures;
  }
  if (!summary) {
    res.problems.push_back("missing summary line");
  } else {
    if ((*summary).at("intervals").get<std::uint64_t>() != res.intervals)
      res.problems.push_back("summary interval count does not match");
    if ((*summary).at("failures").get<std::uint64_t>() != res.failures)
      res.problems.push_back("summary failure count does not match");
    if (!(*summary).at("complete").get<bool>()) res.problems.push_back("run marked incomplete");
    const auto q_end = (*summary).at("q_end").get<std::uint64_t>();
    if (res.intervals > 0 && expected_lo != q_end) res.problems.push_back("last interval does not end at q_end");
  }
  res.ok = res.problems.empty() && res.failures == 0;
  return res;
}

}  // namespace omega_sieve
