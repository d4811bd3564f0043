#include "omega_sieve/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "omega_sieve/arith.hpp"
#include "omega_sieve/certificates.hpp"
#include "omega_sieve/decomposition.hpp"
#include "omega_sieve/errors.hpp"
#include "omega_sieve/sieve_constants.hpp"

namespace omega_sieve {

namespace {

// expr := term ('+' term)* ; term := factor ('*' factor)* ; factor := number ('^' number)?
class NumberParser {
 public:
  explicit NumberParser(const std::string& s) : s_(s) {}

  long double parse() {
    const long double v = expr();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  long double expr() {
    long double v = term();
    while (peek('+')) v += term();
    return v;
  }
  long double term() {
    long double v = factor();
    while (peek('*')) v *= factor();
    return v;
  }
  long double factor() {
    const long double base = number();
    if (!peek('^')) return base;
    const long double e = number();
    if (e != std::floor(e) || e < 0) fail();
    long double r = 1;
    for (long double i = 0; i < e; ++i) r *= base;
    return r;
  }
  long double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == 'e' || s_[pos_] == 'E' ||
                                ((s_[pos_] == '-') && pos_ > start && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
      ++pos_;
    if (pos_ == start) fail();
    try {
      std::size_t used = 0;
      const long double v = std::stold(s_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) fail();
      return v;
    } catch (const std::logic_error&) {
      fail();
    }
  }
  bool peek(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail() const { throw UsageError("cannot parse number '" + s_ + "'"); }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_real(item));
  if (out.empty()) throw UsageError("--deltas needs at least one value");
  return out;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::verify_k: return "verify-k";
    case Command::case2: return "case2";
    case Command::case3: return "case3";
    case Command::scan: return "scan";
    case Command::witness: return "witness";
    case Command::gaps: return "gaps";
    case Command::constants: return "constants";
  }
  return "?";
}

Command command_from_name(const std::string& s) {
  for (Command c : {Command::verify_k, Command::case2, Command::case3, Command::scan, Command::witness, Command::gaps,
                    Command::constants})
    if (s == command_name(c)) return c;
  throw UsageError("unknown command '" + s + "'");
}

void write_json_output(const RunConfig& cfg, const json& j, std::ostream& out) {
  if (cfg.out.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(cfg.out);
  if (!os || !(os << j.dump(2) << "\n")) throw IoError("cannot write " + cfg.out);
}

int run_verify_k(const RunConfig& cfg, std::ostream& out) {
  const KReport r = verify_K();
  out << std::setprecision(10);
  for (const KCase* c : {&r.case1, &r.case2, &r.case3, &r.case4})
    out << c->name << ": " << c->value << " <= " << c->bound << (c->holds ? "  ok" : "  FAILED") << "\n";
  out << "case1 budget " << r.case1_budget << " <= 0.21, tail(286) " << r.tail_286 << " <= 0.073\n";
  out << "case4 attained at w = " << r.case4.witness_w << ", z -> " << r.case4.witness_z << "+\n";
  out << "K = " << r.K << "\n";
  write_json_output(cfg, to_json(r), out);
  return r.holds() ? kExitOk : kExitVerificationFailed;
}

int run_constants(const RunConfig& cfg, std::ostream& out) {
  const ConstantsReport r = verify_constants(cfg.params.s);
  const Case3Result c3 = check_case3(cfg.log10_n, cfg.params);
  json j = to_json(r);
  j["case3_constants"] = {{"lhs_constant_rederived", c3.lhs_constant_rederived},
                          {"rhs_constant_rederived", c3.rhs_constant_rederived},
                          {"exponent", c3.exponent},
                          {"holds", c3.constants_hold}};
  out << std::setprecision(10);
  out << "V lower constant re-derived: " << r.v_constant_rederived << " (>= 0.2749)\n";
  out << "remainder constant at alpha = 0.457: " << r.remainder_at_fixed_alpha << " (<= 0.591)\n";
  out << "optimal alpha: " << r.alpha_opt << ", constant " << r.remainder_at_alpha_opt << "\n";
  out << "sieve factor F(" << cfg.params.s << ", " << r.k << ") = " << r.sieve_factor << ", sign change at s = "
      << r.min_level << "\n";
  write_json_output(cfg, j, out);
  return r.holds() && c3.constants_hold ? kExitOk : kExitVerificationFailed;
}

int run_case3(const RunConfig& cfg, std::ostream& out) {
  const Case3Result r = check_case3(cfg.log10_n, cfg.params);
  out << std::setprecision(12) << "log10 N = " << cfg.log10_n << ": lhs_log " << r.lhs_log << ", rhs_log "
      << r.rhs_log << (r.holds ? "  holds" : "  fails") << "\n";
  write_json_output(cfg, to_json(r), out);
  return r.holds && r.constants_hold ? kExitOk : kExitVerificationFailed;
}

int run_scan(const RunConfig& cfg, std::ostream& out) {
  const ScanReport r = scan_range(cfg.lo, cfg.hi, cfg.target, cfg.threads);
  out << "checked " << r.checked << " values, max min Omega(ab) = " << r.max_min_omega << " (first at N = " << r.argmax
      << "), failures " << r.failures.size() << "\n";
  write_json_output(cfg, to_json(r), out);
  return r.failures.empty() ? kExitOk : kExitVerificationFailed;
}

int run_witness(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_value < 2) throw UsageError("witness: N must be >= 2");
  DecompositionWitness w;
  if (cfg.n_value <= kDeskBound && cfg.m == 1) {
    const SmallestFactorTable spf(cfg.n_value + 1);
    w = min_omega_decomposition(cfg.n_value, spf);
  } else {
    const PrimeTable table((cfg.n_value - 1) / cfg.m + 1);
    w = primegap_witness(cfg.n_value, cfg.m, cfg.target, table);
  }
  write_json_output(cfg, to_json(w), out);
  return w.omega_ab <= cfg.target ? kExitOk : kExitVerificationFailed;
}

int run_gaps(const RunConfig& cfg, std::ostream& out) {
  const PrimeGap g = max_prime_gap(cfg.limit);
  out << "max gap up to " << cfg.limit << ": " << g.gap << " after " << g.at << "\n";
  write_json_output(cfg, to_json(g, cfg.limit), out);
  return g.gap <= kMaxGapBound ? kExitOk : kExitVerificationFailed;
}

int run_case2_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::filesystem::path path = cfg.out.empty() ? "case2_certificates.jsonl" : cfg.out;
  if (cfg.recheck) {
    const RecheckResult r = recheck_certificates(path);
    for (const auto& p : r.problems) err << "recheck: " << p << "\n";
    out << "rechecked " << r.intervals << " intervals, " << r.failures << " failures\n";
    return r.ok ? kExitOk : kExitVerificationFailed;
  }
  cfg.params.validate();
  const std::filesystem::path ckpt_path = path.string() + ".ckpt";

  Case2Options opts;
  opts.threads = cfg.threads;
  std::uint64_t offset = 0;
  if (cfg.resume) {
    if (auto ck = load_checkpoint(ckpt_path)) {
      if (!same_run(ck->params, ck->q_max, cfg.params, cfg.q_max))
        throw UsageError("--resume: checkpoint " + ckpt_path.string() + " was written with different parameters");
      offset = ck->output_offset;
      opts.resume = ck->state;
      err << "resuming at prime index " << ck->state.prime_index << "\n";
    }
  }
  CertificateWriter writer(path, offset);
  opts.on_checkpoint = [&](const Case2State& st) {
    writer.sync();
    save_checkpoint(ckpt_path, {cfg.params, cfg.q_max, writer.offset(), st});
  };
  const Case2Summary s = run_case2(cfg.q_max, cfg.params, [&](const IntervalCertificate& c) { writer.write(to_json(c)); },
                                   opts);
  if (!s.complete) {
    writer.sync();
    err << "run incomplete after " << s.primes << " primes\n";
    return kExitIncomplete;
  }
  writer.write(to_json(s, cfg.params, cfg.q_max));
  writer.sync();
  std::error_code ec;
  std::filesystem::remove(ckpt_path, ec);
  out << "case2: " << s.intervals << " intervals up to " << s.q_end << ", " << s.failures
      << " failures, worst margin " << std::setprecision(6) << s.worst_margin << "\n";
  return s.failures == 0 ? kExitOk : kExitVerificationFailed;
}

}  // namespace

std::uint64_t parse_count(const std::string& text) {
  const long double v = NumberParser(text).parse();
  if (v < 0 || v != std::floor(v) || v > 1.8e19L) throw UsageError("expected a nonnegative integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& text) { return static_cast<double>(NumberParser(text).parse()); }

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Machine verification of an explicit Selberg lower-bound sieve argument: every N >= 2 is a + b with "
               "Omega(ab) <= 21."};
  app.require_subcommand(1);

  std::string q_max, lo, hi, limit, n_text, deltas, s_text, k_text, margin_text, log10n_text;
  auto add_sieve_flags = [&](CLI::App* sub) {
    sub->add_option("--s", s_text, "level exponent s = log D / log z (default 18.4)");
    sub->add_option("--k", k_text, "combined exponent k (default 2 + log 3)");
    sub->add_option("--r", cfg.params.r, "z = N^(1/r) (default 20)");
    sub->add_option("--deltas", deltas, "comma-separated Rankin exponents (default 0.2,0.8,0.9)");
    sub->add_option("--margin", margin_text, "required log-domain margin (default 1e-6)");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* vk = app.add_subcommand("verify-k", "check the four cases of the dimension constant K = 3");
  add_common(vk);
  auto* c2 = app.add_subcommand("case2", "interval certificates over the prime checkpoint schedule");
  add_common(c2);
  add_sieve_flags(c2);
  c2->add_option("--q-max", q_max, "last sieving level covered (default 10^10+147)");
  c2->add_flag("--resume", cfg.resume, "continue from the checkpoint next to --out");
  c2->add_flag("--recheck", cfg.recheck, "re-validate an existing certificate file");
  auto* c3 = app.add_subcommand("case3", "asymptotic inequality for large N");
  add_common(c3);
  add_sieve_flags(c3);
  c3->add_option("--log10N", log10n_text, "log10 of N (default 200)");
  auto* sc = app.add_subcommand("scan", "exhaustive minimum-Omega decompositions over a range");
  add_common(sc);
  sc->add_option("--lo", lo, "first N (default 2)");
  sc->add_option("--hi", hi, "last N (default 10^6)");
  sc->add_option("--target", cfg.target, "largest acceptable Omega(ab) (default 21)");
  auto* wi = app.add_subcommand("witness", "a decomposition N = a + b with small Omega(ab)");
  add_common(wi);
  wi->add_option("N", n_text, "the integer to decompose")->required();
  wi->add_option("--m", cfg.m, "multiplier for the prime-gap construction (1 or prime)");
  wi->add_option("--target", cfg.target, "K in the prime-gap construction (default 13)");
  wi->add_option("--limit", limit, "unused for witness; accepted for symmetry");
  auto* ga = app.add_subcommand("gaps", "maximal prime gap up to a limit");
  add_common(ga);
  ga->add_option("--limit", limit, "upper limit (default 10^8)");
  auto* co = app.add_subcommand("constants", "scalar constants of the V, remainder and sieve-factor bounds");
  add_common(co);
  add_sieve_flags(co);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }

  const std::string name = app.get_subcommands().front()->get_name();
  cfg.command = command_from_name(name);
  if (cfg.command == Command::witness && wi->count("--target") == 0) cfg.target = 13;
  if (!q_max.empty()) cfg.q_max = parse_real(q_max);
  if (!lo.empty()) cfg.lo = parse_count(lo);
  if (!hi.empty()) cfg.hi = parse_count(hi);
  if (!limit.empty()) cfg.limit = parse_count(limit);
  if (!n_text.empty()) cfg.n_value = parse_count(n_text);
  if (!deltas.empty()) cfg.params.delta_set = parse_deltas(deltas);
  if (!s_text.empty()) cfg.params.s = parse_real(s_text);
  if (!k_text.empty()) cfg.params.k = parse_real(k_text);
  if (!margin_text.empty()) cfg.params.margin = parse_real(margin_text);
  if (!log10n_text.empty()) cfg.log10_n = parse_real(log10n_text);
  if (cfg.resume && cfg.recheck) throw UsageError("--resume and --recheck are mutually exclusive");
  if (cfg.command == Command::scan && cfg.lo < 2) throw UsageError("--lo must be >= 2");
  return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", command_name(c.command)},
          {"params", to_json(c.params)},
          {"q_max", c.q_max},
          {"lo", c.lo},
          {"hi", c.hi},
          {"target", c.target},
          {"limit", c.limit},
          {"log10N", c.log10_n},
          {"m", c.m},
          {"N", c.n_value},
          {"out", c.out},
          {"threads", c.threads},
          {"resume", c.resume},
          {"recheck", c.recheck}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = command_from_name(j.at("command").get<std::string>());
  c.params = sieve_params_from_json(j.at("params"));
  c.q_max = j.at("q_max").get<double>();
  c.lo = j.at("lo").get<std::uint64_t>();
  c.hi = j.at("hi").get<std::uint64_t>();
  c.target = j.at("target").get<unsigned>();
  c.limit = j.at("limit").get<std::uint64_t>();
  c.log10_n = j.at("log10N").get<double>();
  c.m = j.at("m").get<std::uint64_t>();
  c.n_value = j.at("N").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  c.threads = j.at("threads").get<unsigned>();
  c.resume = j.at("resume").get<bool>();
  c.recheck = j.at("recheck").get<bool>();
  return c;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::verify_k: return run_verify_k(config, out);
    case Command::case2: return run_case2_command(config, out, err);
    case Command::case3: return run_case3(config, out);
    case Command::scan: return run_scan(config, out);
    case Command::witness: return run_witness(config, out);
    case Command::gaps: return run_gaps(config, out);
    case Command::constants: return run_constants(config, out);
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(parse_args(args), out, err);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const RangeError& e) {
    err << "out of range: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIncomplete;
  }
}

}  // namespace omega_sieve
