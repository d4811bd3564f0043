#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "omega_sieve/pipeline.hpp"

namespace omega_sieve {

enum class Command { verify_k, case2, case3, scan, witness, gaps, constants };

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitVerificationFailed = 2,
  kExitIncomplete = 3,
};

struct RunConfig {
  Command command = Command::constants;
  SieveParams params;
  double q_max = static_cast<double>(kDefaultFinalCheckpoint);
  std::uint64_t lo = 2;
  std::uint64_t hi = 1'000'000;
  unsigned target = 21;
  std::uint64_t limit = 100'000'000;
  double log10_n = 200.0;
  std::uint64_t m = 1;
  std::uint64_t n_value = 0;  // witness N
  std::string out;
  unsigned threads = 1;
  bool resume = false;
  bool recheck = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "12345", "1e7", "10^7" or "4*10^18" into an integer.
std::uint64_t parse_count(const std::string& text);
/// As parse_count but allows fractional values ("1e10+147" is also accepted).
double parse_real(const std::string& text);

/// Parses argv (argv[0] is the program name). Throws UsageError with a
/// message that includes help text for --help or invalid input.
RunConfig parse_args(const std::vector<std::string>& args);

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Runs the configured verification. Human-readable output goes to `out`,
/// diagnostics to `err`. Returns one of ExitCode.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + dispatch with the exception-to-exit-code mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omega_sieve
