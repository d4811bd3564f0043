#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "omega_sieve/decomposition.hpp"
#include "omega_sieve/pipeline.hpp"
#include "omega_sieve/sieve_constants.hpp"

namespace omega_sieve {

using json = nlohmann::json;

json to_json(const SieveParams& p);
SieveParams sieve_params_from_json(const json& j);
json to_json(const IntervalCertificate& c);
json to_json(const Case2Summary& s, const SieveParams& p, double q_max);
json to_json(const KReport& r);
json to_json(const ConstantsReport& r);
json to_json(const Case3Result& r);
json to_json(const ScanReport& r);
json to_json(const DecompositionWitness& w);
json to_json(const PrimeGap& g, std::uint64_t limit);

/// Append-only JSON Lines sink. Every line is flushed; sync() additionally
/// fsyncs so that a checkpoint never points past durable data.
class CertificateWriter {
 public:
  /// Opens `path` for appending after truncating it to `offset` bytes
  /// (offset 0 starts a fresh file). Throws IoError.
  CertificateWriter(const std::filesystem::path& path, std::uint64_t offset);
  ~CertificateWriter();
  CertificateWriter(const CertificateWriter&) = delete;
  CertificateWriter& operator=(const CertificateWriter&) = delete;

  void write(const json& line);
  void sync();
  std::uint64_t offset() const { return offset_; }

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
  std::uint64_t offset_ = 0;
};

/// Binary resume point. Layout (little-endian): magic "OMSVCKP1", u32 version,
/// the run fingerprint (s, k, r, margin, q_max, deltas), the certificate file
/// offset, then the Case2State fields including raw compensated-sum states.
struct RunCheckpoint {
  SieveParams params;
  double q_max = 0;
  std::uint64_t output_offset = 0;
  Case2State state;
};

void save_checkpoint(const std::filesystem::path& path, const RunCheckpoint& ckpt);
std::optional<RunCheckpoint> load_checkpoint(const std::filesystem::path& path);

/// True when two parameter sets describe the same run (bitwise on doubles).
bool same_run(const SieveParams& a, double qa, const SieveParams& b, double qb);

struct RecheckResult {
  bool ok = false;
  std::uint64_t intervals = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> problems;
};

/// Re-validates a certificate file from its stored log values: verdicts,
/// interval chaining from 2, and the trailing summary counts.
RecheckResult recheck_certificates(const std::filesystem::path& path);

}  // namespace omega_sieve
