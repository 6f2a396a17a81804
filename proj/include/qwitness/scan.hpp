#pragma once

// Seeded randomized verification scans. Trial i draws from Rng(seed, i), so records do not
// depend on the number of worker threads; they are merged in trial order.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwitness/witness.hpp"

namespace qwitness {

enum class ScanKind { Theorem1, Theorem3, Bloch, Lemma1, Discord };

/// Accepts theorem1, theorem3, bloch, lemma1, discord; InvalidInput otherwise.
ScanKind parse_scan_kind(const std::string& s);
std::string_view to_string(ScanKind k);

struct ScanConfig {
  ScanKind kind = ScanKind::Theorem1;
  std::uint64_t trials = 1000;
  Index dmin = 2;
  Index dmax = 6;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  WitnessTolerances tol{};
  double target_epsilon = 0.05;  // theorem3
  Index grid = 100;              // bloch: grid x grid points, trials ignored
  bool timing = false;           // adds wall time to the summary (breaks byte identity)
};

struct ScanResult {
  std::vector<nlohmann::json> records;  // one per trial, in trial order
  nlohmann::json summary;
  std::uint64_t counterexamples = 0;
  std::vector<std::string> csv_columns;
};

ScanResult run_scan(const ScanConfig& cfg);

/// One JSON object per line, then the summary line.
void write_jsonl(const ScanResult& r, std::ostream& out);
/// Header plus one row per record over csv_columns.
void write_csv(const ScanResult& r, std::ostream& out);

std::string_view version();

}  // namespace qwitness
