#pragma once

// JSON formats.
//   matrix: {"dim": d, "entries": [[[re, im], ...], ...]}   (row-major)
//   state:  matrix plus optional "label"
//   pure:   {"dim": d, "amplitudes": [[re, im], ...]}      ("witness_vector" also accepted)

#include <optional>
#include <string>

#include "json.hpp"
#include "qwitness/witness.hpp"

namespace qwitness::io {

using Json = nlohmann::json;

struct LabeledState {
  DensityOperator state;
  std::string label;
};

Json complex_to_json(Complex z);
Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);

/// Throws InvalidInput for malformed, non-square or non-finite input.
ComplexMatrix matrix_from_json(const Json& j);
ComplexVector vector_from_json(const Json& j);

Json state_to_json(const DensityOperator& rho, const std::string& label = {});
LabeledState state_from_json(const Json& j);
Json pure_to_json(const PureState& psi);
PureState pure_from_json(const Json& j);

Json report_to_json(const WitnessReport& r, const WitnessTolerances& tol,
                    std::optional<std::uint64_t> seed = std::nullopt);

/// Reads and parses a file; InvalidInput on I/O or parse failure.
Json read_json_file(const std::string& path);

/// Compact single-line serialization (used for JSONL). Doubles use the shortest
/// representation that round-trips exactly.
std::string dump_line(const Json& j);

}  // namespace qwitness::io
