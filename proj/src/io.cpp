#include "qwitness/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qwitness::io {

namespace {

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("expected a complex number as [re, im]");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidInput("non-finite complex entry");
  }
  return z;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) throw InvalidInput("matrix: missing \"entries\"");
  const Json& rows = j.at("entries");
  if (!rows.is_array() || rows.empty()) throw InvalidInput("matrix: \"entries\" must be a non-empty array");
  const auto d = static_cast<Index>(rows.size());
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer() || j.at("dim").get<Index>() != d) {
      throw InvalidInput("matrix: \"dim\" does not match the number of rows");
    }
  }
  ComplexMatrix m(d, d);
  for (Index i = 0; i < d; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      throw InvalidInput("matrix: row " + std::to_string(i) + " makes the matrix non-square");
    }
    for (Index k = 0; k < d; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("vector: expected a non-empty array");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json state_to_json(const DensityOperator& rho, const std::string& label) {
  Json j = matrix_to_json(rho.matrix());
  if (!label.empty()) j["label"] = label;
  return j;
}

LabeledState state_from_json(const Json& j) {
  LabeledState s{make_density(matrix_from_json(j)), {}};
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw InvalidInput("state: \"label\" must be a string");
    s.label = j.at("label").get<std::string>();
  }
  return s;
}

Json pure_to_json(const PureState& psi) {
  return Json{{"dim", psi.dim()}, {"amplitudes", vector_to_json(psi.amplitudes())}};
}

PureState pure_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("pure state: expected an object");
  const char* key = j.contains("amplitudes") ? "amplitudes" : "witness_vector";
  if (!j.contains(key)) throw InvalidInput("pure state: missing \"amplitudes\"");
  ComplexVector v = vector_from_json(j.at(key));
  if (j.contains("dim") && j.at("dim").is_number_integer() &&
      j.at("dim").get<Index>() != v.size()) {
    throw InvalidInput("pure state: \"dim\" does not match the amplitudes");
  }
  // Files carry 17 significant digits, so renormalize rather than demand 1e-12.
  if (std::abs(v.norm() - 1.0) > 1e-9) throw InvalidInput("pure state: amplitudes are not normalized");
  return PureState::normalized(std::move(v));
}

Json report_to_json(const WitnessReport& r, const WitnessTolerances& tol,
                    std::optional<std::uint64_t> seed) {
  Json j;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["trace"] = r.anticommutator_trace;
  j["purity_criterion"] = r.purity_criterion ? Json(*r.purity_criterion) : Json(nullptr);
  j["verdict"] = std::string(to_string(r.verdict));
  j["witness_vector"] = vector_to_json(r.witness_vector.amplitudes());
  j["frobenius_norm"] = r.anticommutator_norm;
  j["tolerances"] = Json{{"witness", tol.witness},
                         {"null", tol.null},
                         {"commutator", tol.commutator},
                         {"overlap_boundary", tol.overlap_boundary}};
  if (seed) j["seed"] = *seed;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump_line(const Json& j) { return j.dump(); }

}  // namespace qwitness::io
