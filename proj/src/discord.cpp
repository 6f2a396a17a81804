#include "qwitness/discord.hpp"

#include <cmath>
#include <string>

namespace qwitness {

BipartiteState::BipartiteState(DensityOperator rho, Index d_a, Index d_b)
    : rho_(std::move(rho)), d_a_(d_a), d_b_(d_b) {
  if (d_a < 1 || d_b < 1 || rho_.dim() != d_a * d_b) {
    throw DimensionError("BipartiteState: dimension " + std::to_string(rho_.dim()) +
                         " is not " + std::to_string(d_a) + "*" + std::to_string(d_b));
  }
}

DensityOperator BipartiteState::reduced_b() const {
  return make_density(linalg::partial_trace(rho_.matrix(), d_a_, d_b_, linalg::Subsystem::B));
}

LocalOperation LocalOperation::make(std::vector<ComplexMatrix> kraus, std::string label) {
  if (kraus.empty()) throw DimensionError("LocalOperation: no Kraus operators");
  const Index d = kraus.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : kraus) {
    linalg::require_square(k, "LocalOperation");
    if (k.rows() != d) throw DimensionError("LocalOperation: Kraus operators differ in size");
    if (!k.allFinite()) throw InvalidInput("LocalOperation: non-finite Kraus entry");
    sum += k.adjoint() * k;
  }
  const double top = linalg::hermitian_eigen(sum).eigenvalues(0);
  if (top > 1.0 + 1e-10) {
    throw InvalidInput("LocalOperation: sum K^+K exceeds identity (max eigenvalue " +
                       std::to_string(top) + ")");
  }
  return LocalOperation{std::move(kraus), std::move(label)};
}

LocalOperation LocalOperation::projector(const ComplexVector& v, std::string label) {
  const ComplexVector u = PureState::normalized(v).amplitudes();
  return make({u * u.adjoint()}, std::move(label));
}

std::vector<LocalOperation> projective_measurement(const ComplexMatrix& basis,
                                                   const std::string& label) {
  linalg::require_square(basis, "projective_measurement");
  const Index d = basis.rows();
  if ((basis.adjoint() * basis - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidInput("projective_measurement: basis is not orthonormal");
  }
  std::vector<LocalOperation> ops;
  for (Index k = 0; k < d; ++k) {
    ops.push_back(LocalOperation::projector(basis.col(k), label + ":" + std::to_string(k)));
  }
  return ops;
}

ComplexMatrix qubit_basis(QubitBasis b) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(2, 2);
  switch (b) {
    case QubitBasis::Z:
      m << 1.0, 0.0, 0.0, 1.0;
      break;
    case QubitBasis::X:
      m << h, h, h, -h;
      break;
    case QubitBasis::Y:
      m << h, h, Complex(0, h), Complex(0, -h);
      break;
  }
  return m;
}

ConditionalState conditional_state(const BipartiteState& rho, const LocalOperation& op,
                                   double null_tol) {
  if (op.dim() != rho.dim_a()) {
    throw DimensionError("conditional_state: operation acts on dimension " +
                         std::to_string(op.dim()) + ", A has " + std::to_string(rho.dim_a()));
  }
  const Index db = rho.dim_b();
  const ComplexMatrix id_b = ComplexMatrix::Identity(db, db);
  ComplexMatrix post = ComplexMatrix::Zero(rho.joint().dim(), rho.joint().dim());
  for (const auto& k : op.kraus) {
    const ComplexMatrix lifted = linalg::tensor(k, id_b);
    post += lifted * rho.joint().matrix() * lifted.adjoint();
  }
  const ComplexMatrix reduced =
      linalg::partial_trace(post, rho.dim_a(), db, linalg::Subsystem::B);
  ConditionalState out;
  out.probability = reduced.trace().real();
  if (out.probability > null_tol) out.state = make_density(reduced / out.probability);
  return out;
}

ConditionalEnsemble commutation_scan(const BipartiteState& rho,
                                     std::span<const LocalOperation> ops,
                                     const WitnessTolerances& tol, double null_tol) {
  ConditionalEnsemble e;
  for (const auto& op : ops) {
    ConditionalState c = conditional_state(rho, op, null_tol);
    if (!c.state) continue;
    e.labels.push_back(op.label);
    e.probabilities.push_back(c.probability);
    e.states.push_back(std::move(*c.state));
  }
  const auto n = static_cast<Index>(e.states.size());
  e.commutator_norms = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double c = linalg::commutator(e.states[static_cast<std::size_t>(i)].matrix(),
                                          e.states[static_cast<std::size_t>(j)].matrix())
                           .norm();
      e.commutator_norms(i, j) = c;
      e.commutator_norms(j, i) = c;
      e.max_commutator_norm = std::max(e.max_commutator_norm, c);
    }
  }
  e.noncommuting_found = e.max_commutator_norm > tol.commutator;
  return e;
}

ProtocolResult protocol_demo(const BipartiteState& rho, const LocalOperation& op1,
                             const LocalOperation& op2, double target_epsilon,
                             const WitnessTolerances& tol) {
  ProtocolResult out;
  out.first = conditional_state(rho, op1);
  out.second = conditional_state(rho, op2);
  if (!out.first.state) throw NullOutcome("protocol_demo: outcome '" + op1.label + "' has zero probability");
  if (!out.second.state) throw NullOutcome("protocol_demo: outcome '" + op2.label + "' has zero probability");
  const DensityOperator& s1 = *out.first.state;
  const DensityOperator& s2 = *out.second.state;
  out.commutator_norm = linalg::commutator(s1.matrix(), s2.matrix()).norm();
  if (out.commutator_norm <= tol.commutator) {
    out.report = witness_anticommutator(s1, s2, tol);
    return out;
  }
  out.nested = nested_witness(s1, s2, target_epsilon, tol);
  out.report = out.nested->report;
  return out;
}

BipartiteState bell_state() {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return BipartiteState(make_density(phi * phi.adjoint()), 2, 2);
}

BipartiteState werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("werner_state: p must lie in [0, 1]");
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix m = p * phi * phi.adjoint() + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
  return BipartiteState(make_density(m), 2, 2);
}

BipartiteState classical_quantum_state(std::span<const double> probs,
                                       std::span<const DensityOperator> conditionals) {
  if (probs.empty() || probs.size() != conditionals.size()) {
    throw DimensionError("classical_quantum_state: need one conditional per probability");
  }
  const auto da = static_cast<Index>(probs.size());
  const Index db = conditionals.front().dim();
  ComplexMatrix m = ComplexMatrix::Zero(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    const auto& c = conditionals[static_cast<std::size_t>(i)];
    if (c.dim() != db) throw DimensionError("classical_quantum_state: dimension mismatch");
    m.block(i * db, i * db, db, db) = probs[static_cast<std::size_t>(i)] * c.matrix();
  }
  return BipartiteState(make_density(m), da, db);
}

BipartiteState product_state(const DensityOperator& rho_a, const DensityOperator& rho_b) {
  return BipartiteState(make_density(linalg::tensor(rho_a.matrix(), rho_b.matrix())),
                        rho_a.dim(), rho_b.dim());
}

}  // namespace qwitness
