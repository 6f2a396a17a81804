#pragma once

// Bipartite states, local operations on the A side, and the conditional states they
// prepare remotely on B.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwitness/witness.hpp"

namespace qwitness {

class BipartiteState {
 public:
  /// Throws DimensionError unless rho.dim() == d_a * d_b.
  BipartiteState(DensityOperator rho, Index d_a, Index d_b);

  const DensityOperator& joint() const noexcept { return rho_; }
  Index dim_a() const noexcept { return d_a_; }
  Index dim_b() const noexcept { return d_b_; }
  DensityOperator reduced_b() const;

 private:
  DensityOperator rho_;
  Index d_a_;
  Index d_b_;
};

/// Trace-nonincreasing operation on A given by Kraus operators.
struct LocalOperation {
  std::vector<ComplexMatrix> kraus;
  std::string label;

  Index dim() const { return kraus.front().rows(); }

  /// Validates shapes and sum K^+ K <= 1 (within 1e-10).
  static LocalOperation make(std::vector<ComplexMatrix> kraus, std::string label);
  /// The single-outcome operation |v><v|.
  static LocalOperation projector(const ComplexVector& v, std::string label);
};

/// Rank-1 projective measurement onto the columns of a unitary, one operation per outcome.
std::vector<LocalOperation> projective_measurement(const ComplexMatrix& basis,
                                                   const std::string& label);

enum class QubitBasis { Z, X, Y };

/// Columns (|0>,|1>), (|+>,|->) or (|+i>,|-i>).
ComplexMatrix qubit_basis(QubitBasis b);

struct ConditionalState {
  double probability = 0;
  std::optional<DensityOperator> state;  // absent for a null outcome
};

/// tr_A[(Lambda (x) I)(rho_AB)], normalized. Outcomes with probability <= null_tol carry no
/// state.
ConditionalState conditional_state(const BipartiteState& rho, const LocalOperation& op,
                                   double null_tol = 1e-12);

struct ConditionalEnsemble {
  std::vector<std::string> labels;
  std::vector<double> probabilities;
  std::vector<DensityOperator> states;
  Eigen::MatrixXd commutator_norms;  // pairwise ||[rho_B|i, rho_B|j]||_F
  bool noncommuting_found = false;
  double max_commutator_norm = 0;
};

/// Conditional states of every operation with nonzero outcome probability and their
/// pairwise commutator norms.
ConditionalEnsemble commutation_scan(const BipartiteState& rho,
                                     std::span<const LocalOperation> ops,
                                     const WitnessTolerances& tol = {},
                                     double null_tol = 1e-12);

struct ProtocolResult {
  ConditionalState first;
  ConditionalState second;
  double commutator_norm = 0;
  WitnessReport report;
  std::optional<NestedResult> nested;  // present when the conditionals do not commute
};

/// Remote preparation: A applies op1 and op2 (selected outcomes), B tests the anticommutator
/// of the two conditional states, amplifying them first when they are mixed. Commuting
/// conditionals are tested directly. Throws NullOutcome for a zero-probability outcome;
/// witness errors (degenerate spectrum, boundary overlaps) propagate.
ProtocolResult protocol_demo(const BipartiteState& rho, const LocalOperation& op1,
                             const LocalOperation& op2, double target_epsilon = 0.05,
                             const WitnessTolerances& tol = {});

BipartiteState bell_state();
/// p |Phi+><Phi+| + (1 - p) I / 4
BipartiteState werner_state(double p);
/// sum_i p_i |i><i| (x) rho_i on A (dimension = number of terms)
BipartiteState classical_quantum_state(std::span<const double> probs,
                                       std::span<const DensityOperator> conditionals);
BipartiteState product_state(const DensityOperator& rho_a, const DensityOperator& rho_b);

}  // namespace qwitness
