#pragma once

// Positivity tests for anticommutators of quantum states, purity amplification, and the
// near-pure / boundary / degenerate analyses that decide when a negative anticommutator
// eigenvalue can be exhibited.

#include <cstdint>
#include <optional>
#include <string_view>

#include "qwitness/states.hpp"

namespace qwitness {

struct WitnessTolerances {
  double witness = 1e-10;     // min eigenvalue below -witness => nonpositive
  double null = 1e-10;        // ||{rho1,rho2}||_F at or below => null anticommutator
  double commutator = 1e-10;  // ||[rho1,rho2]||_F at or below => commuting
  double overlap_boundary = 1e-6;  // |f| within this of 0 or 1 => boundary regime
  std::uint64_t plan_cap = 1'000'000;
  StateTolerances state{};
};

enum class Verdict { NonpositiveWitnessed, Positive, NullAnticommutator };

std::string_view to_string(Verdict v);

struct WitnessReport {
  double min_eigenvalue = 0;
  PureState witness_vector;  // eigenvector of min_eigenvalue
  std::optional<double> purity_criterion;  // tr[(X / tr X)^2], absent when tr X ~ 0
  double anticommutator_trace = 0;
  double anticommutator_norm = 0;  // Frobenius
  Verdict verdict = Verdict::Positive;
  RealVector eigenvalues;  // of the anticommutator, descending
};

/// Eigen-analysis of an already-formed Hermitian operator X = {rho1, rho2}.
WitnessReport analyze_anticommutator(const ComplexMatrix& x, const WitnessTolerances& tol = {});

WitnessReport witness_anticommutator(const DensityOperator& rho1, const DensityOperator& rho2,
                                     const WitnessTolerances& tol = {});

/// |x|^2 + |x'|^2 <= 1 + (x.x')^2, sufficient for a positive qubit anticommutator.
bool qubit_bloch_condition(const BlochVector& b1, const BlochVector& b2);

struct PureMixedResult {
  WitnessReport report;
  /// Closed-form purity of the normalized anticommutator, from the overlaps of psi with
  /// rho2's eigenbasis. Absent when the anticommutator trace vanishes.
  std::optional<double> closed_form_purity;
  double commutator_norm = 0;
};

/// Closed-form tr[rho12^2] for rho1 = |psi><psi|:
///   ((sum l_i |f_i|^2)^2 + sum l_i^2 |f_i|^2) / (2 (sum l_i |f_i|^2)^2),  f_i = <psi|phi_i>.
std::optional<double> closed_form_purity(const PureState& psi, const DensityOperator& rho2,
                                         double null_tol = 1e-10);

/// Pure-vs-mixed test. Cross-checks the closed form against the direct eigen purity and
/// throws AgreementError if they differ by more than 1e-10 (relative above 1).
PureMixedResult pure_mixed_test(const PureState& psi, const DensityOperator& rho2,
                                const WitnessTolerances& tol = {});

/// rho^n / tr[rho^n], evaluated on the spectrum.
DensityOperator amplify(const DensityOperator& rho, std::uint64_t n);

/// 1 - l_max^n / sum_j l_j^n for a descending eigenvalue vector.
double amplified_epsilon(const RealVector& eigenvalues, std::uint64_t n);

struct AmplificationPlan {
  std::uint64_t n = 1;
  double achieved_epsilon = 0;
  double requested_epsilon = 0;
  bool degenerate = false;  // top eigenvalue degenerate; n is meaningless
  bool capped = false;      // target not reached within the iteration cap
};

/// Smallest n with amplified_epsilon(n) <= target.
AmplificationPlan plan_amplification(const DensityOperator& rho, double target_epsilon,
                                     const WitnessTolerances& tol = {});

struct OverlapData {
  Complex f;      // <psi1|psi2>
  double g1 = 0;  // <psi2|eta1|psi2>
  double g2 = 0;  // <psi1|eta2|psi1>
  double eps1 = 0;
  double eps2 = 0;

  double abs_f() const { return std::abs(f); }
  double phase() const { return std::arg(f); }

  static OverlapData from(const PureDecomposition& d1, const PureDecomposition& d2);
};

/// eps1 g1 + eps2 g2 < (1 - |f|^2) / 2: sufficient for a nonpositive anticommutator of two
/// near-pure states. Throws BoundaryError when |f| is within tol of 0 or 1.
bool near_pure_condition(const OverlapData& o, double boundary_tol = 1e-6);

/// First-order purity of the normalized anticommutator of two near-pure states:
///   ((1-2e1-2e2)(1+|f|^2) + 2e1g1 + 2e2g2) / (2[(1-2e1-2e2)|f|^2 + 2e1g1 + 2e2g2]).
/// Throws BoundaryError like near_pure_condition, DegenerateDenominator when the
/// denominator is at or below 1e-14.
double first_order_purity(const OverlapData& o, double boundary_tol = 1e-6);

struct NestedResult {
  WitnessReport report;  // on {rho1, rho2} after amplification
  AmplificationPlan plan1;
  AmplificationPlan plan2;
  OverlapData overlap;
  bool condition_met = false;
  double condition_lhs = 0;  // eps1 g1 + eps2 g2
  double condition_rhs = 0;  // (1 - |f|^2) / 2
  int tightenings = 0;       // target halvings applied
};

struct NestedOptions {
  /// Halve the target and replan while the near-pure condition fails.
  bool tighten = true;
  int max_tightenings = 60;
};

/// Purifies sigma1, sigma2 by spectral powers (sigma^m / tr, sigma^n / tr) until the
/// near-pure condition holds, then tests the anticommutator of the purified pair.
/// Throws CommutingInputs, DegenerateSpectrum, ConditionUnreachable (|f| on a boundary).
NestedResult nested_witness(const DensityOperator& sigma1, const DensityOperator& sigma2,
                            double target_epsilon, const WitnessTolerances& tol = {},
                            const NestedOptions& opts = {});

/// Second-order analysis for nearly orthogonal top eigenvectors (|f| ~ 0).
struct OrthogonalAnalysis {
  double g1 = 0;
  double g2 = 0;
  double var1 = 0;  // <psi2|eta1^2|psi2> - g1^2
  double var2 = 0;  // <psi1|eta2^2|psi1> - g2^2
  double lhs = 0;   // 2 e1^2 var1 + 2 e2^2 var2 - 8 e1 e2 g1 g2
  bool verdict = false;  // lhs > 0
  /// Admissible eps2/eps1 upper bound when var1 var2 <= 4 g1^2 g2^2.
  std::optional<double> ratio_bound;
};

/// Throws PreconditionError unless |<psi1|psi2>| <= boundary_tol.
OrthogonalAnalysis orthogonal_limit_analysis(const PureDecomposition& d1,
                                             const PureDecomposition& d2,
                                             double boundary_tol = 1e-6);

/// tr[X^2] - (tr X)^2 for X = {rho1, rho2} with parallel top eigenvectors (|f| ~ 1).
/// Throws PreconditionError unless |f| >= 1 - boundary_tol and eta1|psi2>, eta2|psi1> ~ 0.
double parallel_limit_excess(const PureDecomposition& d1, const PureDecomposition& d2,
                             double boundary_tol = 1e-6);

enum class DegenerateVerdict { PositiveWitnessable, NegativeInconclusive, Undetermined };

std::string_view to_string(DegenerateVerdict v);

struct DegenerateAnalysis {
  double bracket = 0;  // tr[(P1P2)^2] + tr[P1P2] - 2 tr[P1P2]^2
  double leading = 0;  // 2 (1 - 2e1 - 2e2) bracket / (d1^2 d2^2)
  bool commuting = false;
  DegenerateVerdict verdict = DegenerateVerdict::Undetermined;
  /// Direct min eigenvalue of {rho1, rho2}; filled for NegativeInconclusive.
  std::optional<double> direct_min_eigenvalue;
};

/// Leading purity excess when the top eigenvalues are d1- and d2-fold degenerate:
/// rho_i = (1 - e_i) P_i / d_i + e_i eta_i. For the direct check eta_i defaults to the
/// maximally mixed state on the complement of P_i (dropped when P_i is full rank).
/// Throws ProjectorError when P_i is not a rank-d_i orthogonal projector.
DegenerateAnalysis degenerate_projector_analysis(
    const ComplexMatrix& p1, Index d1, const ComplexMatrix& p2, Index d2, double eps1,
    double eps2, const std::optional<DensityOperator>& eta1 = std::nullopt,
    const std::optional<DensityOperator>& eta2 = std::nullopt,
    const WitnessTolerances& tol = {});

}  // namespace qwitness
