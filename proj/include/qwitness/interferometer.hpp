#pragma once

// Controlled-SHIFT interferometry. Registers are ordered (control, rho_1, ..., rho_l, probe),
// the control qubit being the most significant tensor factor.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qwitness/states.hpp"

namespace qwitness {

inline constexpr Index kDefaultCircuitCap = 2 * 4 * 4 * 4 * 4;

/// Permutation matrix S|i_1, ..., i_l> = |i_l, i_1, ..., i_{l-1}> on l registers of
/// dimension d. Throws CapacityError when d^l > cap.
ComplexMatrix shift_operator(Index d, Index l, Index cap = kDefaultCircuitCap);

/// |0><0| (x) 1 + |1><1| (x) S.
ComplexMatrix controlled_shift(Index d, Index l, Index cap = kDefaultCircuitCap);

struct ShiftTrace {
  Complex shift_side;    // tr[S (rho_1 (x) ... (x) rho_l)], by explicit contraction
  Complex product_side;  // tr[rho_1 rho_2 ... rho_l]
};

/// Evaluates both sides of the SHIFT trace identity. With S cycling registers forward,
/// tr[S (rho_1 (x) ... (x) rho_l)] = tr[rho_l ... rho_1] = conj(tr[rho_1 ... rho_l]);
/// the two agree in real part always and fully for l <= 2. Throws AgreementError when
/// shift_side differs from conj(product_side) by more than 1e-10.
ShiftTrace trace_product_via_shift(std::span<const DensityOperator> states,
                                   Index cap = kDefaultCircuitCap);

struct ShiftExperiment {
  std::vector<DensityOperator> copies;
  PureState probe;
  std::optional<std::uint64_t> shots;  // absent: exact evaluation only
  std::uint64_t seed = 0;
  Index capacity = kDefaultCircuitCap;  // bound on 2 d^(l+1)
};

/// Density matrix of (control, registers) after H, controlled-SHIFT, H.
ComplexMatrix circuit_final_state(const ShiftExperiment& e);

/// <sigma_z> of the control qubit by full density-matrix evolution.
/// Equals Re tr[S (rho_1 (x) ... (x) rho_l (x) |psi><psi|)]; for l = 2 this is
/// <psi|{rho_1, rho_2}|psi> / 2.
double run_circuit_exact(const ShiftExperiment& e);

/// Im tr[S (rho_1 (x) ... (x) rho_l (x) |psi><psi|)]. Zero for a single copy; not
/// observable through <sigma_z>.
double circuit_imaginary_part(const ShiftExperiment& e);

struct SampledEstimate {
  double estimate = 0;
  double stderr_estimate = 0;
  std::uint64_t shots = 0;
  std::uint64_t zeros = 0;
};

/// Shot-sampled control measurement. Requires e.shots >= 1.
SampledEstimate run_circuit_sampled(const ShiftExperiment& e);
/// Same, reusing an already computed exact value.
SampledEstimate sample_control(double exact, std::uint64_t shots, std::uint64_t seed);

/// Smallest N with sigmas * sqrt((1 - target^2) / N) < |target|.
std::uint64_t shots_to_resolve(double target, double confidence_sigmas);

}  // namespace qwitness
