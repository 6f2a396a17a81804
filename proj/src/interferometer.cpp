#include "qwitness/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qwitness {

namespace {

Index checked_power(Index d, Index l, Index cap, const char* what) {
  if (d < 1 || l < 1) throw DimensionError(std::string(what) + ": need d >= 1 and l >= 1");
  Index total = 1;
  for (Index k = 0; k < l; ++k) {
    if (total > cap / d) {
      throw CapacityError(std::string(what) + ": " + std::to_string(d) + "^" +
                          std::to_string(l) + " exceeds cap " + std::to_string(cap));
    }
    total *= d;
  }
  return total;
}

ComplexMatrix product_operator(std::span<const ComplexMatrix> factors, Index cap) {
  ComplexMatrix r = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) r = linalg::tensor(r, factors[k], cap);
  return r;
}

Index common_dim(const ShiftExperiment& e) {
  if (e.copies.empty()) throw DimensionError("circuit: at least one copy is required");
  const Index d = e.copies.front().dim();
  for (const auto& c : e.copies) {
    if (c.dim() != d) throw DimensionError("circuit: registers differ in dimension");
  }
  if (e.probe.dim() != d) throw DimensionError("circuit: probe dimension differs");
  return d;
}

// rho_1 (x) ... (x) rho_l (x) |psi><psi|, after checking 2 d^(l+1) against the cap.
ComplexMatrix register_state(const ShiftExperiment& e, Index& d, Index& registers) {
  d = common_dim(e);
  registers = static_cast<Index>(e.copies.size()) + 1;
  checked_power(d, registers, e.capacity / 2, "circuit");
  std::vector<ComplexMatrix> factors;
  factors.reserve(static_cast<std::size_t>(registers));
  for (const auto& c : e.copies) factors.push_back(c.matrix());
  factors.push_back(e.probe.projector());
  return product_operator(factors, e.capacity);
}

}  // namespace

ComplexMatrix shift_operator(Index d, Index l, Index cap) {
  const Index total = checked_power(d, l, cap, "shift_operator");
  const Index top = total / d;  // weight of the first register
  ComplexMatrix s = ComplexMatrix::Zero(total, total);
  for (Index in = 0; in < total; ++in) {
    // Last register's digit moves to the front, the rest shift one place right.
    const Index last = in % d;
    const Index out = last * top + in / d;
    s(out, in) = 1.0;
  }
  return s;
}

ComplexMatrix controlled_shift(Index d, Index l, Index cap) {
  const ComplexMatrix s = shift_operator(d, l, cap / 2);
  const Index n = s.rows();
  ComplexMatrix c = ComplexMatrix::Zero(2 * n, 2 * n);
  c.topLeftCorner(n, n).setIdentity();
  c.bottomRightCorner(n, n) = s;
  return c;
}

ShiftTrace trace_product_via_shift(std::span<const DensityOperator> states, Index cap) {
  if (states.empty()) throw DimensionError("trace_product_via_shift: no states");
  const Index d = states.front().dim();
  for (const auto& s : states) {
    if (s.dim() != d) throw DimensionError("trace_product_via_shift: dimension mismatch");
  }
  const Index l = static_cast<Index>(states.size());
  const ComplexMatrix shift = shift_operator(d, l, cap);
  std::vector<ComplexMatrix> factors;
  for (const auto& s : states) factors.push_back(s.matrix());
  const ComplexMatrix joint = product_operator(factors, cap);

  ShiftTrace t;
  t.shift_side = linalg::trace_of_product(shift, joint);
  ComplexMatrix prod = states.front().matrix();
  for (std::size_t k = 1; k < states.size(); ++k) prod = prod * states[k].matrix();
  t.product_side = prod.trace();

  const double gap = std::abs(t.shift_side - std::conj(t.product_side));
  if (gap > 1e-10) {
    throw AgreementError("trace_product_via_shift: contraction and product differ by " +
                             std::to_string(gap),
                         gap);
  }
  return t;
}

ComplexMatrix circuit_final_state(const ShiftExperiment& e) {
  Index d = 0;
  Index registers = 0;
  const ComplexMatrix r = register_state(e, d, registers);
  const Index n = r.rows();

  ComplexMatrix state = ComplexMatrix::Zero(2 * n, 2 * n);
  state.topLeftCorner(n, n) = r;  // control in |0><0|

  ComplexMatrix hadamard(2, 2);
  hadamard << 1.0, 1.0, 1.0, -1.0;
  hadamard /= std::sqrt(2.0);
  const ComplexMatrix h = linalg::tensor(hadamard, ComplexMatrix::Identity(n, n), e.capacity);
  const ComplexMatrix cs = controlled_shift(d, registers, e.capacity);
  const ComplexMatrix u = h * cs * h;
  return u * state * u.adjoint();
}

double run_circuit_exact(const ShiftExperiment& e) {
  const ComplexMatrix final_state = circuit_final_state(e);
  const Index n = final_state.rows() / 2;
  return (final_state.topLeftCorner(n, n).trace() - final_state.bottomRightCorner(n, n).trace())
      .real();
}

double circuit_imaginary_part(const ShiftExperiment& e) {
  Index d = 0;
  Index registers = 0;
  const ComplexMatrix r = register_state(e, d, registers);
  const ComplexMatrix s = shift_operator(d, registers, e.capacity / 2);
  return linalg::trace_of_product(s, r).imag();
}

SampledEstimate sample_control(double exact, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidInput("sample_control: shots must be at least 1");
  const double p0 = std::clamp((1.0 + exact) / 2.0, 0.0, 1.0);
  Rng rng(seed);
  SampledEstimate s;
  s.shots = shots;
  for (std::uint64_t k = 0; k < shots; ++k) {
    if (rng.uniform() < p0) ++s.zeros;
  }
  const double n = static_cast<double>(shots);
  s.estimate = (static_cast<double>(s.zeros) - static_cast<double>(shots - s.zeros)) / n;
  s.stderr_estimate = std::sqrt(std::max(0.0, 1.0 - s.estimate * s.estimate) / n);
  return s;
}

SampledEstimate run_circuit_sampled(const ShiftExperiment& e) {
  if (!e.shots || *e.shots < 1) throw InvalidInput("run_circuit_sampled: shots must be >= 1");
  return sample_control(run_circuit_exact(e), *e.shots, e.seed);
}

std::uint64_t shots_to_resolve(double target, double confidence_sigmas) {
  if (!std::isfinite(target) || std::abs(target) > 1.0) {
    throw InvalidInput("shots_to_resolve: target must lie in [-1, 1]");
  }
  if (target == 0.0) throw UnresolvableError("shots_to_resolve: a zero signal cannot be resolved");
  if (!(confidence_sigmas >= 0.0)) {
    throw InvalidInput("shots_to_resolve: confidence must be non-negative");
  }
  const double var = 1.0 - target * target;
  const double mag = std::abs(target);
  auto resolves = [&](double n) { return confidence_sigmas * std::sqrt(var / n) < mag; };
  const double guess = confidence_sigmas * confidence_sigmas * var / (target * target);
  auto n = static_cast<std::uint64_t>(std::floor(guess)) + 1;
  while (!resolves(static_cast<double>(n))) ++n;
  while (n > 1 && resolves(static_cast<double>(n - 1))) --n;
  return n;
}

}  // namespace qwitness
