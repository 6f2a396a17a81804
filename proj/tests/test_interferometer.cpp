#include "doctest.h"
#include "oracle.hpp"
#include "qwitness/interferometer.hpp"
#include "qwitness/witness.hpp"

#include <cmath>

using namespace qwitness;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

DensityOperator ket_state(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  v.normalize();
  return make_density(v * v.adjoint());
}

// S|i_1 ... i_l> = |i_l i_1 ... i_{l-1}> by digit enumeration, i_1 most significant.
ComplexMatrix shift_oracle(Index d, Index l) {
  Index n = 1;
  for (Index k = 0; k < l; ++k) n *= d;
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Index in = 0; in < n; ++in) {
    std::vector<Index> digits(static_cast<std::size_t>(l));
    Index x = in;
    for (Index k = l - 1; k >= 0; --k) digits[static_cast<std::size_t>(k)] = x % d, x /= d;
    std::vector<Index> moved(digits.size());
    moved[0] = digits.back();
    for (std::size_t k = 1; k < digits.size(); ++k) moved[k] = digits[k - 1];
    Index out = 0;
    for (Index v : moved) out = out * d + v;
    s(out, in) = 1.0;
  }
  return s;
}

}  // namespace

TEST_CASE("shift operator") {
  CHECK(shift_operator(3, 1) == ComplexMatrix::Identity(3, 3));
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  CHECK(shift_operator(2, 2) == swap);
  const ComplexMatrix s3 = shift_operator(2, 3);
  CHECK(s3 * s3 * s3 == ComplexMatrix::Identity(8, 8));
  for (Index d : {2, 3}) {
    for (Index l : {1, 2, 3, 4}) {
      const ComplexMatrix s = shift_operator(d, l, 4096);
      CHECK(s == shift_oracle(d, l));
      CHECK(s.adjoint() * s == ComplexMatrix::Identity(s.rows(), s.cols()));
    }
  }
  CHECK_THROWS_AS(shift_operator(4, 5), CapacityError);
}

TEST_CASE("shift trace examples") {
  const DensityOperator rho = make_density(diag2(0.6, 0.4));
  const std::vector<DensityOperator> two{rho, rho};
  CHECK(trace_product_via_shift(two).product_side.real() == doctest::Approx(0.52));
  const std::vector<DensityOperator> three{rho, rho, rho};
  CHECK(trace_product_via_shift(three).product_side.real() == doctest::Approx(0.28));
  const std::vector<DensityOperator> orth{ket_state(1, 0), ket_state(0, 1)};
  CHECK(std::abs(trace_product_via_shift(orth).shift_side) < 1e-15);
}

TEST_CASE("shift trace identity on random tuples") {
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 2;
    const Index l = 2 + (t / 2) % 2;
    std::vector<DensityOperator> states;
    for (Index k = 0; k < l; ++k) states.push_back(random_density(d, d, rng));
    const ShiftTrace st = trace_product_via_shift(states);
    // independent contraction
    ComplexMatrix joint = states[0].matrix();
    for (Index k = 1; k < l; ++k) joint = oracle::kron(joint, states[static_cast<std::size_t>(k)].matrix());
    const Complex lhs = (shift_oracle(d, l) * joint).trace();
    CHECK(std::abs(lhs - st.shift_side) < 1e-12);
    CHECK(std::abs(st.shift_side.real() - st.product_side.real()) < 1e-10);
    CHECK(std::abs(st.shift_side - std::conj(st.product_side)) < 1e-10);
    if (l == 2) CHECK(std::abs(st.shift_side - st.product_side) < 1e-10);
  }
}

TEST_CASE("circuit examples") {
  ShiftExperiment e;
  e.copies = {ket_state(1, 0), ket_state(1, 0)};
  e.probe = PureState::basis(2, 0);
  CHECK(run_circuit_exact(e) == doctest::Approx(1.0));

  e.copies = {ket_state(1, 0), ket_state(1, 1)};
  const auto w = witness_anticommutator(e.copies[0], e.copies[1]);
  e.probe = w.witness_vector;
  CHECK(std::abs(run_circuit_exact(e) - (1 - std::sqrt(2.0)) / 4) < 1e-12);
  CHECK(run_circuit_exact(e) == doctest::Approx(-0.103553).epsilon(1e-5));

  e.copies = {ket_state(1, 0), ket_state(0, 1)};
  Rng rng(32);
  e.probe = random_pure(2, rng);
  CHECK(std::abs(run_circuit_exact(e)) < 1e-15);
}

TEST_CASE("circuit expectation equals half the anticommutator quadratic form") {
  Rng rng(33);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 3;
    ShiftExperiment e;
    e.copies = {random_density(d, d, rng), random_density(d, 1 + t % d, rng)};
    e.probe = random_pure(d, rng);
    const ComplexMatrix x = linalg::anticommutator(e.copies[0].matrix(), e.copies[1].matrix());
    const ComplexVector& p = e.probe.amplitudes();
    CHECK(std::abs(run_circuit_exact(e) - 0.5 * p.dot(x * p).real()) < 1e-12);
    // the forward shift over (rho_1, rho_2, probe) yields <psi| rho_2 rho_1 |psi>
    const Complex q = p.dot(e.copies[1].matrix() * e.copies[0].matrix() * p);
    CHECK(std::abs(circuit_imaginary_part(e) - q.imag()) < 1e-12);
    const ComplexMatrix fin = circuit_final_state(e);
    CHECK(std::abs(fin.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("controlled shift is unitary") {
  for (Index l : {1, 2, 3}) {
    const ComplexMatrix c = controlled_shift(2, l);
    CHECK((c.adjoint() * c - ComplexMatrix::Identity(c.rows(), c.cols())).norm() < 1e-12);
  }
}

TEST_CASE("three-copy circuit reports the real part") {
  Rng rng(34);
  ShiftExperiment e;
  e.copies = {random_density(2, 2, rng), random_density(2, 2, rng)};
  e.probe = random_pure(2, rng);
  const ComplexMatrix p = e.probe.projector();
  const Complex prod = (e.copies[0].matrix() * e.copies[1].matrix() * p).trace();
  CHECK(std::abs(run_circuit_exact(e) - prod.real()) < 1e-12);

  e.copies.push_back(random_density(2, 2, rng));
  const Complex prod3 = (e.copies[0].matrix() * e.copies[1].matrix() * e.copies[2].matrix() * p).trace();
  CHECK(std::abs(run_circuit_exact(e) - prod3.real()) < 1e-12);
  CHECK(std::abs(circuit_imaginary_part(e) + prod3.imag()) < 1e-12);
}

TEST_CASE("circuit capacity") {
  ShiftExperiment e;
  e.copies.assign(3, maximally_mixed(4));
  e.probe = PureState::basis(4, 0);
  CHECK_NOTHROW(run_circuit_exact(e));
  e.copies.push_back(maximally_mixed(4));
  CHECK_THROWS_AS(run_circuit_exact(e), CapacityError);
  e.copies = {maximally_mixed(2), maximally_mixed(3)};
  CHECK_THROWS_AS(run_circuit_exact(e), DimensionError);
}

TEST_CASE("sampling") {
  const SampledEstimate one = sample_control(1.0, 1000, 5);
  CHECK(one.estimate == 1.0);
  CHECK(one.stderr_estimate == 0.0);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SampledEstimate s = sample_control(0.0, 10000, seed);
    if (std::abs(s.estimate) <= 5 * s.stderr_estimate) ++inside;
  }
  CHECK(inside >= 99);

  ShiftExperiment e;
  e.copies = {ket_state(1, 0), ket_state(1, 1)};
  e.probe = witness_anticommutator(e.copies[0], e.copies[1]).witness_vector;
  e.shots = 100000;
  e.seed = 7;
  const double exact = run_circuit_exact(e);
  const SampledEstimate s = run_circuit_sampled(e);
  CHECK(s.estimate < 0);
  CHECK(std::abs(s.estimate - exact) <= 5 * s.stderr_estimate);
  CHECK(run_circuit_sampled(e).zeros == s.zeros);  // deterministic per seed

  const SampledEstimate pooled = sample_control(exact, 1000000, 8);
  CHECK(std::abs(pooled.estimate - exact) <= 5 * pooled.stderr_estimate);

  e.shots = 0;
  CHECK_THROWS_AS(run_circuit_sampled(e), InvalidInput);
}

TEST_CASE("shots_to_resolve") {
  CHECK(shots_to_resolve(-0.1036, 5) == 2305);
  CHECK(shots_to_resolve(1.0, 5) == 1);
  CHECK(shots_to_resolve(-1.0, 5) == 1);
  CHECK(shots_to_resolve(0.3, 0) == 1);
  CHECK_THROWS_AS(shots_to_resolve(0.0, 5), UnresolvableError);
  CHECK_THROWS_AS(shots_to_resolve(1.5, 5), InvalidInput);
  const std::uint64_t n = shots_to_resolve(-0.2, 3);
  CHECK(3 * std::sqrt((1 - 0.04) / static_cast<double>(n)) < 0.2);
  CHECK(3 * std::sqrt((1 - 0.04) / static_cast<double>(n - 1)) >= 0.2);
}
