#include "doctest.h"
#include "oracle.hpp"
#include "qwitness/states.hpp"

#include <cmath>

using namespace qwitness;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

void check_density_invariants(const DensityOperator& rho) {
  const ComplexMatrix& m = rho.matrix();
  CHECK(linalg::hermiticity_defect(m) <= 1e-10 * m.norm());
  CHECK(std::abs(m.trace() - 1.0) <= 1e-10);
  CHECK(oracle::min_eigenvalue(m) >= -1e-10);
  CHECK(oracle::eigenvalues(m).maxCoeff() <= 1.0 + 1e-10);
}

}  // namespace

TEST_CASE("make_density examples") {
  const DensityOperator half = make_density(ComplexMatrix::Identity(2, 2) / 2.0);
  CHECK(half.spectrum().eigenvalues(0) == doctest::Approx(0.5));
  CHECK(half.spectrum().eigenvalues(1) == doctest::Approx(0.5));
  CHECK_NOTHROW(make_density(diag2(0.6, 0.4)));
  try {
    make_density(diag2(1.1, -0.1));
    FAIL("expected PositivityError");
  } catch (const PositivityError& e) {
    CHECK(e.margin() == doctest::Approx(-0.1));
  }
}

TEST_CASE("make_density rejects invariant violations with margins") {
  ComplexMatrix nh = diag2(0.5, 0.5);
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(make_density(nh), HermiticityError);
  try {
    make_density(diag2(0.6, 0.5));
    FAIL("expected TraceError");
  } catch (const TraceError& e) {
    CHECK(e.margin() == doctest::Approx(0.1));
  }
  CHECK_THROWS_AS(make_density(ComplexMatrix::Identity(2, 3)), DimensionError);
  ComplexMatrix inf = diag2(0.5, 0.5);
  inf(1, 1) = INFINITY;
  CHECK_THROWS(make_density(inf));
}

TEST_CASE("bloch conversions") {
  const auto center = bloch_to_state({0, 0, 0});
  CHECK((center.matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-15);
  CHECK((bloch_to_state({0, 0, 1}).matrix() - diag2(1, 0)).norm() < 1e-15);
  ComplexMatrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK((bloch_to_state({1, 0, 0}).matrix() - plus).norm() < 1e-15);
  CHECK_THROWS_AS(bloch_to_state({1, 0.1, 0}), PositivityError);
  CHECK_THROWS_AS(state_to_bloch(maximally_mixed(3)), DimensionError);

  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const DensityOperator rho = random_density(2, 2, rng);
    const BlochVector b = state_to_bloch(rho);
    CHECK((bloch_to_state(b).matrix() - rho.matrix()).norm() < 1e-14);
    CHECK(purity(rho) == doctest::Approx((1 + b.norm() * b.norm()) / 2));
  }
}

TEST_CASE("purity") {
  CHECK(purity(maximally_mixed(2)) == doctest::Approx(0.5));
  CHECK(purity(make_density(diag2(0.6, 0.4))) == doctest::Approx(0.52));
  Rng rng(12);
  CHECK(purity(pure_density(random_pure(5, rng))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pure states") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState::from_amplitudes(v), InvalidInput);
  CHECK(PureState::normalized(v).amplitudes().norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(PureState::normalized(ComplexVector::Zero(2)), InvalidInput);
  const PureState e1 = PureState::basis(3, 1);
  CHECK(e1.amplitudes()(1) == Complex(1.0));
  CHECK(std::abs(e1.overlap(PureState::basis(3, 2))) == 0.0);
}

TEST_CASE("pure_decompose examples") {
  const auto pure = pure_decompose(make_density(diag2(1, 0)));
  CHECK(pure.epsilon == doctest::Approx(0.0));
  CHECK(std::abs(pure.psi.amplitudes()(0)) == doctest::Approx(1.0));
  CHECK_FALSE(pure.eta.has_value());

  const auto split = pure_decompose(make_density(diag2(0.9, 0.1)));
  CHECK(split.epsilon == doctest::Approx(0.1));
  CHECK(std::abs(split.psi.amplitudes()(0)) == doctest::Approx(1.0));
  REQUIRE(split.eta.has_value());
  CHECK((split.eta->matrix() - diag2(0, 1)).norm() < 1e-12);

  const auto mixed = pure_decompose(maximally_mixed(2));
  CHECK(mixed.degenerate);
  CHECK(mixed.gap == doctest::Approx(0.0));
}

TEST_CASE("pure_decompose invariants on random states") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 4;
    const DensityOperator rho = random_density(d, 1 + t % d, rng);
    const auto dec = pure_decompose(rho);
    CHECK((dec.reconstruct() - rho.matrix()).norm() < 1e-12);
    if (dec.eta) {
      CHECK((dec.eta->matrix() * dec.psi.amplitudes()).norm() <= 1e-10);
      check_density_invariants(*dec.eta);
    }
    const RealVector ev = oracle::eigenvalues(rho.matrix());
    CHECK(dec.epsilon == doctest::Approx(1.0 - ev(d - 1)).epsilon(1e-12));
    CHECK(dec.degenerate == (dec.gap <= 1e-8 * ev(d - 1)));
  }
}

TEST_CASE("random_density") {
  Rng rng(14);
  CHECK(purity(random_density(2, 1, rng)) == doctest::Approx(1.0).epsilon(1e-10));
  Rng a(99, 3);
  Rng b(99, 3);
  CHECK(random_density(4, 3, a).matrix() == random_density(4, 3, b).matrix());
  CHECK_THROWS_AS(random_density(3, 0, rng), DimensionError);
  CHECK_THROWS_AS(random_density(3, 4, rng), DimensionError);

  Rng mc(15);
  ComplexMatrix mean = ComplexMatrix::Zero(4, 4);
  for (int t = 0; t < 10000; ++t) {
    const DensityOperator rho = random_density(4, 4, mc);
    if (t % 1000 == 0) check_density_invariants(rho);
    mean += rho.matrix();
  }
  mean /= 10000.0;
  CHECK((mean - ComplexMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("random_pure") {
  Rng rng(16);
  for (int t = 0; t < 1000; ++t) {
    CHECK(std::abs(random_pure(1 + t % 6, rng).amplitudes().norm() - 1.0) <= 1e-12);
  }
  Rng a(5);
  Rng b(5);
  CHECK(random_pure(3, a).amplitudes() == random_pure(3, b).amplitudes());
  double mean = 0;
  for (int t = 0; t < 10000; ++t) {
    const PureState x = random_pure(2, rng);
    const PureState y = random_pure(2, rng);
    mean += std::norm(x.overlap(y));
  }
  CHECK(std::abs(mean / 10000 - 0.5) < 0.02);
}

TEST_CASE("random_unitary is unitary and deterministic") {
  Rng rng(17);
  for (Index d : {1, 2, 3, 5}) {
    const ComplexMatrix u = random_unitary(d, rng);
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm() < 1e-12);
  }
  Rng a(8);
  Rng b(8);
  CHECK(random_unitary(3, a) == random_unitary(3, b));
}

TEST_CASE("from_spectrum validation") {
  RealVector w(2);
  w << 0.7, 0.3;
  ComplexMatrix basis = ComplexMatrix::Identity(2, 2);
  CHECK((DensityOperator::from_spectrum(w, basis).matrix() - diag2(0.7, 0.3)).norm() < 1e-15);
  w << 0.7, 0.4;
  CHECK_THROWS_AS(DensityOperator::from_spectrum(w, basis), TraceError);
  w << 1.0 + 1e-12, -1e-12;
  CHECK(DensityOperator::from_spectrum(w, basis).min_eigenvalue() >= 0.0);
  basis(0, 1) = 0.5;
  w << 0.5, 0.5;
  CHECK_THROWS_AS(DensityOperator::from_spectrum(w, basis), InvalidInput);
}
