#pragma once

#include <optional>

#include "qwitness/eigen_solver.hpp"
#include "qwitness/linalg.hpp"
#include "qwitness/rng.hpp"

namespace qwitness {

struct StateTolerances {
  double hermiticity = 1e-10;  // relative
  double trace = 1e-10;
  double psd = 1e-10;
  double degeneracy = 1e-8;  // relative to the largest eigenvalue
};

/// Normalized state vector.
class PureState {
 public:
  static constexpr double kNormTol = 1e-12;

  /// The one-dimensional state (1).
  PureState() : v_(ComplexVector::Ones(1)) {}

  /// Validates the norm; throws InvalidInput when it is off by more than kNormTol.
  static PureState from_amplitudes(ComplexVector amplitudes);
  /// Rescales to unit norm. Throws InvalidInput for the zero vector.
  static PureState normalized(ComplexVector amplitudes);
  static PureState basis(Index dim, Index k);

  const ComplexVector& amplitudes() const noexcept { return v_; }
  Index dim() const noexcept { return v_.size(); }
  ComplexMatrix projector() const { return v_ * v_.adjoint(); }
  /// <this|other>
  Complex overlap(const PureState& other) const { return v_.dot(other.v_); }

 private:
  explicit PureState(ComplexVector v) : v_(std::move(v)) {}
  ComplexVector v_;
};

/// Hermitian, unit-trace, positive semidefinite matrix together with its spectrum.
class DensityOperator {
 public:
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const SpectralDecomposition& spectrum() const noexcept { return spec_; }
  Index dim() const noexcept { return m_.rows(); }
  double max_eigenvalue() const { return spec_.eigenvalues(0); }
  double min_eigenvalue() const { return spec_.eigenvalues(spec_.dim() - 1); }

  /// Builds sum_i p_i |v_i><v_i| from weights and orthonormal columns. Small negative
  /// weights (within tol.psd) are clamped to zero; the weights must sum to one.
  static DensityOperator from_spectrum(const RealVector& weights, const ComplexMatrix& vectors,
                                       const StateTolerances& tol = {});

 private:
  friend DensityOperator make_density(const ComplexMatrix&, const StateTolerances&);
  DensityOperator(ComplexMatrix m, SpectralDecomposition spec)
      : m_(std::move(m)), spec_(std::move(spec)) {}

  ComplexMatrix m_;
  SpectralDecomposition spec_;
};

/// Validates and wraps a matrix. Throws HermiticityError, TraceError or PositivityError
/// carrying the violated margin.
DensityOperator make_density(const ComplexMatrix& m, const StateTolerances& tol = {});

DensityOperator pure_density(const PureState& psi);
DensityOperator maximally_mixed(Index dim);

struct BlochVector {
  double x = 0;
  double y = 0;
  double z = 0;

  double norm() const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
};

/// (1 + x.sigma) / 2. Throws PositivityError when |x| > 1 + 1e-12.
DensityOperator bloch_to_state(const BlochVector& b);
/// Throws DimensionError for non-qubit input.
BlochVector state_to_bloch(const DensityOperator& rho);

/// tr[rho^2]
double purity(const DensityOperator& rho);

/// rho = (1 - epsilon) |psi><psi| + epsilon eta with psi the top eigenvector.
struct PureDecomposition {
  double epsilon = 0;
  PureState psi;
  std::optional<DensityOperator> eta;  // absent for pure input
  bool degenerate = false;
  double gap = 0;  // lambda_max - lambda_second

  ComplexMatrix reconstruct() const;
};

PureDecomposition pure_decompose(const DensityOperator& rho, const StateTolerances& tol = {});

/// G G^dagger / tr[G G^dagger] with G a dim x rank complex Ginibre matrix.
DensityOperator random_density(Index dim, Index rank, Rng& rng);
PureState random_pure(Index dim, Rng& rng);
/// Haar unitary from the QR decomposition of a Ginibre matrix, phases fixed by diag(R).
ComplexMatrix random_unitary(Index dim, Rng& rng);

}  // namespace qwitness
