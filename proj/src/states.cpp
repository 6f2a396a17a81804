#include "qwitness/states.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace qwitness {

namespace {

std::string fmt_margin(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

PureState PureState::from_amplitudes(ComplexVector amplitudes) {
  if (amplitudes.size() < 1) throw DimensionError("PureState: empty vector");
  if (!amplitudes.allFinite()) throw InvalidInput("PureState: non-finite amplitude");
  const double n = amplitudes.norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw InvalidInput("PureState: norm " + std::to_string(n) + " is not 1");
  }
  return PureState(std::move(amplitudes));
}

PureState PureState::normalized(ComplexVector amplitudes) {
  if (amplitudes.size() < 1) throw DimensionError("PureState: empty vector");
  if (!amplitudes.allFinite()) throw InvalidInput("PureState: non-finite amplitude");
  const double n = amplitudes.norm();
  if (n == 0.0) throw InvalidInput("PureState: zero vector");
  amplitudes /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(Index dim, Index k) {
  if (dim < 1 || k < 0 || k >= dim) throw DimensionError("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v));
}

DensityOperator make_density(const ComplexMatrix& m, const StateTolerances& tol) {
  linalg::require_square(m, "make_density");
  if (!m.allFinite()) throw InvalidInput("make_density: non-finite entry");
  const double defect = linalg::hermiticity_defect(m);
  if (defect > tol.hermiticity * m.norm()) {
    throw HermiticityError("make_density: not Hermitian, defect " + fmt_margin(defect), defect);
  }
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw TraceError("make_density: trace " + fmt_margin(tr) + " differs from 1", tr - 1.0);
  }
  linalg::EigenOptions opts;
  opts.hermiticity_tol = tol.hermiticity;
  SpectralDecomposition spec = linalg::hermitian_eigen(h, opts);
  const double lo = spec.eigenvalues(spec.dim() - 1);
  const double hi = spec.eigenvalues(0);
  if (lo < -tol.psd) {
    throw PositivityError("make_density: negative eigenvalue " + fmt_margin(lo), lo);
  }
  if (hi > 1.0 + tol.psd) {
    throw PositivityError("make_density: eigenvalue " + fmt_margin(hi) + " exceeds 1", hi - 1.0);
  }
  return DensityOperator(std::move(h), std::move(spec));
}

DensityOperator DensityOperator::from_spectrum(const RealVector& weights,
                                               const ComplexMatrix& vectors,
                                               const StateTolerances& tol) {
  const Index n = weights.size();
  if (n < 1 || vectors.rows() != n || vectors.cols() != n) {
    throw DimensionError("from_spectrum: need d weights and a d x d basis");
  }
  if (!weights.allFinite() || !vectors.allFinite()) {
    throw InvalidInput("from_spectrum: non-finite input");
  }
  const double orth = (vectors.adjoint() * vectors - ComplexMatrix::Identity(n, n))
                          .cwiseAbs()
                          .maxCoeff();
  if (orth > linalg::kOrthonormalityTol) {
    throw InvalidInput("from_spectrum: basis is not orthonormal");
  }
  RealVector w = weights;
  for (Index i = 0; i < n; ++i) {
    if (w(i) < -tol.psd) {
      throw PositivityError("from_spectrum: negative weight " + fmt_margin(w(i)), w(i));
    }
    w(i) = std::max(w(i), 0.0);
  }
  if (std::abs(w.sum() - 1.0) > tol.trace) {
    throw TraceError("from_spectrum: weights sum to " + fmt_margin(w.sum()), w.sum() - 1.0);
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return w(i) > w(j); });
  SpectralDecomposition spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    spec.eigenvalues(k) = w(order[static_cast<std::size_t>(k)]);
    spec.eigenvectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  ComplexMatrix m = spec.reconstruct();
  m = (m + m.adjoint().eval()) * 0.5;
  return DensityOperator(std::move(m), std::move(spec));
}

DensityOperator pure_density(const PureState& psi) {
  const Index d = psi.dim();
  // Complete psi to an orthonormal basis so the cached spectrum is exact.
  ComplexMatrix seed = ComplexMatrix::Identity(d, d);
  seed.col(0) = psi.amplitudes();
  Index k = 1;
  for (Index e = 0; e < d && k < d; ++e) {
    ComplexVector cand = ComplexVector::Unit(d, e);
    for (Index j = 0; j < k; ++j) cand -= seed.col(j).dot(cand) * seed.col(j);
    for (Index j = 0; j < k; ++j) cand -= seed.col(j).dot(cand) * seed.col(j);
    const double nrm = cand.norm();
    if (nrm > 1e-6) seed.col(k++) = cand / nrm;
  }
  RealVector w = RealVector::Zero(d);
  w(0) = 1.0;
  return DensityOperator::from_spectrum(w, seed);
}

DensityOperator maximally_mixed(Index dim) {
  if (dim < 1) throw DimensionError("maximally_mixed: dim must be positive");
  return DensityOperator::from_spectrum(RealVector::Constant(dim, 1.0 / static_cast<double>(dim)),
                                        ComplexMatrix::Identity(dim, dim));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

DensityOperator bloch_to_state(const BlochVector& b) {
  if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.z)) {
    throw InvalidInput("bloch_to_state: non-finite component");
  }
  const double r = b.norm();
  if (r > 1.0 + 1e-12) {
    throw PositivityError("bloch_to_state: |x| = " + fmt_margin(r) + " exceeds 1", 1.0 - r);
  }
  ComplexMatrix m(2, 2);
  m << Complex(1.0 + b.z, 0.0), Complex(b.x, -b.y), Complex(b.x, b.y), Complex(1.0 - b.z, 0.0);
  return make_density(m * 0.5);
}

BlochVector state_to_bloch(const DensityOperator& rho) {
  if (rho.dim() != 2) throw DimensionError("state_to_bloch: qubit state required");
  const ComplexMatrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

double purity(const DensityOperator& rho) { return rho.matrix().squaredNorm(); }

ComplexMatrix PureDecomposition::reconstruct() const {
  ComplexMatrix m = (1.0 - epsilon) * psi.projector();
  if (eta) m += epsilon * eta->matrix();
  return m;
}

PureDecomposition pure_decompose(const DensityOperator& rho, const StateTolerances& tol) {
  const SpectralDecomposition& spec = rho.spectrum();
  const Index d = spec.dim();
  const double top = spec.eigenvalues(0);
  const double eps = std::clamp(1.0 - top, 0.0, 1.0);
  const double gap = d > 1 ? top - spec.eigenvalues(1) : top;

  std::optional<DensityOperator> eta;
  if (eps > tol.psd && d > 1) {
    RealVector w(d);
    w(0) = 0.0;
    for (Index i = 1; i < d; ++i) w(i) = std::max(spec.eigenvalues(i), 0.0);
    const double rest = w.sum();
    if (rest > 0.0) eta = DensityOperator::from_spectrum(w / rest, spec.eigenvectors);
  }
  return PureDecomposition{eps,
                           PureState::normalized(spec.eigenvectors.col(0)),
                           std::move(eta),
                           gap <= tol.degeneracy * top,
                           gap};
}

DensityOperator random_density(Index dim, Index rank, Rng& rng) {
  if (dim < 1 || rank < 1 || rank > dim) {
    throw DimensionError("random_density: need 1 <= rank <= dim, got rank " +
                         std::to_string(rank) + " for dim " + std::to_string(dim));
  }
  ComplexMatrix g(dim, rank);
  for (Index j = 0; j < rank; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  return make_density(w);
}

PureState random_pure(Index dim, Rng& rng) {
  if (dim < 1) throw DimensionError("random_pure: dim must be positive");
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return PureState::normalized(std::move(v));
}

ComplexMatrix random_unitary(Index dim, Rng& rng) {
  if (dim < 1) throw DimensionError("random_unitary: dim must be positive");
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace qwitness
