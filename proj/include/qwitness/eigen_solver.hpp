#pragma once

// Cyclic Jacobi eigensolver for complex Hermitian matrices.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qwitness/linalg.hpp"

namespace qwitness {

template <typename Scalar>
struct SpectralDecompositionT {
  RealVectorT<Scalar> eigenvalues;      // descending
  ComplexMatrixT<Scalar> eigenvectors;  // column i pairs with eigenvalues(i)
  int sweeps = 0;

  Index dim() const { return eigenvalues.size(); }

  /// sum_i w_i |v_i><v_i|
  ComplexMatrixT<Scalar> weighted_sum(const RealVectorT<Scalar>& weights) const {
    return eigenvectors * weights.template cast<std::complex<Scalar>>().asDiagonal() *
           eigenvectors.adjoint();
  }

  ComplexMatrixT<Scalar> reconstruct() const { return weighted_sum(eigenvalues); }
};

using SpectralDecomposition = SpectralDecompositionT<double>;

namespace linalg {

struct EigenOptions {
  double hermiticity_tol = kHermiticityTol;
  int max_sweeps = kMaxSweeps;
  Index dim_cap = kEigenDimCap;
};

namespace detail {

// Fix the global phase of each eigenvector: its largest-magnitude component (first one on
// ties) becomes real and positive.
template <typename Scalar>
void normalize_phases(ComplexMatrixT<Scalar>& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index best = 0;
    Scalar best_mag = -1;
    for (Index i = 0; i < v.rows(); ++i) {
      const Scalar mag = std::abs(v(i, j));
      if (mag > best_mag * (1 + 8 * std::numeric_limits<Scalar>::epsilon())) {
        best = i;
        best_mag = mag;
      }
    }
    if (best_mag > 0) v.col(j) *= std::conj(v(best, j)) / best_mag;
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Eigenvalues come back sorted descending.
template <typename Derived>
SpectralDecompositionT<typename Derived::RealScalar> hermitian_eigen(
    const Eigen::MatrixBase<Derived>& input, const EigenOptions& opts = {}) {
  using Scalar = typename Derived::RealScalar;
  using C = std::complex<Scalar>;
  using Matrix = ComplexMatrixT<Scalar>;

  require_square(input, "hermitian_eigen");
  const Index n = input.rows();
  if (n > opts.dim_cap) {
    throw CapacityError("hermitian_eigen: dimension " + std::to_string(n) + " exceeds cap " +
                        std::to_string(opts.dim_cap));
  }
  Matrix a = input.template cast<C>();
  if (!a.allFinite()) throw InvalidInput("hermitian_eigen: non-finite entry");
  const Scalar norm = a.norm();
  const Scalar defect = hermiticity_defect(a);
  if (defect > opts.hermiticity_tol * norm) {
    throw HermiticityError("hermitian_eigen: matrix is not Hermitian (defect " +
                               std::to_string(defect) + ")",
                           defect);
  }
  a = (a + a.adjoint().eval()) * Scalar(0.5);
  for (Index i = 0; i < n; ++i) a(i, i) = C(std::real(a(i, i)), 0);

  Matrix v = Matrix::Identity(n, n);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar negligible = std::max(std::numeric_limits<Scalar>::min(), norm * eps * eps);

  int sweep = 0;
  for (;; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const C apq = a(p, q);
        const Scalar mag = std::abs(apq);
        const Scalar app = std::real(a(p, p));
        const Scalar aqq = std::real(a(q, q));
        const Scalar threshold =
            std::max(negligible, 2 * eps * std::max(std::abs(app), std::abs(aqq)));
        if (mag <= threshold) continue;
        if (sweep == opts.max_sweeps) {
          throw ConvergenceError(
              "hermitian_eigen: no convergence after " + std::to_string(sweep) + " sweeps",
              sweep);
        }
        rotated = true;

        // Remove the phase of a_pq, then apply the real symmetric rotation.
        const Scalar theta = (aqq - app) / (2 * mag);
        Scalar t;
        if (std::abs(theta) > Scalar(1e150)) {
          t = 1 / (2 * theta);
        } else {
          t = 1 / (std::abs(theta) + std::sqrt(theta * theta + 1));
          if (theta < 0) t = -t;
        }
        const Scalar c = 1 / std::sqrt(t * t + 1);
        const Scalar s = t * c;
        const C phase = apq / mag;
        // Columns p, q of J: (c, -s conj(phase)) and (s, c conj(phase)).
        const C jpp = c;
        const C jqp = -s * std::conj(phase);
        const C jpq = s;
        const C jqq = c * std::conj(phase);

        for (Index k = 0; k < n; ++k) {
          const C akp = a(k, p);
          const C akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Index k = 0; k < n; ++k) {
          const C apk = a(p, k);
          const C aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const C vkp = v(k, p);
          const C vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        a(p, q) = 0;
        a(q, p) = 0;
        a(p, p) = C(std::real(a(p, p)), 0);
        a(q, q) = C(std::real(a(q, q)), 0);
      }
    }
    if (!rotated) break;
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return std::real(a(i, i)) > std::real(a(j, j));
  });

  SpectralDecompositionT<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.sweeps = sweep;
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = std::real(a(src, src));
    out.eigenvectors.col(k) = v.col(src);
  }
  detail::normalize_phases(out.eigenvectors);
  return out;
}

}  // namespace linalg
}  // namespace qwitness
