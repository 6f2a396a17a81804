#pragma once

// Dense complex linear algebra on Eigen types: checked arithmetic, (anti)commutators,
// Kronecker products and partial traces.
//
// Tensor index convention: the row index of a (x) b is i_a * rows(b) + i_b, so the
// left factor owns the most significant digit. Every module relies on this.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>

#include "qwitness/errors.hpp"

namespace qwitness {

template <typename Scalar>
using ComplexMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;
using RealVector = RealVectorT<double>;
using Index = Eigen::Index;

namespace linalg {

inline constexpr double kHermiticityTol = 1e-10;  // relative to the Frobenius norm
inline constexpr double kOrthonormalityTol = 1e-10;
inline constexpr double kEigenTol = 1e-12;  // residual, relative to the Frobenius norm
inline constexpr int kMaxSweeps = 100;
inline constexpr Index kEigenDimCap = 256;
inline constexpr Index kTensorDimCap = 4096;

enum class Subsystem { A, B };

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

template <typename DA, typename DB>
void require_same_shape(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

/// Largest |a_ij - conj(a_ji)|.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Hermitian within `rel_tol` * ||a||_F. The zero matrix counts as Hermitian.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double rel_tol = kHermiticityTol) {
  if (a.rows() != a.cols()) return false;
  return hermiticity_defect(a) <= rel_tol * a.norm();
}

template <typename DA, typename DB>
typename DA::PlainObject add(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

template <typename DA, typename DB>
typename DA::PlainObject sub(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  require_same_shape(a, b, "sub");
  return a - b;
}

template <typename Derived, typename S>
typename Derived::PlainObject scale(const Eigen::MatrixBase<Derived>& a, const S& s) {
  return a * typename Derived::Scalar(s);
}

template <typename DA, typename DB>
typename DA::PlainObject matmul(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
  }
  return a * b;
}

template <typename Derived>
typename Derived::PlainObject adjoint(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint();
}

/// ab + ba. When both inputs are Hermitian the result is replaced by its Hermitian
/// part, so it is exactly self-adjoint.
template <typename DA, typename DB>
typename DA::PlainObject anticommutator(const Eigen::MatrixBase<DA>& a,
                                        const Eigen::MatrixBase<DB>& b) {
  require_square(a, "anticommutator");
  require_same_shape(a, b, "anticommutator");
  typename DA::PlainObject m = a * b + b * a;
  if (is_hermitian(a) && is_hermitian(b)) {
    typename DA::PlainObject h = (m + m.adjoint()) * typename DA::RealScalar(0.5);
    return h;
  }
  return m;
}

/// ab - ba. Replaced by its anti-Hermitian part for Hermitian inputs.
template <typename DA, typename DB>
typename DA::PlainObject commutator(const Eigen::MatrixBase<DA>& a,
                                    const Eigen::MatrixBase<DB>& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  typename DA::PlainObject m = a * b - b * a;
  if (is_hermitian(a) && is_hermitian(b)) {
    typename DA::PlainObject h = (m - m.adjoint()) * typename DA::RealScalar(0.5);
    return h;
  }
  return m;
}

/// Kronecker product a (x) b. Works for vectors as well as square matrices.
template <typename DA, typename DB>
typename DA::PlainObject tensor(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                Index cap = kTensorDimCap) {
  if (a.rows() == 0 || b.rows() == 0 || a.cols() == 0 || b.cols() == 0) {
    throw DimensionError("tensor: empty factor");
  }
  if (a.rows() > cap / b.rows() || a.cols() > cap / b.cols()) {
    throw CapacityError("tensor: result dimension " + std::to_string(a.rows()) + "*" +
                        std::to_string(b.rows()) + " exceeds cap " + std::to_string(cap));
  }
  const Index br = b.rows();
  const Index bc = b.cols();
  typename DA::PlainObject out(a.rows() * br, a.cols() * bc);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

/// Trace out one factor of a (d_a * d_b)-dimensional operator.
template <typename Derived>
typename Derived::PlainObject partial_trace(const Eigen::MatrixBase<Derived>& a, Index d_a,
                                            Index d_b, Subsystem keep) {
  require_square(a, "partial_trace");
  if (d_a < 1 || d_b < 1 || a.rows() != d_a * d_b) {
    throw DimensionError("partial_trace: dimension " + std::to_string(a.rows()) +
                         " does not factor as " + std::to_string(d_a) + "*" +
                         std::to_string(d_b));
  }
  if (keep == Subsystem::B) {
    typename Derived::PlainObject out = Derived::PlainObject::Zero(d_b, d_b);
    for (Index k = 0; k < d_a; ++k) out += a.block(k * d_b, k * d_b, d_b, d_b);
    return out;
  }
  typename Derived::PlainObject out(d_a, d_a);
  for (Index i = 0; i < d_a; ++i) {
    for (Index j = 0; j < d_a; ++j) {
      out(i, j) = a.block(i * d_b, j * d_b, d_b, d_b).trace();
    }
  }
  return out;
}

/// tr[a b] without forming the product.
template <typename DA, typename DB>
typename DA::Scalar trace_of_product(const Eigen::MatrixBase<DA>& a,
                                     const Eigen::MatrixBase<DB>& b) {
  require_same_shape(a, b.transpose(), "trace_of_product");
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace linalg
}  // namespace qwitness
