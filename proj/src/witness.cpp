#include "qwitness/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qwitness {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::NonpositiveWitnessed:
      return "NONPOSITIVE_WITNESSED";
    case Verdict::Positive:
      return "POSITIVE";
    case Verdict::NullAnticommutator:
      return "NULL_ANTICOMMUTATOR";
  }
  return "UNKNOWN";
}

std::string_view to_string(DegenerateVerdict v) {
  switch (v) {
    case DegenerateVerdict::PositiveWitnessable:
      return "POSITIVE_WITNESSABLE";
    case DegenerateVerdict::NegativeInconclusive:
      return "NEGATIVE_INCONCLUSIVE";
    case DegenerateVerdict::Undetermined:
      return "UNDETERMINED";
  }
  return "UNKNOWN";
}

WitnessReport analyze_anticommutator(const ComplexMatrix& x, const WitnessTolerances& tol) {
  const SpectralDecomposition spec = linalg::hermitian_eigen(x);
  const Index d = spec.dim();

  WitnessReport r;
  r.eigenvalues = spec.eigenvalues;
  r.min_eigenvalue = spec.eigenvalues(d - 1);
  // Lowest index in the (descending) tie group of the minimum.
  const double tie = 1e-12 * std::max(1.0, std::abs(r.min_eigenvalue));
  Index pick = d - 1;
  while (pick > 0 && spec.eigenvalues(pick - 1) <= r.min_eigenvalue + tie) --pick;
  r.witness_vector = PureState::normalized(spec.eigenvectors.col(pick));
  r.anticommutator_trace = x.trace().real();
  r.anticommutator_norm = x.norm();
  if (std::abs(r.anticommutator_trace) > tol.null) {
    r.purity_criterion =
        x.squaredNorm() / (r.anticommutator_trace * r.anticommutator_trace);
  }
  if (r.anticommutator_norm <= tol.null) {
    r.verdict = Verdict::NullAnticommutator;
  } else if (r.min_eigenvalue < -tol.witness) {
    r.verdict = Verdict::NonpositiveWitnessed;
  } else {
    r.verdict = Verdict::Positive;
  }
  return r;
}

WitnessReport witness_anticommutator(const DensityOperator& rho1, const DensityOperator& rho2,
                                     const WitnessTolerances& tol) {
  if (rho1.dim() != rho2.dim()) {
    throw DimensionError("witness_anticommutator: states of dimension " +
                         std::to_string(rho1.dim()) + " and " + std::to_string(rho2.dim()));
  }
  return analyze_anticommutator(linalg::anticommutator(rho1.matrix(), rho2.matrix()), tol);
}

bool qubit_bloch_condition(const BlochVector& b1, const BlochVector& b2) {
  const double dot = b1.dot(b2);
  return b1.dot(b1) + b2.dot(b2) <= 1.0 + dot * dot;
}

std::optional<double> closed_form_purity(const PureState& psi, const DensityOperator& rho2,
                                         double null_tol) {
  if (psi.dim() != rho2.dim()) throw DimensionError("closed_form_purity: dimension mismatch");
  const SpectralDecomposition& spec = rho2.spectrum();
  double s1 = 0;
  double s2 = 0;
  for (Index i = 0; i < spec.dim(); ++i) {
    const double f2 = std::norm(psi.amplitudes().dot(spec.eigenvectors.col(i)));
    const double lam = spec.eigenvalues(i);
    s1 += lam * f2;
    s2 += lam * lam * f2;
  }
  if (2 * s1 <= null_tol) return std::nullopt;
  return (s1 * s1 + s2) / (2 * s1 * s1);
}

PureMixedResult pure_mixed_test(const PureState& psi, const DensityOperator& rho2,
                                const WitnessTolerances& tol) {
  if (psi.dim() != rho2.dim()) throw DimensionError("pure_mixed_test: dimension mismatch");
  const DensityOperator rho1 = pure_density(psi);
  PureMixedResult out;
  out.report = witness_anticommutator(rho1, rho2, tol);
  out.commutator_norm = linalg::commutator(rho1.matrix(), rho2.matrix()).norm();
  out.closed_form_purity = closed_form_purity(psi, rho2, tol.null);
  if (out.closed_form_purity && out.report.purity_criterion) {
    const double a = *out.closed_form_purity;
    const double b = *out.report.purity_criterion;
    const double gap = std::abs(a - b);
    if (gap > 1e-10 * std::max(1.0, std::abs(b))) {
      throw AgreementError("pure_mixed_test: closed-form purity " + std::to_string(a) +
                               " disagrees with eigen purity " + std::to_string(b),
                           gap);
    }
  }
  return out;
}

double amplified_epsilon(const RealVector& eigenvalues, std::uint64_t n) {
  const double top = eigenvalues(0);
  double rest = 0;
  for (Index i = 1; i < eigenvalues.size(); ++i) {
    const double ratio = std::max(eigenvalues(i), 0.0) / top;
    rest += std::pow(ratio, static_cast<double>(n));
  }
  return rest / (1.0 + rest);
}

DensityOperator amplify(const DensityOperator& rho, std::uint64_t n) {
  if (n < 1) throw InvalidInput("amplify: n must be at least 1");
  const SpectralDecomposition& spec = rho.spectrum();
  const double top = spec.eigenvalues(0);
  RealVector w(spec.dim());
  for (Index i = 0; i < spec.dim(); ++i) {
    w(i) = std::pow(std::max(spec.eigenvalues(i), 0.0) / top, static_cast<double>(n));
  }
  w /= w.sum();
  return DensityOperator::from_spectrum(w, spec.eigenvectors);
}

AmplificationPlan plan_amplification(const DensityOperator& rho, double target_epsilon,
                                     const WitnessTolerances& tol) {
  if (!(target_epsilon > 0.0 && target_epsilon < 1.0)) {
    throw InvalidInput("plan_amplification: target epsilon must lie in (0, 1)");
  }
  const RealVector& lam = rho.spectrum().eigenvalues;
  AmplificationPlan plan;
  plan.requested_epsilon = target_epsilon;

  const double top = lam(0);
  const double gap = lam.size() > 1 ? top - lam(1) : top;
  if (gap <= tol.state.degeneracy * top) {
    plan.n = 0;
    plan.achieved_epsilon = 1.0 - top;
    plan.degenerate = true;
    return plan;
  }

  auto eps = [&](std::uint64_t n) { return amplified_epsilon(lam, n); };
  if (eps(1) <= target_epsilon) {
    plan.n = 1;
    plan.achieved_epsilon = eps(1);
    return plan;
  }
  // eps(n) is nonincreasing: gallop to a bracket, then bisect for the first hit.
  std::uint64_t lo = 1;
  std::uint64_t hi = 2;
  while (eps(hi) > target_epsilon) {
    if (hi >= tol.plan_cap) {
      plan.n = tol.plan_cap;
      plan.achieved_epsilon = eps(tol.plan_cap);
      plan.capped = true;
      plan.degenerate = true;
      return plan;
    }
    lo = hi;
    hi = std::min(hi * 2, tol.plan_cap);
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (eps(mid) <= target_epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  plan.n = hi;
  plan.achieved_epsilon = eps(hi);
  return plan;
}

OverlapData OverlapData::from(const PureDecomposition& d1, const PureDecomposition& d2) {
  if (d1.psi.dim() != d2.psi.dim()) throw DimensionError("OverlapData: dimension mismatch");
  OverlapData o;
  o.f = d1.psi.overlap(d2.psi);
  const ComplexVector& p1 = d1.psi.amplitudes();
  const ComplexVector& p2 = d2.psi.amplitudes();
  if (d1.eta) o.g1 = std::max(0.0, p2.dot(d1.eta->matrix() * p2).real());
  if (d2.eta) o.g2 = std::max(0.0, p1.dot(d2.eta->matrix() * p1).real());
  o.eps1 = d1.epsilon;
  o.eps2 = d2.epsilon;
  return o;
}

namespace {

void require_interior_overlap(const OverlapData& o, double boundary_tol, const char* what) {
  const double af = o.abs_f();
  if (af <= boundary_tol) {
    throw BoundaryError(std::string(what) +
                        ": |<psi1|psi2>| ~ 0, use the orthogonal-limit analysis");
  }
  if (af >= 1.0 - boundary_tol) {
    throw BoundaryError(std::string(what) +
                        ": |<psi1|psi2>| ~ 1, use the parallel-limit analysis");
  }
}

}  // namespace

bool near_pure_condition(const OverlapData& o, double boundary_tol) {
  require_interior_overlap(o, boundary_tol, "near_pure_condition");
  const double f2 = std::norm(o.f);
  return o.eps1 * o.g1 + o.eps2 * o.g2 < (1.0 - f2) / 2.0;
}

double first_order_purity(const OverlapData& o, double boundary_tol) {
  require_interior_overlap(o, boundary_tol, "first_order_purity");
  const double f2 = std::norm(o.f);
  const double shrink = 1.0 - 2.0 * o.eps1 - 2.0 * o.eps2;
  const double mix = 2.0 * o.eps1 * o.g1 + 2.0 * o.eps2 * o.g2;
  const double num = shrink * (1.0 + f2) + mix;
  const double den = 2.0 * (shrink * f2 + mix);
  if (den <= 1e-14) {
    throw DegenerateDenominator("first_order_purity: denominator " + std::to_string(den));
  }
  return num / den;
}

NestedResult nested_witness(const DensityOperator& sigma1, const DensityOperator& sigma2,
                            double target_epsilon, const WitnessTolerances& tol,
                            const NestedOptions& opts) {
  if (sigma1.dim() != sigma2.dim()) throw DimensionError("nested_witness: dimension mismatch");
  // Degeneracy first: a maximally mixed input commutes with everything, but the reason it
  // cannot be purified is its spectrum.
  const PureDecomposition base1 = pure_decompose(sigma1, tol.state);
  const PureDecomposition base2 = pure_decompose(sigma2, tol.state);
  if (base1.degenerate || base2.degenerate) {
    throw DegenerateSpectrum("nested_witness: largest eigenvalue is degenerate");
  }
  const double comm = linalg::commutator(sigma1.matrix(), sigma2.matrix()).norm();
  if (comm <= tol.commutator) {
    throw CommutingInputs("nested_witness: inputs commute (||[s1,s2]||_F = " +
                          std::to_string(comm) + ")");
  }
  // Amplification keeps the eigenvectors, so |f| is fixed from the start.
  const double af = std::abs(base1.psi.overlap(base2.psi));
  if (af <= tol.overlap_boundary || af >= 1.0 - tol.overlap_boundary) {
    throw ConditionUnreachable("nested_witness: |<psi1|psi2>| = " + std::to_string(af) +
                               " is on a boundary");
  }

  NestedResult out;
  double target = target_epsilon;
  for (;;) {
    out.plan1 = plan_amplification(sigma1, target, tol);
    out.plan2 = plan_amplification(sigma2, target, tol);
    if (out.plan1.degenerate || out.plan2.degenerate) {
      throw DegenerateSpectrum("nested_witness: amplification did not reach epsilon " +
                               std::to_string(target) + " within the iteration cap");
    }
    const DensityOperator rho1 = amplify(sigma1, out.plan1.n);
    const DensityOperator rho2 = amplify(sigma2, out.plan2.n);
    out.overlap = OverlapData::from(pure_decompose(rho1, tol.state),
                                    pure_decompose(rho2, tol.state));
    out.condition_lhs = out.overlap.eps1 * out.overlap.g1 + out.overlap.eps2 * out.overlap.g2;
    out.condition_rhs = (1.0 - std::norm(out.overlap.f)) / 2.0;
    out.condition_met = near_pure_condition(out.overlap, tol.overlap_boundary);
    if (out.condition_met || !opts.tighten || out.tightenings >= opts.max_tightenings) {
      out.report = witness_anticommutator(rho1, rho2, tol);
      return out;
    }
    target /= 2.0;
    ++out.tightenings;
  }
}

OrthogonalAnalysis orthogonal_limit_analysis(const PureDecomposition& d1,
                                             const PureDecomposition& d2,
                                             double boundary_tol) {
  if (d1.psi.dim() != d2.psi.dim()) {
    throw DimensionError("orthogonal_limit_analysis: dimension mismatch");
  }
  const double af = std::abs(d1.psi.overlap(d2.psi));
  if (af > boundary_tol) {
    throw PreconditionError("orthogonal_limit_analysis: |<psi1|psi2>| = " +
                            std::to_string(af) + " is not ~0");
  }
  const ComplexVector& p1 = d1.psi.amplitudes();
  const ComplexVector& p2 = d2.psi.amplitudes();
  OrthogonalAnalysis a;
  if (d1.eta) {
    const ComplexVector v = d1.eta->matrix() * p2;
    a.g1 = std::max(0.0, p2.dot(v).real());
    a.var1 = std::max(0.0, v.squaredNorm() - a.g1 * a.g1);
  }
  if (d2.eta) {
    const ComplexVector v = d2.eta->matrix() * p1;
    a.g2 = std::max(0.0, p1.dot(v).real());
    a.var2 = std::max(0.0, v.squaredNorm() - a.g2 * a.g2);
  }
  const double e1 = d1.epsilon;
  const double e2 = d2.epsilon;
  a.lhs = 2 * e1 * e1 * a.var1 + 2 * e2 * e2 * a.var2 - 8 * e1 * e2 * a.g1 * a.g2;
  a.verdict = a.lhs > 0;
  const double cross = 2 * a.g1 * a.g2;
  const double prod = a.var1 * a.var2;
  if (prod <= cross * cross) {
    // (cross - sqrt(cross^2 - prod)) / var2, rationalized so var2 -> 0 stays finite.
    const double den = cross + std::sqrt(std::max(0.0, cross * cross - prod));
    if (den > 0 && a.var1 > 0) a.ratio_bound = a.var1 / den;
  }
  return a;
}

double parallel_limit_excess(const PureDecomposition& d1, const PureDecomposition& d2,
                             double boundary_tol) {
  if (d1.psi.dim() != d2.psi.dim()) {
    throw DimensionError("parallel_limit_excess: dimension mismatch");
  }
  const double af = std::abs(d1.psi.overlap(d2.psi));
  if (af < 1.0 - boundary_tol) {
    throw PreconditionError("parallel_limit_excess: |<psi1|psi2>| = " + std::to_string(af) +
                            " is not ~1");
  }
  constexpr double kLeak = 1e-8;
  if (d1.eta && (d1.eta->matrix() * d2.psi.amplitudes()).norm() > kLeak) {
    throw PreconditionError("parallel_limit_excess: eta1|psi2> does not vanish");
  }
  if (d2.eta && (d2.eta->matrix() * d1.psi.amplitudes()).norm() > kLeak) {
    throw PreconditionError("parallel_limit_excess: eta2|psi1> does not vanish");
  }
  const ComplexMatrix x = linalg::anticommutator(d1.reconstruct(), d2.reconstruct());
  const double tr = x.trace().real();
  return x.squaredNorm() - tr * tr;
}

namespace {

void require_projector(const ComplexMatrix& p, Index rank, const char* what) {
  linalg::require_square(p, what);
  const double scale = std::max(1.0, p.norm());
  if (linalg::hermiticity_defect(p) > 1e-10 * scale) {
    throw ProjectorError(std::string(what) + ": not Hermitian");
  }
  if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ProjectorError(std::string(what) + ": not idempotent");
  }
  if (rank < 1 || rank > p.rows() || std::abs(p.trace().real() - static_cast<double>(rank)) > 1e-8) {
    throw ProjectorError(std::string(what) + ": rank does not match " + std::to_string(rank));
  }
}

DensityOperator degenerate_state(const ComplexMatrix& p, Index rank, double eps,
                                 const std::optional<DensityOperator>& eta) {
  const Index d = p.rows();
  ComplexMatrix m = p / static_cast<double>(rank);
  if (eta) {
    m = (1.0 - eps) * m + eps * eta->matrix();
  } else if (rank < d) {
    const ComplexMatrix complement = ComplexMatrix::Identity(d, d) - p;
    m = (1.0 - eps) * m + eps * complement / static_cast<double>(d - rank);
  }
  return make_density(m);
}

}  // namespace

DegenerateAnalysis degenerate_projector_analysis(const ComplexMatrix& p1, Index d1,
                                                 const ComplexMatrix& p2, Index d2, double eps1,
                                                 double eps2,
                                                 const std::optional<DensityOperator>& eta1,
                                                 const std::optional<DensityOperator>& eta2,
                                                 const WitnessTolerances& tol) {
  require_projector(p1, d1, "degenerate_projector_analysis(P1)");
  require_projector(p2, d2, "degenerate_projector_analysis(P2)");
  if (p1.rows() != p2.rows()) {
    throw DimensionError("degenerate_projector_analysis: dimension mismatch");
  }
  const ComplexMatrix prod = p1 * p2;
  const double t1 = prod.trace().real();
  const double t2 = (prod * prod).trace().real();

  DegenerateAnalysis a;
  a.bracket = t2 + t1 - 2.0 * t1 * t1;
  const double dd = static_cast<double>(d1 * d2);
  a.leading = 2.0 * (1.0 - 2.0 * eps1 - 2.0 * eps2) * a.bracket / (dd * dd);
  a.commuting = linalg::commutator(p1, p2).norm() <= tol.commutator;
  if (a.bracket > tol.witness && !a.commuting) {
    a.verdict = DegenerateVerdict::PositiveWitnessable;
  } else if (a.bracket < -tol.witness) {
    a.verdict = DegenerateVerdict::NegativeInconclusive;
  } else {
    a.verdict = DegenerateVerdict::Undetermined;
  }
  if (a.verdict == DegenerateVerdict::NegativeInconclusive) {
    const DensityOperator rho1 = degenerate_state(p1, d1, eps1, eta1);
    const DensityOperator rho2 = degenerate_state(p2, d2, eps2, eta2);
    a.direct_min_eigenvalue = witness_anticommutator(rho1, rho2, tol).min_eigenvalue;
  }
  return a;
}

}  // namespace qwitness
