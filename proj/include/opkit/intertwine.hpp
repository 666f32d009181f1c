// Residual reporters for intertwining relations V A1 = A2 V and their
// consequences (adjoint intertwining, spectral projections, factorized forms).
#pragma once

#include "opkit/core.hpp"
#include "opkit/fixtures.hpp"
#include "opkit/funcalc.hpp"

#include <optional>

namespace opkit {

struct ResidualReport {
  double r_primal = 0.0;   // ‖V A1 - A2 V‖_F
  double r_adjoint = 0.0;  // ‖V A1* - A2* V‖_F
  std::optional<double> r_factored;
};

inline void check_dimensions(const IntertwineTriple& t) {
  if (t.A1.rows() != t.A1.cols() || t.A2.rows() != t.A2.cols())
    throw Error(ErrorKind::DimensionMismatch, "A1 and A2 must be square");
  if (t.V.cols() != t.A1.rows() || t.V.rows() != t.A2.rows())
    throw Error(ErrorKind::DimensionMismatch, "V must map the A1-space into the A2-space");
}

/// Scale used to make intertwining residuals relative: ‖V‖(‖A1‖ + ‖A2‖).
inline double intertwining_scale(const IntertwineTriple& t) {
  return t.V.norm() * (t.A1.norm() + t.A2.norm()) + std::numeric_limits<double>::min();
}

inline ResidualReport intertwining_residuals(const IntertwineTriple& t) {
  check_dimensions(t);
  ResidualReport r;
  r.r_primal = (t.V * t.A1 - t.A2 * t.V).norm();
  r.r_adjoint = (t.V * t.A1.adjoint() - t.A2.adjoint() * t.V).norm();
  return r;
}

namespace detail {

inline void require_intertwining(const IntertwineTriple& t, double rel_tol) {
  const double r = (t.V * t.A1 - t.A2 * t.V).norm();
  if (r > rel_tol * intertwining_scale(t))
    throw Error(ErrorKind::NotIntertwining, "‖V A1 - A2 V‖ exceeds tolerance");
}

// Hermitian operand for spectral projections: the matrix itself when
// Hermitian, otherwise its real part (requires normality).
inline ComplexMatrix projection_operand(const ComplexMatrix& a) {
  if (hermitian_defect(a) <= 1e-10 * a.norm()) return hermitian_part(a);
  if (normality_defect(a) > 1e-10 * a.squaredNorm()) throw Error(ErrorKind::NotNormal, "operand is not normal");
  return hermitian_part(a);
}

}  // namespace detail

/// ‖V E_{A1}(λ) - E_{A2}(λ) V‖_F with both projections from the resolvent
/// integral. Normal operands use the spectral family of their real parts.
inline double spectral_projection_commutation(const IntertwineTriple& t, double lambda,
                                              const QuadratureConfig& cfg = {}) {
  check_dimensions(t);
  detail::require_intertwining(t, 1e-10);
  const ComplexMatrix e1 = spectral_projection_resolvent(detail::projection_operand(t.A1), lambda, cfg).value;
  const ComplexMatrix e2 = spectral_projection_resolvent(detail::projection_operand(t.A2), lambda, cfg).value;
  return (t.V * e1 - e2 * t.V).norm();
}

/// Complex function pair with φ(λ)ψ(λ) = λ on the relevant spectra.
struct ComplexFunctionPair {
  ScalarFunction phi;
  ScalarFunction psi;
  std::string label;
};

/// ‖φ(A2) V ψ(A1) - V A1‖_F for normal A1, A2.
inline double generalized_intertwined_form(const IntertwineTriple& t, const ComplexFunctionPair& pair,
                                           double intertwining_tol = 1e-10) {
  check_dimensions(t);
  const SpectralDecomposition d1 = diagonalize_normal(t.A1);
  const SpectralDecomposition d2 = diagonalize_normal(t.A2);
  detail::require_intertwining(t, intertwining_tol);

  const auto check_pair = [&](const ComplexVector& ev) {
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const Complex l = ev(i);
      const Complex prod = pair.phi(l) * pair.psi(l);
      if (!(std::abs(prod - l) <= 1e-12 * std::max(1.0, std::abs(l))))
        throw Error(ErrorKind::FunctionPairViolation, "φ(λ)ψ(λ) ≠ λ on the spectrum");
    }
  };
  check_pair(d1.eigenvalues);
  check_pair(d2.eigenvalues);

  const ComplexMatrix psi1 = apply_function(d1, pair.psi);
  const ComplexMatrix phi2 = apply_function(d2, pair.phi);
  return (phi2 * t.V * psi1 - t.V * t.A1).norm();
}

/// Half-open interval (lo, hi]; lo = -inf is allowed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// E_A(L × M) = E_{Re A}(L) E_{Im A}(M) for normal A.
inline ComplexMatrix rect_spectral_projection(const ComplexMatrix& a, const Interval& re_range,
                                              const Interval& im_range, const QuadratureConfig& cfg = {}) {
  require_square(a, "rect_spectral_projection operand");
  if (normality_defect(a) > 1e-10 * std::max(a.squaredNorm(), std::numeric_limits<double>::min()))
    throw Error(ErrorKind::NotNormal, "operand is not normal");
  const Eigen::Index n = a.rows();
  const auto interval_projection = [&](const ComplexMatrix& h, const Interval& iv) -> ComplexMatrix {
    if (!(iv.lo < iv.hi)) return ComplexMatrix::Zero(n, n);
    const ComplexMatrix upper = spectral_projection_resolvent(h, iv.hi, cfg).value;
    if (std::isinf(iv.lo) && iv.lo < 0.0) return upper;
    return upper - spectral_projection_resolvent(h, iv.lo, cfg).value;
  };
  const ComplexMatrix ere = interval_projection(hermitian_part(a), re_range);
  const ComplexMatrix eim = interval_projection(imaginary_part(a), im_range);
  return ere * eim;
}

/// ‖V (A1 - z)^{-1} - (A2 - z)^{-1} V‖_F.
inline double resolvent_intertwining_residual(const IntertwineTriple& t, Complex z) {
  check_dimensions(t);
  const ComplexMatrix r1 = (t.A1 - z * identity(t.A1.rows())).partialPivLu().inverse();
  const ComplexMatrix r2 = (t.A2 - z * identity(t.A2.rows())).partialPivLu().inverse();
  return (t.V * r1 - r2 * t.V).norm();
}

}  // namespace opkit
