// Functional calculus: spectral application of scalar functions, resolvent
// integrals for fractional/complex powers of m-accretive matrices, imaginary
// powers, and spectral projections of Hermitian matrices obtained from a
// resolvent integral.
#pragma once

#include "opkit/core.hpp"
#include "opkit/quadrature.hpp"

#include <functional>
#include <optional>

namespace opkit {

using ScalarFunction = std::function<Complex(Complex)>;

/// Q diag(f(λ)) Q* for a unitary spectral decomposition.
inline ComplexMatrix apply_function(const SpectralDecomposition& d, const ScalarFunction& f) {
  const Eigen::Index n = d.eigenvalues.size();
  ComplexVector fl(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fl(i) = f(d.eigenvalues(i));
    if (!std::isfinite(fl(i).real()) || !std::isfinite(fl(i).imag()))
      throw Error(ErrorKind::FunctionDomainError, "function is not finite at an eigenvalue");
  }
  return d.eigenvectors * fl.asDiagonal() * d.eigenvectors.adjoint();
}

/// Real power of a Hermitian PSD matrix; eigenvalues clipped at 0.
inline ComplexMatrix psd_power(const ComplexMatrix& h, double p) {
  const SpectralDecomposition d = eig_hermitian(h);
  return apply_function(d, [p](Complex l) { return Complex(std::pow(std::max(l.real(), 0.0), p), 0.0); });
}

/// Complex power of a Hermitian positive definite matrix.
inline ComplexMatrix pd_complex_power(const ComplexMatrix& h, Complex p) {
  const SpectralDecomposition d = eig_hermitian(h);
  return apply_function(d, [p](Complex l) {
    if (l.real() <= 0.0) return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return std::exp(p * std::log(l.real()));
  });
}

// ---------------------------------------------------------------------------
// Resolvent-integral powers

enum class Substitution { log_substitution };

struct QuadratureConfig {
  double rel_tol = 1e-10;
  int max_panels = 4096;
  Substitution substitution = Substitution::log_substitution;
  // Discarded tails are bounded by rel_tol / truncation_margin (relative).
  double truncation_margin = 10.0;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw Error(ErrorKind::InvalidInput, "rel_tol must lie in (0, 1e-2]");
    if (max_panels < 4) throw Error(ErrorKind::InvalidInput, "max_panels must be at least 4");
    if (!(truncation_margin > 0.0)) throw Error(ErrorKind::InvalidInput, "truncation_margin must be positive");
  }
};

struct PowerResult {
  ComplexMatrix value;
  Complex exponent;
  double estimated_error = 0.0;
  int panels_used = 0;
};

namespace detail {

inline void require_accretive(const ComplexMatrix& s, double& margin) {
  margin = lambda_min_hermitian(hermitian_part(s));
  const double scale = op_norm(s);
  if (margin < -1e-10 * scale) throw Error(ErrorKind::NotAccretive, "λ_min(Re S) is negative");
}

// (S + shift I)^{-z} = sin(πz)/π ∫_0^∞ t^{-z} (S + (t + shift) I)^{-1} dt,
// evaluated in the Schur basis of S after the substitution t = e^u.
inline PowerResult balakrishnan(const ComplexMatrix& s, Complex z, double shift, const QuadratureConfig& cfg) {
  cfg.validate();
  require_square(s, "power operand");
  require_finite(s, "power operand");
  const double a = z.real();
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::ReOutOfRange, "Re z must lie in (0, 1)");

  double margin = 0.0;
  require_accretive(s, margin);
  // Numerical range of S + (t + shift) lies in Re >= t + bound_shift.
  const double bound_shift = shift + std::max(margin, 0.0);
  if (!(bound_shift > 0.0))
    throw Error(ErrorKind::NotInvertible, "unshifted power needs λ_min(Re A) > 0");

  const Eigen::Index n = s.rows();
  Eigen::ComplexSchur<ComplexMatrix> schur(s);
  const ComplexMatrix& r = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();

  // Spectral radius of the result bounds its norm from below.
  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex mu = r(i, i) + shift;
    radius = std::max(radius, std::abs(std::exp(-z * std::log(mu))));
  }
  const double prefactor = std::abs(std::sin(kPi * z)) / kPi;
  const double tail_tol = cfg.rel_tol / cfg.truncation_margin * radius;

  // Upper tail: pref ∫_T^∞ t^{-a}/(t + m) dt <= pref T^{-a}/a.
  const double u_max = std::log(prefactor / (a * tail_tol)) / a;
  // Lower tail: pref ∫_0^τ t^{-a}/m dt = pref τ^{1-a}/((1-a) m).
  const double u_min = std::log(tail_tol * (1.0 - a) * bound_shift / prefactor) / (1.0 - a);
  if (!(u_min < u_max) || !std::isfinite(u_min) || !std::isfinite(u_max))
    throw Error(ErrorKind::PowerComputationFailed, "degenerate truncation window");

  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const Complex one_minus_z = 1.0 - z;
  quad::MatrixIntegrand integrand = [&](double u) -> ComplexMatrix {
    const double t = std::exp(u);
    ComplexMatrix shifted = r;
    shifted.diagonal().array() += Complex(t + shift, 0.0);
    const Complex weight = std::exp(one_minus_z * u);
    return weight * shifted.triangularView<Eigen::Upper>().solve(eye);
  };

  const int initial = std::max(4, static_cast<int>(std::ceil((u_max - u_min) / 2.0)));
  if (initial > cfg.max_panels)
    throw Error(ErrorKind::QuadratureNotConverged, "truncation window needs more than max_panels panels");
  const auto res = quad::integrate_doubling(integrand, u_min, u_max, initial, cfg.max_panels, n, n,
                                            [&](const ComplexMatrix& v) { return cfg.rel_tol * op_norm(v); });
  if (!res.converged)
    throw Error(ErrorKind::QuadratureNotConverged, "error estimate exceeds rel_tol at max_panels");

  const Complex c = std::sin(kPi * z) / kPi;
  PowerResult out;
  out.value = c * (q * res.value * q.adjoint());
  out.exponent = -z;
  out.estimated_error = prefactor * res.estimated_error + 2.0 * tail_tol;
  out.panels_used = res.panels_used;
  return out;
}

}  // namespace detail

/// (S + I)^{-α} for m-accretive S and α in (0, 1).
inline PowerResult frac_power_m_accretive(const ComplexMatrix& s, double alpha, const QuadratureConfig& cfg = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in (0, 1)");
  return detail::balakrishnan(s, Complex(alpha, 0.0), 1.0, cfg);
}

/// (S + I)^{-z} for m-accretive S and Re z in (0, 1).
inline PowerResult complex_power(const ComplexMatrix& s, Complex z, const QuadratureConfig& cfg = {}) {
  return detail::balakrishnan(s, z, 1.0, cfg);
}

/// Bound on ‖(S+I)^{-z}‖ valid for every m-accretive S.
inline double complex_power_norm_bound(Complex z) {
  return std::abs(std::sin(kPi * z) / std::sin(kPi * z.real()));
}

/// Principal power (S + shift I)^p for accretive S, with p in (-1, 1) (complex
/// exponents allowed: Re p in (-1, 1)). Positive exponents are obtained as
/// (S + shift) (S + shift)^{-(1-p)}. shift = 0 requires λ_min(Re S) > 0.
inline ComplexMatrix accretive_power(const ComplexMatrix& s, Complex p, double shift,
                                     const QuadratureConfig& cfg = {}) {
  require_square(s, "power operand");
  const Eigen::Index n = s.rows();
  const ComplexMatrix base = s + shift * ComplexMatrix::Identity(n, n);
  if (p == Complex(0.0, 0.0)) return ComplexMatrix::Identity(n, n);
  if (p == Complex(1.0, 0.0)) return base;
  try {
    if (p.real() < 0.0 && p.real() > -1.0) return detail::balakrishnan(s, -p, shift, cfg).value;
    if (p.real() > 0.0 && p.real() < 1.0) return base * detail::balakrishnan(s, 1.0 - p, shift, cfg).value;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::QuadratureNotConverged)
      throw Error(ErrorKind::PowerComputationFailed, e.what());
    throw;
  }
  throw Error(ErrorKind::ReOutOfRange, "exponent real part must lie in (-1, 1)");
}

// ---------------------------------------------------------------------------
// Diagonalizable matrices and imaginary powers

struct Eigenbasis {
  ComplexVector eigenvalues;
  ComplexMatrix vectors;  // unit-norm columns
  ComplexMatrix inverse;
  double condition = 0.0;
};

inline Eigenbasis eigenbasis(const ComplexMatrix& a, double max_condition = 1e8) {
  require_square(a, "eigenbasis input");
  require_finite(a, "eigenbasis input");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NotDiagonalizable, "eigensolver failed");
  Eigenbasis out;
  out.eigenvalues = es.eigenvalues();
  out.vectors = es.eigenvectors();
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) out.vectors.col(j).normalize();
  out.condition = condition_number(out.vectors);
  if (!(out.condition <= max_condition))
    throw Error(ErrorKind::NotDiagonalizable, "eigenvector matrix condition number exceeds limit");
  out.inverse = out.vectors.partialPivLu().inverse();
  return out;
}

/// (A + I)^{iγ} = exp(iγ log(A + I)) with the principal logarithm, for
/// diagonalizable A with spectrum in the closed right half-plane (this covers
/// matrices similar to a PSD matrix, which need not be accretive).
inline ComplexMatrix imaginary_power(const ComplexMatrix& a, double gamma) {
  require_square(a, "imaginary_power input");
  const Eigen::Index n = a.rows();
  if (gamma == 0.0) return ComplexMatrix::Identity(n, n);
  const Eigenbasis eb = eigenbasis(a);
  const double tol = 1e-10 * std::max(op_norm(a), std::numeric_limits<double>::min());
  for (Eigen::Index i = 0; i < n; ++i)
    if (eb.eigenvalues(i).real() < -tol) throw Error(ErrorKind::NotAccretive, "spectrum leaves the closed right half-plane");
  ComplexVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(Complex(0.0, gamma) * std::log(eb.eigenvalues(i) + 1.0));
  return eb.vectors * d.asDiagonal() * eb.inverse;
}

// ---------------------------------------------------------------------------
// Spectral projections from the resolvent integral

struct SpectralProjectionResult {
  ComplexMatrix value;
  double estimated_error = 0.0;
  int panels_used = 0;
  Eigen::Index exact_hits = 0;  // eigenvalues equal to λ (sign-0 convention)
};

inline constexpr double kDefaultGapTol = 1e-6;

/// E_H(λ) = I - ½[U + U²], U = (2/π) ∫_0^∞ (H-λ)[(H-λ)² + η²]^{-1} dη,
/// with the η-integral evaluated by quadrature on the matrix resolvent.
/// Eigenvalues within 1e-12·max(1,‖H‖) of λ count as exact hits and are
/// deflated so their sign is 0 (right-continuous convention).
inline SpectralProjectionResult spectral_projection_resolvent(const ComplexMatrix& h, double lambda,
                                                              const QuadratureConfig& cfg = {},
                                                              double gap_tol = kDefaultGapTol) {
  cfg.validate();
  require_square(h, "spectral projection operand");
  require_finite(h, "spectral projection operand");
  if (!std::isfinite(lambda)) throw Error(ErrorKind::InvalidInput, "lambda must be finite");
  const double hn = h.norm();
  if (hermitian_defect(h) > 1e-10 * hn) throw Error(ErrorKind::NotHermitian, "operand is not Hermitian");

  const Eigen::Index n = h.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix k = hermitian_part(h) - lambda * eye;
  const double scale = std::max(op_norm(h), std::numeric_limits<double>::min());
  const double hit_tol = 1e-12 * std::max(1.0, scale);

  // Singular values of the Hermitian K are the distances |λ_i - λ|.
  Eigen::JacobiSVD<ComplexMatrix> sv(k, Eigen::ComputeThinV);
  const RealVector& sig = sv.singularValues();
  Eigen::Index keep = 0;
  while (keep < n && sig(keep) > hit_tol) ++keep;
  const double gap = keep > 0 ? sig(keep - 1) : 0.0;
  if (keep > 0 && gap < gap_tol * scale)
    throw Error(ErrorKind::EigenvalueTooClose, "λ lies within the gap tolerance of an eigenvalue");

  SpectralProjectionResult out;
  out.exact_hits = n - keep;
  if (keep == 0) {
    out.value = eye;
    return out;
  }

  const ComplexMatrix basis = sv.matrixV().leftCols(keep);
  const ComplexMatrix k1 = hermitian_part(basis.adjoint() * k * basis);
  const ComplexMatrix eye1 = ComplexMatrix::Identity(keep, keep);
  const double kn = sig(0);

  // Tails: lower ≤ (2/π) η_min / gap, upper ≤ (2/π) ‖K‖ / η_max.
  const double tail_tol = cfg.rel_tol / cfg.truncation_margin;
  const double u_min = std::log(tail_tol * gap * kPi / 2.0);
  const double u_max = std::log(2.0 * kn / (kPi * tail_tol));

  quad::MatrixIntegrand integrand = [&](double u) -> ComplexMatrix {
    const double eta = std::exp(u);
    ComplexMatrix shifted = k1;
    shifted.diagonal().array() += Complex(0.0, eta);
    const ComplexMatrix res = shifted.partialPivLu().solve(eye1);
    // Hermitian part of (K + iη)^{-1} equals K (K² + η²)^{-1}.
    return eta * hermitian_part(res);
  };

  const int initial = std::max(4, static_cast<int>(std::ceil((u_max - u_min) / 2.0)));
  if (initial > cfg.max_panels)
    throw Error(ErrorKind::QuadratureNotConverged, "truncation window needs more than max_panels panels");
  // U has unit norm; absolute and relative tolerance coincide.
  const auto res = quad::integrate_doubling(integrand, u_min, u_max, initial, cfg.max_panels, keep, keep,
                                            [&](const ComplexMatrix&) { return cfg.rel_tol; });
  if (!res.converged) throw Error(ErrorKind::QuadratureNotConverged, "error estimate exceeds rel_tol");

  const ComplexMatrix u1 = (2.0 / kPi) * res.value;
  const ComplexMatrix u_full = basis * u1 * basis.adjoint();
  out.value = hermitian_part(eye - 0.5 * (u_full + u_full * u_full));
  out.estimated_error = (2.0 / kPi) * res.estimated_error * 3.0 + 2.0 * tail_tol;
  out.panels_used = res.panels_used;
  return out;
}

}  // namespace opkit
