// Numerical range, accretivity and sectoriality certificates, the Kato
// factorization A = A_R^{1/2}(I + iX)A_R^{1/2}, acute-angle constants and
// the T_# factor (A^# + I)^{1/2}(A_R + I)^{-1/2}.
#pragma once

#include "opkit/core.hpp"
#include "opkit/fixtures.hpp"
#include "opkit/funcalc.hpp"

#include <stdexcept>

namespace opkit {

struct NumericalRangeBoundary {
  std::vector<Complex> points;
  std::vector<double> angles_used;
};

/// Boundary samples by the rotation method: for θ_k = 2πk/m take a top
/// eigenvector v of Re(e^{-iθ_k} A) and emit v*Av.
inline NumericalRangeBoundary numerical_range_boundary(const ComplexMatrix& a, int m = 256) {
  require_square(a, "numerical range operand");
  require_finite(a, "numerical range operand");
  if (m < 8) throw Error(ErrorKind::InvalidInput, "need at least 8 boundary points");
  NumericalRangeBoundary out;
  out.points.reserve(static_cast<std::size_t>(m));
  out.angles_used.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double theta = 2.0 * kPi * k / m;
    const Complex rot = std::exp(Complex(0.0, -theta));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(rot * a));
    const ComplexVector v = es.eigenvectors().col(a.rows() - 1);
    out.points.push_back(v.dot(a * v));  // dot conjugates the first argument
    out.angles_used.push_back(theta);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Accretivity

struct AccretiveCertificate {
  bool accretive = false;
  double margin = 0.0;               // λ_min(Re A)
  bool resolvent_ok = false;         // ‖(A+ζ)^{-1}‖ ≤ 1/Re ζ on all samples
  double max_resolvent_ratio = 0.0;  // max Re ζ ‖(A+ζ)^{-1}‖
  int samples = 0;
};

inline double accretive_tolerance(const ComplexMatrix& a) { return 1e-10 * op_norm(a); }

/// Accretivity by numerical range (λ_min(Re A) ≥ -tol) and by the resolvent
/// bound on sampled Re ζ > 0. The resolvent test cannot resolve margins
/// below ~1e-3‖A‖ in double precision, so it is only required to agree
/// outside that band; any other disagreement is an internal error.
inline AccretiveCertificate accretive_certificate(const ComplexMatrix& a, int n_resolvent_samples = 32) {
  require_square(a, "accretivity operand");
  require_finite(a, "accretivity operand");
  const Eigen::Index n = a.rows();
  const double scale = std::max(op_norm(a), std::numeric_limits<double>::min());
  AccretiveCertificate c;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  c.margin = es.eigenvalues()(0);
  c.accretive = c.margin >= -1e-10 * scale;

  std::vector<Complex> zetas;
  const int ns = std::max(1, n_resolvent_samples);
  for (int k = 0; k < ns; ++k) {
    const double frac = ns > 1 ? static_cast<double>(k) / (ns - 1) : 0.5;
    const double x = scale * std::pow(10.0, -3.0 + 6.0 * frac);
    const double y = (k % 3 == 0) ? 0.0 : ((k % 3 == 1) ? 0.5 * scale : -0.5 * scale);
    zetas.emplace_back(x, y);
  }
  if (c.margin < 0.0) {
    // Most violating real shift for the bottom eigenvector f of Re A.
    const ComplexVector f = es.eigenvectors().col(0);
    const Complex w = f.dot(a * f);
    const double af2 = (a * f).squaredNorm();
    zetas.emplace_back(af2 / -c.margin, -w.imag());
    zetas.emplace_back(af2 / -c.margin, 0.0);
  }
  c.max_resolvent_ratio = 0.0;
  for (const Complex& z : zetas) {
    const double smin = sigma_min(a + z * ComplexMatrix::Identity(n, n));
    const double ratio = smin > 0.0 ? z.real() / smin : std::numeric_limits<double>::infinity();
    c.max_resolvent_ratio = std::max(c.max_resolvent_ratio, ratio);
  }
  c.samples = static_cast<int>(zetas.size());
  c.resolvent_ok = c.max_resolvent_ratio <= 1.0 + 1e-8;

  const bool unresolvable = !c.accretive && c.margin > -1e-3 * scale;
  if (c.accretive != c.resolvent_ok && !unresolvable)
    throw std::logic_error("accretivity criteria disagree: numerical range vs resolvent bound");
  return c;
}

// ---------------------------------------------------------------------------
// Sectoriality

struct SectorialCertificate {
  bool accretive = false;
  double accretivity_margin = 0.0;
  bool sectorial = false;
  double semi_angle_theta = 0.0;  // radians, in [0, π/2]
  double sampled_theta = 0.0;     // max |arg w| over boundary samples
  int boundary_points = 0;
  double vertex = 0.0;
};

namespace detail {

// Smallest φ in [0, π/2] with λ_max(Im(e^{-iφ} A)) ≤ tol (upper half) or
// λ_max(-Im(e^{iφ} A)) ≤ tol (lower half).
inline double support_angle(const ComplexMatrix& a, bool upper, double tol) {
  const auto g = [&](double phi) {
    const ComplexMatrix m = upper ? ComplexMatrix(imaginary_part(std::exp(Complex(0.0, -phi)) * a))
                                  : ComplexMatrix(-imaginary_part(std::exp(Complex(0.0, phi)) * a));
    return lambda_max_hermitian(m);
  };
  if (g(0.0) <= tol) return 0.0;
  if (g(kPi / 2) > tol) return kPi / 2;
  double lo = 0.0, hi = kPi / 2;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= tol) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace detail

/// Semi-angle with vertex 0. θ is the smallest angle whose supporting rays
/// enclose the numerical range (bisection on rotated Hermitian parts); the
/// boundary samples are kept as a cross-check.
inline SectorialCertificate sectorial_certificate(const ComplexMatrix& a, int m = 256) {
  const NumericalRangeBoundary b = numerical_range_boundary(a, m);
  const double scale = std::max(op_norm(a), std::numeric_limits<double>::min());
  SectorialCertificate c;
  c.boundary_points = m;
  c.accretivity_margin = lambda_min_hermitian(hermitian_part(a));
  c.accretive = c.accretivity_margin >= -1e-10 * scale;

  for (const Complex& w : b.points)
    if (std::abs(w) > 1e-10 * scale) c.sampled_theta = std::max(c.sampled_theta, std::abs(std::arg(w)));

  if (!c.accretive) {
    c.semi_angle_theta = kPi / 2;
    c.sectorial = false;
    return c;
  }
  const double tol = 1e-13 * scale;
  c.semi_angle_theta = std::max(detail::support_angle(a, true, tol), detail::support_angle(a, false, tol));
  c.sectorial = c.semi_angle_theta < kPi / 2 - 1e-8;
  return c;
}

// ---------------------------------------------------------------------------
// Kato factorization

struct KatoFactors {
  ComplexMatrix A_R;
  ComplexMatrix X;
  ComplexMatrix sqrt_A_R;
  ComplexMatrix kernel_projector;  // onto the numerical kernel of A_R
  double reconstruction_residual = 0.0;

  ComplexMatrix reconstruct() const {
    const Eigen::Index n = A_R.rows();
    return sqrt_A_R * (ComplexMatrix::Identity(n, n) + Complex(0.0, 1.0) * X) * sqrt_A_R;
  }
};

/// X = (A_R^{1/2})^+ Im(A) (A_R^{1/2})^+, zero on ker A_R.
inline KatoFactors kato_decompose(const ComplexMatrix& a, double rank_tol = 0.0) {
  require_square(a, "kato operand");
  require_finite(a, "kato operand");
  const ComplexMatrix ar = hermitian_part(a);
  const ComplexMatrix ai = imaginary_part(a);
  if (lambda_min_hermitian(ar) < -1e-10 * std::max(op_norm(a), std::numeric_limits<double>::min()))
    throw Error(ErrorKind::NotAccretive, "Re A is not positive semidefinite");

  const PsdSqrt ps = pinv_psd_sqrt(ar, rank_tol);
  if ((ai * ps.kernel_projector).norm() > 1e-9 * std::max(a.norm(), std::numeric_limits<double>::min()))
    throw Error(ErrorKind::KernelObstruction, "ker(Re A) is not contained in ker(Im A)");

  KatoFactors k;
  k.A_R = ar;
  k.sqrt_A_R = ps.sqrt;
  k.kernel_projector = ps.kernel_projector;
  k.X = hermitian_part(ps.pinv_sqrt * ai * ps.pinv_sqrt);
  k.reconstruction_residual = (k.reconstruct() - a).norm();
  return k;
}

// ---------------------------------------------------------------------------
// Principal square root

/// Principal square root of a sectorial matrix: A·A^{-1/2} from the
/// resolvent integral when λ_min(Re A) > 0, else through an eigenbasis.
inline ComplexMatrix sectorial_sqrt(const ComplexMatrix& a, const QuadratureConfig& cfg = {}) {
  require_square(a, "sqrt operand");
  const double scale = std::max(op_norm(a), std::numeric_limits<double>::min());
  ComplexMatrix r;
  if (lambda_min_hermitian(hermitian_part(a)) > 1e-12 * scale) {
    r = accretive_power(a, Complex(0.5, 0.0), 0.0, cfg);
  } else {
    const Eigenbasis eb = eigenbasis(a);
    ComplexVector d(a.rows());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::sqrt(eb.eigenvalues(i));
    r = eb.vectors * d.asDiagonal() * eb.inverse;
  }
  if ((r * r - a).norm() > 1e-8 * a.norm() + 1e-300)
    throw Error(ErrorKind::PowerComputationFailed, "square root cross-check failed");
  return r;
}

// ---------------------------------------------------------------------------
// Acute angle

struct AcuteAngleReport {
  ComplexMatrix Y;
  double eps1 = 0.0;  // λ_min(Re Y)
  double eps2 = 0.0;  // λ_min(Re Y^{-1})
  double eps0 = 0.0;
  double alpha = 0.5;
  bool shifted = false;
  int samples = 0;
  int violations_max_form = 0;      // Re((A*)^α f, A^α f) ≥ ε0 max(‖A^α f‖², ‖(A*)^α f‖²)
  int violations_product_form = 0;  // Re((A*)^α f, A^α f) ≥ ε0 ‖A^α f‖ ‖(A*)^α f‖
};

/// Y = (A + sI)^α ((A* + sI)^α)^{-1} with s = 1 (shifted) or 0, plus a
/// randomized check of both acute-angle inequalities on unit vectors.
inline AcuteAngleReport acute_angle(const ComplexMatrix& a, double alpha, bool shifted, Seed seed = {0},
                                    int samples = 1000, const QuadratureConfig& cfg = {}) {
  require_square(a, "acute_angle operand");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw Error(ErrorKind::InvalidInput, "alpha must lie in (0, 1/2]");
  const SectorialCertificate cert = sectorial_certificate(a);
  if (!cert.sectorial) throw Error(ErrorKind::NotSectorial, "operand is not sectorial with vertex 0");
  const double scale = op_norm(a);
  if (!shifted && !(sigma_min(a) > 1e-10 * scale))
    throw Error(ErrorKind::NotInvertible, "unshifted acute angle needs an invertible operand");

  const double s = shifted ? 1.0 : 0.0;
  ComplexMatrix pa, ps;
  try {
    pa = accretive_power(a, Complex(alpha, 0.0), s, cfg);
    ps = accretive_power(a.adjoint(), Complex(alpha, 0.0), s, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotInvertible || e.kind() == ErrorKind::PowerComputationFailed ||
        e.kind() == ErrorKind::QuadratureNotConverged)
      throw Error(ErrorKind::PowerComputationFailed, e.what());
    throw;
  }

  AcuteAngleReport r;
  r.alpha = alpha;
  r.shifted = shifted;
  r.Y = pa * ps.partialPivLu().inverse();
  const ComplexMatrix yinv = ps * pa.partialPivLu().inverse();
  r.eps1 = lambda_min_hermitian(hermitian_part(r.Y));
  r.eps2 = lambda_min_hermitian(hermitian_part(yinv));
  r.eps0 = std::min(r.eps1, r.eps2);

  Rng rng(seed);
  const double slack = 1e-8;
  for (int k = 0; k < samples; ++k) {
    const ComplexVector f = gen::unit_vector(a.rows(), rng);
    const ComplexVector x = pa * f;
    const ComplexVector y = ps * f;
    const double lhs = y.dot(x).real();
    const double nx = x.norm(), ny = y.norm();
    if (lhs < (r.eps0 - slack) * std::max(nx * nx, ny * ny)) ++r.violations_max_form;
    if (lhs < (r.eps0 - slack) * nx * ny) ++r.violations_product_form;
  }
  r.samples = samples;
  return r;
}

// ---------------------------------------------------------------------------
// T_#

struct TSharpResult {
  ComplexMatrix T;      // (A^# + I)^{1/2} (A_R + I)^{-1/2}
  ComplexMatrix T_inv;  // (A_R + I)^{1/2} (A^# + I)^{-1/2}
  double sigma_min = 0.0;
  double probe_residual = 0.0;  // relative to ‖S‖
};

/// T_# with A^# = A (adjoint_flag false) or A* (true). The probe checks
/// (T_#^{-1})* (A_R+I)^{-1/2} S (A_R+I)^{-1/2} T_#^{-1}
///   = ((A^#)* + I)^{-1/2} S (A^# + I)^{-1/2}
/// for a random S, with both sides assembled from independently computed powers.
inline TSharpResult t_sharp(const ComplexMatrix& a, bool adjoint_flag, Seed probe_seed = {1},
                            const QuadratureConfig& cfg = {}) {
  require_square(a, "t_sharp operand");
  if (!sectorial_certificate(a).sectorial) throw Error(ErrorKind::NotSectorial, "operand is not sectorial");
  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a_sharp = adjoint_flag ? ComplexMatrix(a.adjoint()) : a;
  const ComplexMatrix ar1 = hermitian_part(a) + eye;

  ComplexMatrix half, neg_half, neg_half_adj;
  try {
    half = accretive_power(a_sharp, Complex(0.5, 0.0), 1.0, cfg);
    neg_half = accretive_power(a_sharp, Complex(-0.5, 0.0), 1.0, cfg);
    neg_half_adj = accretive_power(ComplexMatrix(a_sharp.adjoint()), Complex(-0.5, 0.0), 1.0, cfg);
  } catch (const Error& e) {
    throw Error(ErrorKind::PowerComputationFailed, e.what());
  }
  const ComplexMatrix ar_half = psd_power(ar1, 0.5);
  const ComplexMatrix ar_neg_half = psd_power(ar1, -0.5);

  TSharpResult out;
  out.T = half * ar_neg_half;
  out.T_inv = ar_half * neg_half;
  out.sigma_min = sigma_min(out.T);
  if (!(out.sigma_min > 0.0)) throw Error(ErrorKind::NotInvertible, "T_# is singular");

  Rng rng(probe_seed);
  const ComplexMatrix s = gen::ginibre(n, n, rng);
  const ComplexMatrix lhs = out.T_inv.adjoint() * ar_neg_half * s * ar_neg_half * out.T_inv;
  const ComplexMatrix rhs = neg_half_adj * s * neg_half;
  out.probe_residual = (lhs - rhs).norm() / s.norm();
  return out;
}

}  // namespace opkit
