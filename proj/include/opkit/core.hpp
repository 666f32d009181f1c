// Dense complex linear algebra primitives shared by every opkit module.
//
// All routines are pure functions of their inputs. Eigen provides the
// underlying factorizations; this header fixes ordering, rank cutoffs and
// error reporting so the rest of the library can rely on them.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace opkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  NotHermitian,
  NotNormal,
  NotPSD,
  NotAccretive,
  NotSectorial,
  NotInvertible,
  NotDiagonalizable,
  NotIntertwining,
  RankDeficiencyConflict,
  FunctionPairViolation,
  FunctionDomainError,
  QuadratureNotConverged,
  ReOutOfRange,
  EigenvalueTooClose,
  KernelObstruction,
  KernelNotTrivial,
  PowerComputationFailed,
  PairNotAdmissible,
  HypothesisViolated,
  ZeroParameter,
  ParseError,
  UnsupportedFormat,
  NonFiniteValue,
  IOError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotAccretive: return "NotAccretive";
    case ErrorKind::NotSectorial: return "NotSectorial";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::NotIntertwining: return "NotIntertwining";
    case ErrorKind::RankDeficiencyConflict: return "RankDeficiencyConflict";
    case ErrorKind::FunctionPairViolation: return "FunctionPairViolation";
    case ErrorKind::FunctionDomainError: return "FunctionDomainError";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::ReOutOfRange: return "ReOutOfRange";
    case ErrorKind::EigenvalueTooClose: return "EigenvalueTooClose";
    case ErrorKind::KernelObstruction: return "KernelObstruction";
    case ErrorKind::KernelNotTrivial: return "KernelNotTrivial";
    case ErrorKind::PowerComputationFailed: return "PowerComputationFailed";
    case ErrorKind::PairNotAdmissible: return "PairNotAdmissible";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Small helpers

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline double fro_norm(const ComplexMatrix& m) { return m.norm(); }

/// Spectral (operator 2-) norm.
inline double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Smallest singular value of a square matrix.
inline double sigma_min(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

inline double condition_number(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be square and non-empty");
}

/// Hermitian part (A + A*)/2.
inline ComplexMatrix hermitian_part(const ComplexMatrix& a) { return (a + a.adjoint()) * 0.5; }

/// Skew part expressed as a Hermitian matrix: (A - A*)/(2i).
inline ComplexMatrix imaginary_part(const ComplexMatrix& a) {
  return (a - a.adjoint()) * Complex(0.0, -0.5);
}

inline double hermitian_defect(const ComplexMatrix& h) { return (h - h.adjoint()).norm(); }

/// Default relative rank cutoff n * eps * 8.
inline double default_rank_tol(Eigen::Index n) { return static_cast<double>(std::max<Eigen::Index>(n, 1)) * kEps * 8.0; }

// ---------------------------------------------------------------------------
// SVD

struct SVDResult {
  ComplexMatrix U_left;    // rows x r, orthonormal columns
  RealVector singular_values;  // length r, descending
  ComplexMatrix V_right;   // cols x r, orthonormal columns
  Eigen::Index numerical_rank = 0;
  // Full thin factors (all min(rows, cols) singular triplets) for callers that
  // need the complement of the numerical range.
  ComplexMatrix U_full;
  RealVector sigma_full;
  ComplexMatrix V_full;
};

/// Rank-truncated SVD. rank_tol = 0 selects default_rank_tol(max(rows, cols)).
inline SVDResult svd(const ComplexMatrix& m, double rank_tol = 0.0) {
  require_finite(m, "svd input");
  if (rank_tol < 0.0) throw Error(ErrorKind::InvalidInput, "rank_tol must be nonnegative");
  if (rank_tol == 0.0) rank_tol = default_rank_tol(std::max(m.rows(), m.cols()));

  SVDResult out;
  Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.U_full = dec.matrixU();
  out.sigma_full = dec.singularValues();
  out.V_full = dec.matrixV();

  const double smax = out.sigma_full.size() > 0 ? out.sigma_full(0) : 0.0;
  Eigen::Index r = 0;
  if (smax > 0.0) {
    while (r < out.sigma_full.size() && out.sigma_full(r) > rank_tol * smax) ++r;
  }
  out.numerical_rank = r;
  out.U_left = out.U_full.leftCols(r);
  out.singular_values = out.sigma_full.head(r);
  out.V_right = out.V_full.leftCols(r);
  return out;
}

// ---------------------------------------------------------------------------
// Spectral decompositions

struct SpectralDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;  // unitary
  bool hermitian_flag = false;

  ComplexMatrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
inline SpectralDecomposition eig_hermitian(const ComplexMatrix& h) {
  require_square(h, "eig_hermitian input");
  require_finite(h, "eig_hermitian input");
  const double scale = h.norm();
  if (hermitian_defect(h) > 1e-10 * scale)
    throw Error(ErrorKind::NotHermitian, "‖H - H*‖_F exceeds 1e-10 ‖H‖_F");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::InvalidInput, "Hermitian eigensolver failed");
  SpectralDecomposition out;
  out.eigenvalues = es.eigenvalues().cast<Complex>();
  out.eigenvectors = es.eigenvectors();
  out.hermitian_flag = true;
  return out;
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double lambda_min_hermitian(const ComplexMatrix& h) { return hermitian_eigenvalues(h)(0); }

inline double lambda_max_hermitian(const ComplexMatrix& h) {
  RealVector ev = hermitian_eigenvalues(h);
  return ev(ev.size() - 1);
}

inline double normality_defect(const ComplexMatrix& a) {
  return (a * a.adjoint() - a.adjoint() * a).norm();
}

/// Unitary diagonalization of a normal matrix via the complex Schur form.
/// Eigenvalues ordered lexicographically by (real, imag).
inline SpectralDecomposition diagonalize_normal(const ComplexMatrix& a, double tol_normality = 1e-10) {
  require_square(a, "diagonalize_normal input");
  require_finite(a, "diagonalize_normal input");
  const double scale2 = a.squaredNorm();
  if (normality_defect(a) > tol_normality * std::max(scale2, std::numeric_limits<double>::min()))
    throw Error(ErrorKind::NotNormal, "‖AA* - A*A‖_F exceeds tolerance");

  Eigen::ComplexSchur<ComplexMatrix> schur(a);
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();
  const Eigen::Index n = a.rows();

  double off = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) off += std::norm(t(i, j));
  if (std::sqrt(off) > std::sqrt(tol_normality) * std::sqrt(scale2) + 1e-300)
    throw Error(ErrorKind::NotNormal, "Schur form is not diagonal");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const Complex a1 = t(x, x), a2 = t(y, y);
    if (a1.real() != a2.real()) return a1.real() < a2.real();
    return a1.imag() < a2.imag();
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = t(order[k], order[k]);
    out.eigenvectors.col(k) = q.col(order[k]);
  }
  out.hermitian_flag = false;
  return out;
}

// ---------------------------------------------------------------------------
// PSD square root with pseudoinverse

struct PsdSqrt {
  ComplexMatrix sqrt;       // H^{1/2}
  ComplexMatrix pinv_sqrt;  // (H^{1/2})^+
  ComplexMatrix kernel_projector;  // projector onto the numerical kernel
  Eigen::Index rank = 0;
};

/// Square root of a Hermitian PSD matrix with its Moore–Penrose pseudoinverse.
/// Eigenvalues in [-1e-8‖H‖, -1e-10‖H‖) are tolerated as roundoff and clipped to 0;
/// anything more negative raises NotPSD. Both roots vanish on the numerical kernel.
inline PsdSqrt pinv_psd_sqrt(const ComplexMatrix& h, double rank_tol = 0.0) {
  const SpectralDecomposition d = eig_hermitian(h);
  const Eigen::Index n = h.rows();
  if (rank_tol == 0.0) rank_tol = default_rank_tol(n);
  RealVector lam = d.eigenvalues.real();
  const double scale = std::max(std::abs(lam(0)), std::abs(lam(n - 1)));
  if (lam(0) < -1e-8 * scale) throw Error(ErrorKind::NotPSD, "eigenvalue below -1e-8 ‖H‖");

  const double cutoff = rank_tol * scale;
  RealVector s(n), si(n), k(n);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = std::max(lam(i), 0.0);
    if (scale > 0.0 && l > cutoff) {
      s(i) = std::sqrt(l);
      si(i) = 1.0 / s(i);
      k(i) = 0.0;
      ++r;
    } else {
      s(i) = 0.0;
      si(i) = 0.0;
      k(i) = 1.0;
    }
  }
  const ComplexMatrix& q = d.eigenvectors;
  PsdSqrt out;
  out.sqrt = q * s.cast<Complex>().asDiagonal() * q.adjoint();
  out.pinv_sqrt = q * si.cast<Complex>().asDiagonal() * q.adjoint();
  out.kernel_projector = q * k.cast<Complex>().asDiagonal() * q.adjoint();
  out.rank = r;
  return out;
}

/// Orthogonal projector onto span of the given orthonormal columns.
inline ComplexMatrix projector(const ComplexMatrix& orthonormal_cols, Eigen::Index dim) {
  if (orthonormal_cols.cols() == 0) return ComplexMatrix::Zero(dim, dim);
  return orthonormal_cols * orthonormal_cols.adjoint();
}

}  // namespace opkit
