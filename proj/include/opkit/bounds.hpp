// Relative and form bounds, Heinz interpolation, subordination constants
// and sandwich factorizations (A+I)^{-1/2} B (A+I)^{-1/2}.
#pragma once

#include "opkit/core.hpp"
#include "opkit/fixtures.hpp"
#include "opkit/funcalc.hpp"
#include "opkit/polar.hpp"
#include "opkit/sectorial.hpp"

#include <utility>

namespace opkit {

/// quadratic = true: ‖Bf‖² ≤ ã²‖Af‖² + b̃²‖f‖².
/// quadratic = false: ‖Bf‖ ≤ a‖Af‖ + b‖f‖.
struct BoundPair {
  double a = 0.0;
  double b = 0.0;
  bool quadratic = false;
};

struct CurvePoint {
  double mu = 0.0;
  double norm = 0.0;
};

struct BoundReport {
  std::vector<BoundPair> pairs;
  std::vector<CurvePoint> curve;
  double form_norm = 0.0;          // ‖|B|^{1/2}(A+I)^{-1/2}‖
  double form_norm_adjoint = 0.0;  // ‖|B*|^{1/2}(A+I)^{-1/2}‖
  double sandwich_norm = 0.0;      // ‖(A+I)^{-1/2} B (A+I)^{-1/2}‖
  // For matrices the relative bound (infimum of admissible a) is always 0.
  double finite_dimensional_relative_bound = 0.0;
};

namespace detail {

inline void require_psd(const ComplexMatrix& a, const char* what) {
  require_square(a, what);
  require_finite(a, what);
  const double scale = std::max(op_norm(a), std::numeric_limits<double>::min());
  if (hermitian_defect(a) > 1e-10 * std::max(a.norm(), std::numeric_limits<double>::min()))
    throw Error(ErrorKind::NotPSD, std::string(what) + " is not Hermitian");
  if (lambda_min_hermitian(hermitian_part(a)) < -1e-10 * scale)
    throw Error(ErrorKind::NotPSD, std::string(what) + " is not positive semidefinite");
}

inline void require_compatible(const ComplexMatrix& b, const ComplexMatrix& a) {
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "B and A must have the same square shape");
}

// (A + I)^{-1/2}: spectral for Hermitian A, resolvent integral otherwise.
inline ComplexMatrix shifted_inv_sqrt(const ComplexMatrix& a, const QuadratureConfig& cfg) {
  const Eigen::Index n = a.rows();
  if (hermitian_defect(a) <= 1e-14 * std::max(a.norm(), std::numeric_limits<double>::min()))
    return psd_power(hermitian_part(a) + ComplexMatrix::Identity(n, n), -0.5);
  try {
    return accretive_power(a, Complex(-0.5, 0.0), 1.0, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::QuadratureNotConverged) throw Error(ErrorKind::PowerComputationFailed, e.what());
    throw;
  }
}

}  // namespace detail

/// Minimal b̃ for each ã: b̃ = sqrt(max(0, λ_max(B*B - ã²A*A))).
inline std::vector<BoundPair> admissible_pairs(const ComplexMatrix& b, const ComplexMatrix& a,
                                               const std::vector<double>& a_grid) {
  detail::require_psd(a, "A");
  detail::require_compatible(b, a);
  const ComplexMatrix btb = b.adjoint() * b;
  const ComplexMatrix ata = a.adjoint() * a;
  std::vector<BoundPair> out;
  out.reserve(a_grid.size());
  for (double at : a_grid) {
    if (!(at >= 0.0) || !std::isfinite(at)) throw Error(ErrorKind::InvalidInput, "a-grid values must be finite and >= 0");
    const double top = lambda_max_hermitian(hermitian_part(btb - at * at * ata));
    out.push_back({at, std::sqrt(std::max(0.0, top)), true});
  }
  return out;
}

/// Linear → quadratic: ã² = (1+ε)a², b̃² = (1+1/ε)b². Quadratic → linear: a = ã, b = b̃.
inline BoundPair convert_pair(const BoundPair& p, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  if (p.quadratic) return {p.a, p.b, false};
  return {std::sqrt(1.0 + eps) * p.a, std::sqrt(1.0 + 1.0 / eps) * p.b, true};
}

/// ‖B(A + μI)^{-1}‖ for each μ.
inline std::vector<CurvePoint> relative_bound_curve(const ComplexMatrix& b, const ComplexMatrix& a,
                                                    const std::vector<double>& mus) {
  detail::require_psd(a, "A");
  detail::require_compatible(b, a);
  const SpectralDecomposition d = eig_hermitian(a);
  std::vector<CurvePoint> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorKind::InvalidInput, "mu must be positive");
    const ComplexMatrix res = apply_function(d, [mu](Complex l) { return 1.0 / (std::max(l.real(), 0.0) + mu); });
    out.push_back({mu, op_norm(b * res)});
  }
  return out;
}

struct FormBoundResult {
  double form_norm = 0.0;
  bool bound_ok = false;
};

/// ‖|B|^{1/2}(A+I)^{-1/2}‖ against sqrt(a + b). The pair is first re-checked
/// on 200 random vectors.
inline FormBoundResult form_bound_check(const ComplexMatrix& b, const ComplexMatrix& a, const BoundPair& pair,
                                        Seed seed = {7}) {
  detail::require_psd(a, "A");
  detail::require_compatible(b, a);
  const BoundPair p = pair.quadratic ? convert_pair(pair, 1.0) : pair;
  Rng rng(seed);
  for (int k = 0; k < 200; ++k) {
    const ComplexVector f = gen::unit_vector(a.rows(), rng);
    const double lhs = (b * f).norm();
    const double rhs = p.a * (a * f).norm() + p.b;
    if (lhs > rhs + 1e-10 * std::max(1.0, rhs))
      throw Error(ErrorKind::PairNotAdmissible, "‖Bf‖ ≤ a‖Af‖ + b‖f‖ fails on a sample vector");
  }
  const ComplexMatrix abs_b_half = psd_power(polar(b).absT, 0.5);
  const ComplexMatrix inv_sqrt = psd_power(hermitian_part(a) + identity(a.rows()), -0.5);
  FormBoundResult r;
  r.form_norm = op_norm(abs_b_half * inv_sqrt);
  r.bound_ok = r.form_norm <= std::sqrt(p.a + p.b) + 1e-9;
  return r;
}

/// Right-hand side sqrt(a* + b*)·sqrt(a + b) of the sandwich norm bound.
inline double sandwich_norm_bound(const BoundPair& pair_adjoint, const BoundPair& pair) {
  return std::sqrt(pair_adjoint.a + pair_adjoint.b) * std::sqrt(pair.a + pair.b);
}

struct SandwichFlags {
  bool adjoint_left = false;   // use A_left* in place of A_left
  bool adjoint_right = false;  // use A_right* in place of A_right
};

struct SandwichResult {
  ComplexMatrix value;
  double norm = 0.0;
  double factored_residual = 0.0;
};

/// (A_l + I)^{-1/2} B (A_r + I)^{-1/2}, checked against
/// [|B*|^{1/2}(A_l* + I)^{-1/2}]* U [|B|^{1/2}(A_r + I)^{-1/2}].
inline SandwichResult sandwich(const ComplexMatrix& b, const ComplexMatrix& a_left, const ComplexMatrix& a_right,
                               SandwichFlags flags = {}, const QuadratureConfig& cfg = {}) {
  require_square(a_left, "A_left");
  require_square(a_right, "A_right");
  require_finite(b, "B");
  if (b.rows() != a_left.rows() || b.cols() != a_right.rows())
    throw Error(ErrorKind::DimensionMismatch, "B must map the A_right-space into the A_left-space");
  const ComplexMatrix al = flags.adjoint_left ? ComplexMatrix(a_left.adjoint()) : a_left;
  const ComplexMatrix ar = flags.adjoint_right ? ComplexMatrix(a_right.adjoint()) : a_right;
  double margin = 0.0;
  detail::require_accretive(al, margin);
  detail::require_accretive(ar, margin);

  const ComplexMatrix left = detail::shifted_inv_sqrt(al, cfg);
  const ComplexMatrix right = detail::shifted_inv_sqrt(ar, cfg);
  const ComplexMatrix left_adj = detail::shifted_inv_sqrt(ComplexMatrix(al.adjoint()), cfg);

  SandwichResult r;
  r.value = left * b * right;
  r.norm = op_norm(r.value);

  const PolarFactors pf = polar(b);
  const ComplexMatrix g_left = psd_power(pf.absTstar, 0.5) * left_adj;
  const ComplexMatrix g_right = psd_power(pf.absT, 0.5) * right;
  r.factored_residual = (r.value - g_left.adjoint() * pf.U * g_right).norm();
  return r;
}

/// Five-factor form for sectorial A:
/// (A+I)^{-1/2} B (A+I)^{-1/2}
///   = (T_*^{-1})* [(A_R+I)^{-1/2}|B*|^{1/2}] U [|B|^{1/2}(A_R+I)^{-1/2}] T^{-1}
/// with T = T_# for A and T_* = T_# for A*. Returns the Frobenius residual.
inline double sectorial_sandwich_residual(const ComplexMatrix& b, const ComplexMatrix& a,
                                          const QuadratureConfig& cfg = {}) {
  require_square(a, "A");
  detail::require_compatible(b, a);
  const TSharpResult t = t_sharp(a, false, Seed{1}, cfg);
  const TSharpResult ts = t_sharp(a, true, Seed{1}, cfg);
  const ComplexMatrix ar_neg_half = psd_power(hermitian_part(a) + identity(a.rows()), -0.5);
  const PolarFactors pf = polar(b);
  const ComplexMatrix factored = ts.T_inv.adjoint() * (ar_neg_half * psd_power(pf.absTstar, 0.5)) * pf.U *
                                 (psd_power(pf.absT, 0.5) * ar_neg_half) * t.T_inv;
  const ComplexMatrix inv_sqrt = accretive_power(a, Complex(-0.5, 0.0), 1.0, cfg);
  return (inv_sqrt * b * inv_sqrt - factored).norm();
}

/// Full report used by the CLI.
inline BoundReport bound_report(const ComplexMatrix& b, const ComplexMatrix& a, const std::vector<double>& mus,
                                const std::vector<double>& a_grid) {
  BoundReport r;
  for (const BoundPair& q : admissible_pairs(b, a, a_grid)) {
    r.pairs.push_back(q);
    r.pairs.push_back(convert_pair(q, 1.0));
  }
  r.curve = relative_bound_curve(b, a, mus);
  const ComplexMatrix inv_sqrt = psd_power(hermitian_part(a) + identity(a.rows()), -0.5);
  const PolarFactors pf = polar(b);
  r.form_norm = op_norm(psd_power(pf.absT, 0.5) * inv_sqrt);
  r.form_norm_adjoint = op_norm(psd_power(pf.absTstar, 0.5) * inv_sqrt);
  r.sandwich_norm = op_norm(inv_sqrt * b * inv_sqrt);
  return r;
}

// ---------------------------------------------------------------------------
// Heinz

/// α ↦ λ_min(A^{2α} - B^{2α}) for A, B ⪰ I with B² ⪯ A².
inline std::vector<std::pair<double, double>> heinz_check(const ComplexMatrix& a, const ComplexMatrix& b,
                                                          const std::vector<double>& alphas) {
  require_square(a, "A");
  detail::require_compatible(b, a);
  const auto scale_of = [](const ComplexMatrix& m) { return std::max(m.norm(), std::numeric_limits<double>::min()); };
  if (hermitian_defect(a) > 1e-10 * scale_of(a) || hermitian_defect(b) > 1e-10 * scale_of(b))
    throw Error(ErrorKind::HypothesisViolated, "A and B must be Hermitian");
  const ComplexMatrix ah = hermitian_part(a), bh = hermitian_part(b);
  if (lambda_min_hermitian(ah) < 1.0 - 1e-10 || lambda_min_hermitian(bh) < 1.0 - 1e-10)
    throw Error(ErrorKind::HypothesisViolated, "A and B must satisfy A, B ⪰ I");
  const double an = op_norm(ah);
  if (lambda_min_hermitian(hermitian_part(ah * ah - bh * bh)) < -1e-10 * an * an)
    throw Error(ErrorKind::HypothesisViolated, "‖Bf‖ ≤ ‖Af‖ fails");
  std::vector<std::pair<double, double>> out;
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in [0, 1]");
    const ComplexMatrix diff = psd_power(ah, 2.0 * alpha) - psd_power(bh, 2.0 * alpha);
    out.emplace_back(alpha, lambda_min_hermitian(hermitian_part(diff)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subordination

struct SubordinationEntry {
  double alpha = 0.0;
  double D_alpha = 0.0;          // ‖|Q|^α A^{-α}‖
  double D_tilde = 0.0;          // ‖|Q*|^{1-α} B^{-(1-α)}‖
  double C_alpha = 0.0;          // D̃_{1-α} D_α
  double max_ratio = 0.0;        // max |(f,Qg)| / (‖B^{1-α}f‖‖A^α g‖)
  int violations = 0;
  double route_discrepancy = 0.0;  // direct (f,Qg) vs polar-route evaluation
  bool loewner_heinz_checked = false;
  bool loewner_heinz_ok = true;  // D_α ≤ D_1^α (A Hermitian PD)
};

struct SubordinationReport {
  double D1 = 0.0;        // ‖Q A^{-1}‖
  double D1_tilde = 0.0;  // ‖Q* B^{-1}‖
  int samples = 0;
  std::vector<SubordinationEntry> entries;
};

namespace detail {

struct PowerFamily {
  bool hermitian = false;
  SpectralDecomposition hd;
  Eigenbasis eb;

  ComplexMatrix power(double p) const {
    if (p == 0.0) return identity(hermitian ? hd.eigenvalues.size() : eb.eigenvalues.size());
    if (hermitian) return apply_function(hd, [p](Complex l) { return Complex(std::pow(l.real(), p), 0.0); });
    ComplexVector d(eb.eigenvalues.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(p * std::log(eb.eigenvalues(i)));
    return eb.vectors * d.asDiagonal() * eb.inverse;
  }
};

// Hermitian PD via the spectral theorem; otherwise diagonalizable accretive.
inline PowerFamily power_family(const ComplexMatrix& a, const char* what) {
  require_square(a, what);
  require_finite(a, what);
  const double scale = std::max(op_norm(a), std::numeric_limits<double>::min());
  if (!(sigma_min(a) > 1e-12 * scale)) throw Error(ErrorKind::HypothesisViolated, std::string(what) + " is not invertible");
  PowerFamily f;
  if (hermitian_defect(a) <= 1e-12 * std::max(a.norm(), std::numeric_limits<double>::min())) {
    f.hermitian = true;
    f.hd = eig_hermitian(hermitian_part(a));
    if (!(f.hd.eigenvalues(0).real() > 0.0))
      throw Error(ErrorKind::HypothesisViolated, std::string(what) + " is not positive definite");
    return f;
  }
  double margin = 0.0;
  try {
    require_accretive(a, margin);
  } catch (const Error&) {
    throw Error(ErrorKind::HypothesisViolated, std::string(what) + " is not accretive");
  }
  f.eb = eigenbasis(a);
  return f;
}

}  // namespace detail

/// Constants D_α, D̃_{1-α}, C_α and a randomized check of
/// |(f, Qg)| ≤ C_α ‖B^{1-α} f‖ ‖A^α g‖.
inline SubordinationReport subordination(const ComplexMatrix& q, const ComplexMatrix& a, const ComplexMatrix& b,
                                         const std::vector<double>& alphas, Seed seed = {11}, int samples = 1000) {
  require_square(q, "Q");
  if (a.rows() != q.cols() || b.rows() != q.rows())
    throw Error(ErrorKind::DimensionMismatch, "Q, A, B dimensions are incompatible");
  const detail::PowerFamily fa = detail::power_family(a, "A");
  const detail::PowerFamily fb = detail::power_family(b, "B");

  SubordinationReport rep;
  rep.samples = samples;
  rep.D1 = op_norm(q * fa.power(-1.0));
  rep.D1_tilde = op_norm(q.adjoint() * fb.power(-1.0));
  if (!std::isfinite(rep.D1) || !std::isfinite(rep.D1_tilde))
    throw Error(ErrorKind::HypothesisViolated, "Q is not bounded relative to A and B");

  const PolarFactors pf = polar(q);
  for (double alpha : alphas) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in (0, 1]");
    SubordinationEntry e;
    e.alpha = alpha;
    const ComplexMatrix q_right = psd_power(pf.absT, alpha);            // |Q|^α
    const ComplexMatrix q_left = psd_power(pf.absTstar, 1.0 - alpha);   // |Q*|^{1-α}
    const ComplexMatrix a_pow = fa.power(alpha);
    const ComplexMatrix b_pow = fb.power(1.0 - alpha);
    e.D_alpha = op_norm(q_right * fa.power(-alpha));
    e.D_tilde = op_norm(q_left * fb.power(alpha - 1.0));
    e.C_alpha = e.D_tilde * e.D_alpha;

    Rng rng(Seed{seed.value + static_cast<std::uint64_t>(std::llround(alpha * 1e6))});
    for (int k = 0; k < samples; ++k) {
      const ComplexVector f = gen::unit_vector(q.rows(), rng);
      const ComplexVector g = gen::unit_vector(q.cols(), rng);
      const Complex direct = f.dot(q * g);
      const Complex routed = (q_left * f).dot(pf.U * (q_right * g));
      e.route_discrepancy = std::max(e.route_discrepancy, std::abs(direct - routed));
      const double rhs = (b_pow * f).norm() * (a_pow * g).norm();
      const double lhs = std::abs(direct);
      if (rhs > 0.0) e.max_ratio = std::max(e.max_ratio, lhs / rhs);
      if (lhs > (e.C_alpha + 1e-8) * rhs) ++e.violations;
    }
    if (fa.hermitian) {
      e.loewner_heinz_checked = true;
      e.loewner_heinz_ok = e.D_alpha <= std::pow(rep.D1, alpha) + 1e-8;
    }
    rep.entries.push_back(e);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Complex-power sandwiches

struct PowerSandwichFamily {
  std::vector<std::pair<Complex, ComplexMatrix>> values;  // z ↦ (A*+I)^{-z}|B|(A+I)^{-(1-z)}
  double splitting_residual = 0.0;     // max over z, two-factor form
  double conjugation_residual = 0.0;   // T-conjugation at z = 1/2
  double scale = 0.0;
};

/// (A*+I)^{-z}|B|(A+I)^{-(1-z)} for each z, with the splitting
/// [|B|^{z̄}(A+I)^{-z̄}]* [|B|^{1-z}(A+I)^{-(1-z)}] and the identity
/// (A_R+I)^{-1/2}|B|(A_R+I)^{-1/2} = T* M(1/2) T, T = (A+I)^{1/2}(A_R+I)^{-1/2}.
inline PowerSandwichFamily power_sandwich_family(const ComplexMatrix& b, const ComplexMatrix& a,
                                                 const std::vector<Complex>& z_grid, double rank_tol = 0.0,
                                                 const QuadratureConfig& cfg = {}) {
  require_square(a, "A");
  detail::require_compatible(b, a);
  if (!sectorial_certificate(a).sectorial) throw Error(ErrorKind::NotSectorial, "A is not sectorial");
  const PolarFactors pf = polar(b, rank_tol);
  if (pf.numerical_rank < b.cols()) throw Error(ErrorKind::KernelNotTrivial, "ker B is not trivial");
  const SpectralDecomposition abs_b = eig_hermitian(pf.absT);
  const auto abs_b_pow = [&](Complex w) {
    return apply_function(abs_b, [w](Complex l) { return std::exp(w * std::log(l.real())); });
  };
  const ComplexMatrix a_adj = a.adjoint();
  const auto pw = [&](const ComplexMatrix& s, Complex z) {
    try {
      return complex_power(s, z, cfg).value;
    } catch (const Error& e) {
      throw Error(ErrorKind::PowerComputationFailed, e.what());
    }
  };

  PowerSandwichFamily out;
  out.scale = pf.absT.norm();
  for (const Complex& z : z_grid) {
    if (!(z.real() > 0.0 && z.real() < 1.0)) throw Error(ErrorKind::ReOutOfRange, "Re z must lie in (0, 1)");
    const ComplexMatrix m = pw(a_adj, z) * pf.absT * pw(a, 1.0 - z);
    const ComplexMatrix left = abs_b_pow(std::conj(z)) * pw(a, std::conj(z));
    const ComplexMatrix right = abs_b_pow(1.0 - z) * pw(a, 1.0 - z);
    out.splitting_residual = std::max(out.splitting_residual, (m - left.adjoint() * right).norm());
    out.values.emplace_back(z, m);
  }

  const Complex half(0.5, 0.0);
  const ComplexMatrix m_half = pw(a_adj, half) * pf.absT * pw(a, half);
  const ComplexMatrix ar1 = hermitian_part(a) + identity(a.rows());
  const ComplexMatrix ar_neg_half = psd_power(ar1, -0.5);
  const ComplexMatrix t = accretive_power(a, half, 1.0, cfg) * ar_neg_half;
  out.conjugation_residual = (ar_neg_half * pf.absT * ar_neg_half - t.adjoint() * m_half * t).norm();
  return out;
}

}  // namespace opkit
