// Polar and generalized polar decompositions T = U|T| = φ(|T*|) U ψ(|T|).
#pragma once

#include "opkit/core.hpp"
#include "opkit/funcalc.hpp"

#include <map>
#include <string>

namespace opkit {

struct PolarFactors {
  ComplexMatrix U;         // partial isometry, rows(T) x cols(T)
  ComplexMatrix absT;      // |T| = (T*T)^{1/2}
  ComplexMatrix absTstar;  // |T*| = (TT*)^{1/2}
  ComplexMatrix P_init;    // projection onto ran |T|
  ComplexMatrix P_final;   // projection onto ran T
  Eigen::Index numerical_rank = 0;
  RealVector singular_values;  // all min(rows, cols) singular values, descending
};

/// U = W_r V_r* from the rank-truncated SVD; ker T is mapped to 0.
inline PolarFactors polar(const ComplexMatrix& t, double rank_tol = 0.0) {
  const SVDResult s = svd(t, rank_tol);
  PolarFactors out;
  out.numerical_rank = s.numerical_rank;
  out.singular_values = s.sigma_full;
  out.U = s.U_left * s.V_right.adjoint();
  const auto sig = s.sigma_full.cast<Complex>().asDiagonal();
  out.absT = hermitian_part(s.V_full * sig * s.V_full.adjoint());
  out.absTstar = hermitian_part(s.U_full * sig * s.U_full.adjoint());
  out.P_init = projector(s.V_right, t.cols());
  out.P_final = projector(s.U_left, t.rows());
  return out;
}

/// Scalar pair with φ(λ)ψ(λ) = λ on the nonnegative reals.
struct FunctionPair {
  std::function<double(double)> phi;
  std::function<double(double)> psi;
  std::string label;

  /// φ(λ) = λ^α, ψ(λ) = λ^{1-α}; α = 0 gives the standard polar decomposition.
  static FunctionPair alpha(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in [0, 1]");
    return {[a](double l) { return std::pow(l, a); }, [a](double l) { return std::pow(l, 1.0 - a); },
            "alpha=" + std::to_string(a)};
  }
};

/// Named scalar functions for CLI use: one, id, sqrt, square, inv, pow:<p>.
inline std::function<double(double)> named_function(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "id") return [](double l) { return l; };
  if (name == "sqrt") return [](double l) { return std::sqrt(l); };
  if (name == "square") return [](double l) { return l * l; };
  if (name == "inv") return [](double l) { return 1.0 / l; };
  if (name.rfind("pow:", 0) == 0) {
    const double p = std::stod(name.substr(4));
    return [p](double l) { return std::pow(l, p); };
  }
  throw Error(ErrorKind::InvalidInput, "unknown function name '" + name + "'");
}

struct GeneralizedPolarFactors {
  ComplexMatrix left;   // φ(|T*|)
  ComplexMatrix mid;    // U
  ComplexMatrix right;  // ψ(|T|)
  FunctionPair pair;

  ComplexMatrix product() const { return left * mid * right; }
};

namespace detail {

// φ applied to a PSD factor; eigenvalues at or below `zero_cutoff` are treated as 0.
inline ComplexMatrix apply_on_psd(const ComplexMatrix& p, const std::function<double(double)>& f,
                                  double zero_cutoff) {
  const SpectralDecomposition d = eig_hermitian(p);
  return apply_function(d, [&](Complex l) {
    const double x = l.real() <= zero_cutoff ? 0.0 : l.real();
    return Complex(f(x), 0.0);
  });
}

}  // namespace detail

/// T = φ(|T*|) U ψ(|T|).
inline GeneralizedPolarFactors generalized_polar(const ComplexMatrix& t, const FunctionPair& pair,
                                                 double rank_tol = 0.0) {
  const PolarFactors pf = polar(t, rank_tol);
  const RealVector& sig = pf.singular_values;
  const double smax = sig.size() > 0 ? sig(0) : 0.0;
  const double tol = rank_tol > 0.0 ? rank_tol : default_rank_tol(std::max(t.rows(), t.cols()));
  const double cutoff = tol * smax;

  // ψ acts on |T| (cols x cols), φ on |T*| (rows x rows); each sees 0 on its kernel.
  const Eigen::Index r = pf.numerical_rank;
  if ((t.cols() > r && !std::isfinite(pair.psi(0.0))) || (t.rows() > r && !std::isfinite(pair.phi(0.0))))
    throw Error(ErrorKind::RankDeficiencyConflict, "function pair is undefined at 0 but T is rank-deficient");

  for (Eigen::Index i = 0; i < sig.size(); ++i) {
    const double s = sig(i) <= cutoff ? 0.0 : sig(i);
    const double prod = pair.phi(s) * pair.psi(s);
    if (!(std::abs(prod - s) <= 1e-12 * std::max(1.0, s)))
      throw Error(ErrorKind::FunctionPairViolation, "φ(σ)ψ(σ) ≠ σ on a singular value");
  }

  GeneralizedPolarFactors out{detail::apply_on_psd(pf.absTstar, pair.phi, cutoff), pf.U,
                              detail::apply_on_psd(pf.absT, pair.psi, cutoff), pair};
  return out;
}

/// Frobenius residuals of the half-power identities relating U, |T|^{1/2}
/// and |T*|^{1/2}.
inline std::map<std::string, double> half_power_identities(const ComplexMatrix& t, double rank_tol = 0.0) {
  const PolarFactors pf = polar(t, rank_tol);
  const double tol = rank_tol > 0.0 ? rank_tol : default_rank_tol(std::max(t.rows(), t.cols()));
  const double cutoff = pf.singular_values.size() > 0 ? tol * pf.singular_values(0) : 0.0;
  const auto sqrt_fn = [](double l) { return std::sqrt(l); };
  const ComplexMatrix rt = detail::apply_on_psd(pf.absT, sqrt_fn, cutoff);
  const ComplexMatrix rts = detail::apply_on_psd(pf.absTstar, sqrt_fn, cutoff);
  const ComplexMatrix& u = pf.U;
  const ComplexMatrix r = u.adjoint() * rts * u;
  std::map<std::string, double> out;
  out["Ustar_sqrtTstar_minus_sqrtT_Ustar"] = (u.adjoint() * rts - rt * u.adjoint()).norm();
  out["U_sqrtT_Ustar_minus_sqrtTstar_Pfinal"] = (u * rt * u.adjoint() - rts * pf.P_final).norm();
  out["R_squared_minus_absT_Pinit"] = (r * r - pf.absT * pf.P_init).norm();
  out["sqrtTstar_U_sqrtT_minus_T"] = (rts * u * rt - t).norm();
  return out;
}

}  // namespace opkit
