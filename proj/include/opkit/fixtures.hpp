// Seeded matrix generators.
//
// Random streams come from std::mt19937_64 (algorithm fixed by the C++
// standard). Uniform doubles take the top 53 bits of each draw; normals use
// the Box–Muller transform below, so streams do not depend on the standard
// library's distribution implementations.
#pragma once

#include "opkit/core.hpp"
#include "opkit/funcalc.hpp"

#include <cstdint>
#include <random>

namespace opkit {

struct Seed {
  std::uint64_t value = 0;
};

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box–Muller (one value per pair of uniforms).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Complex normal with E|z|² = 1.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::sqrt(0.5);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

namespace gen {

inline ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

inline ComplexVector unit_vector(Eigen::Index n, Rng& rng) {
  ComplexVector v = ginibre(n, 1, rng);
  return v / v.norm();
}

/// Haar-distributed unitary: QR of a Ginibre matrix with phase-fixed R.
inline ComplexMatrix unitary(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

inline ComplexMatrix hermitian(Eigen::Index n, Rng& rng) { return hermitian_part(ginibre(n, n, rng)); }

/// W diag(d) W* with d uniform in [lo, hi].
inline ComplexMatrix psd(Eigen::Index n, Rng& rng, double lo, double hi) {
  const ComplexMatrix w = unitary(n, rng);
  ComplexVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
  return hermitian_part(w * d.asDiagonal() * w.adjoint());
}

/// Random matrix of prescribed rank.
inline ComplexMatrix low_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, Rng& rng) {
  return ginibre(rows, rank, rng) * ginibre(rank, cols, rng);
}

}  // namespace gen

// ---------------------------------------------------------------------------
// Named fixtures

/// H^{1/2}(I + iX)H^{1/2}.
inline ComplexMatrix sectorial_from_factors(const ComplexMatrix& h, const ComplexMatrix& x) {
  const ComplexMatrix r = pinv_psd_sqrt(h).sqrt;
  const Eigen::Index n = h.rows();
  return r * (ComplexMatrix::Identity(n, n) + Complex(0.0, 1.0) * x) * r;
}

/// Sectorial matrix with semi-angle at most θ: H has spectrum in [0.1, 2],
/// X is Hermitian with ‖X‖ in [tan(θ)/2, tan(θ)].
inline ComplexMatrix random_sectorial(Eigen::Index n, double theta, Seed seed) {
  if (!(theta >= 0.0 && theta < kPi / 2)) throw Error(ErrorKind::InvalidInput, "theta must lie in [0, π/2)");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  Rng rng(seed);
  const ComplexMatrix h = gen::psd(n, rng, 0.1, 2.0);
  ComplexMatrix x = gen::hermitian(n, rng);
  const double xn = op_norm(x);
  const double target = std::tan(theta) * (0.5 + 0.5 * rng.uniform());
  x = xn > 0.0 ? ComplexMatrix(x * (target / xn)) : ComplexMatrix::Zero(n, n);
  return sectorial_from_factors(h, x);
}

struct IntertwineTriple {
  ComplexMatrix V;
  ComplexMatrix A1;
  ComplexMatrix A2;
};

/// A1 normal, A2 = W A1 W*, V = W p(A1) with p given by its coefficients
/// (constant term first).
inline IntertwineTriple normal_intertwined_from(const ComplexMatrix& a1, const ComplexMatrix& w,
                                                const std::vector<Complex>& coeffs) {
  const Eigen::Index n = a1.rows();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  ComplexMatrix pow = ComplexMatrix::Identity(n, n);
  for (const Complex& c : coeffs) {
    p += c * pow;
    pow = pow * a1;
  }
  return {w * p, a1, w * a1 * w.adjoint()};
}

inline IntertwineTriple random_normal_intertwined(Eigen::Index n, Seed seed) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  Rng rng(seed);
  const ComplexMatrix q = gen::unitary(n, rng);
  ComplexVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = rng.complex_normal();
  const ComplexMatrix a1 = q * d.asDiagonal() * q.adjoint();
  const ComplexMatrix w = gen::unitary(n, rng);
  const int degree = static_cast<int>(rng.next_u64() % 4);  // 0..3
  std::vector<Complex> coeffs;
  for (int k = 0; k <= degree; ++k) coeffs.push_back(rng.complex_normal());
  return normal_intertwined_from(a1, w, coeffs);
}

/// (n+1)² tridiag(-1, 2, -1): the Dirichlet Laplacian on n interior points of (0, 1).
inline ComplexMatrix dirichlet_laplacian_1d(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  const double h2 = static_cast<double>((n + 1) * (n + 1));
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 2.0 * h2;
    if (i + 1 < n) {
      m(i, i + 1) = -h2;
      m(i + 1, i) = -h2;
    }
  }
  return m;
}

/// diag(i t0, -i t0): accretive and invertible with vanishing Hermitian part.
inline ComplexMatrix remark43(double t0) {
  if (t0 == 0.0 || !std::isfinite(t0)) throw Error(ErrorKind::ZeroParameter, "t0 must be a nonzero real");
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = Complex(0.0, t0);
  m(1, 1) = Complex(0.0, -t0);
  return m;
}

struct HeinzPair {
  ComplexMatrix A;
  ComplexMatrix B;
};

/// B = (I + K)^{1/2}; requires 0 ⪯ K ⪯ A² - I.
inline HeinzPair heinz_pair_from(const ComplexMatrix& a, const ComplexMatrix& k) {
  const Eigen::Index n = a.rows();
  return {a, hermitian_part(psd_power(ComplexMatrix::Identity(n, n) + k, 0.5))};
}

/// A = I + P with P PSD (spectrum in [0, 2]); K = S C S with S = (A² - I)^{1/2}
/// and 0 ⪯ C ⪯ I, so B² = I + K ⪯ A².
inline HeinzPair heinz_pair(Eigen::Index n, Seed seed) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  Rng rng(seed);
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a = hermitian_part(eye + gen::psd(n, rng, 0.0, 2.0));
  const ComplexMatrix s = psd_power(hermitian_part(a * a - eye), 0.5);
  const ComplexMatrix c = gen::psd(n, rng, 0.0, 1.0);
  return heinz_pair_from(a, hermitian_part(s * c * s));
}

struct SimilarFixture {
  ComplexMatrix A;
  ComplexMatrix V;
  ComplexMatrix H;
};

/// A = V H V^{-1}, H Hermitian PSD (spectrum in [0, 3]), V = W1 diag(s) W2
/// with singular values log-spaced in [1, cond_target].
inline SimilarFixture similar_to_selfadjoint(Eigen::Index n, double cond_target, Seed seed) {
  if (!(cond_target >= 1.0)) throw Error(ErrorKind::InvalidInput, "cond_target must be at least 1");
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
  Rng rng(seed);
  const ComplexMatrix w1 = gen::unitary(n, rng);
  const ComplexMatrix w2 = gen::unitary(n, rng);
  ComplexVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double frac = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    s(i) = std::pow(cond_target, frac);
  }
  SimilarFixture out;
  out.V = w1 * s.asDiagonal() * w2;
  out.H = gen::psd(n, rng, 0.0, 3.0);
  out.A = out.V * out.H * out.V.partialPivLu().inverse();
  return out;
}

}  // namespace opkit
