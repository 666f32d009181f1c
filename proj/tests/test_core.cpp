#include "opkit/core.hpp"
#include "opkit/fixtures.hpp"

#include <gtest/gtest.h>

using namespace opkit;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Roots of det(A - λI) for 2x2 A.
std::vector<Complex> char_roots_2x2(const ComplexMatrix& a) {
  const Complex tr = a.trace();
  const Complex det = a.determinant();
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

double multiset_distance(std::vector<Complex> x, std::vector<Complex> y) {
  const auto lex = [](Complex p, Complex q) { return p.real() != q.real() ? p.real() < q.real() : p.imag() < q.imag(); };
  std::sort(x.begin(), x.end(), lex);
  std::sort(y.begin(), y.end(), lex);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace

TEST(Svd, IdentityHasFullRank) {
  const SVDResult s = svd(identity(3));
  EXPECT_EQ(s.numerical_rank, 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.singular_values(i), 1.0, 1e-15);
}

TEST(Svd, ZeroMatrixHasRankZero) {
  const SVDResult s = svd(ComplexMatrix::Zero(2, 2));
  EXPECT_EQ(s.numerical_rank, 0);
  EXPECT_EQ(s.singular_values.size(), 0);
  EXPECT_EQ(s.U_left.cols(), 0);
}

TEST(Svd, RandomRectangularInvariants) {
  Rng rng(Seed{3});
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix m = gen::ginibre(4, 3, rng);
    const SVDResult s = svd(m);
    const Eigen::Index r = s.numerical_rank;
    ASSERT_EQ(r, 3);
    EXPECT_LE((s.U_left.adjoint() * s.U_left - identity(r)).norm(), 1e-12 * r);
    EXPECT_LE((s.V_right.adjoint() * s.V_right - identity(r)).norm(), 1e-12 * r);
    for (Eigen::Index i = 1; i < r; ++i) EXPECT_GE(s.singular_values(i - 1), s.singular_values(i));
    EXPECT_GE(s.singular_values(r - 1), 0.0);
    const ComplexMatrix rec = s.U_left * s.singular_values.cast<Complex>().asDiagonal() * s.V_right.adjoint();
    EXPECT_LE((rec - m).norm(), 1e-12 * std::max(1.0, m.norm()));
  }
}

TEST(Svd, SingularValuesMatchGramEigenvalues) {
  Rng rng(Seed{4});
  const ComplexMatrix m = gen::ginibre(5, 3, rng);
  const SVDResult s = svd(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.singular_values(i), std::sqrt(es.eigenvalues()(2 - i)), 1e-12);
}

TEST(Svd, LowRankDetected) {
  Rng rng(Seed{5});
  const ComplexMatrix m = gen::low_rank(6, 5, 2, rng);
  EXPECT_EQ(svd(m).numerical_rank, 2);
  EXPECT_EQ(svd(m).sigma_full.size(), 5);
}

TEST(Svd, RankToleranceIsRelative) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-3;
  EXPECT_EQ(svd(m, 1e-2).numerical_rank, 1);
  EXPECT_EQ(svd(m, 1e-4).numerical_rank, 2);
}

TEST(Svd, RejectsNonFiniteAndNegativeTolerance) {
  ComplexMatrix m = identity(2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    svd(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
  try {
    svd(identity(2), -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Adjoint, Involution) {
  Rng rng(Seed{6});
  const ComplexMatrix m = gen::ginibre(3, 4, rng);
  EXPECT_EQ(adjoint(adjoint(m)), m);
}

TEST(EigHermitian, DiagonalCase) {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const SpectralDecomposition s = eig_hermitian(d);
  EXPECT_TRUE(s.hermitian_flag);
  EXPECT_NEAR(s.eigenvalues(0).real(), 1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1).real(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvectors(1, 1)), 1.0, 1e-15);
}

TEST(EigHermitian, SwapMatrix) {
  const SpectralDecomposition s = eig_hermitian(mat2(0, 1, 1, 0));
  EXPECT_NEAR(s.eigenvalues(0).real(), -1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1).real(), 1.0, 1e-15);
}

TEST(EigHermitian, MatchesCharacteristicPolynomial2x2) {
  Rng rng(Seed{7});
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix h = gen::hermitian(2, rng);
    const SpectralDecomposition s = eig_hermitian(h);
    EXPECT_LE(multiset_distance({s.eigenvalues(0), s.eigenvalues(1)}, char_roots_2x2(h)), 1e-10);
  }
}

TEST(EigHermitian, Hand3x3) {
  // tridiag(-1, 2, -1) has eigenvalues 2 - √2, 2, 2 + √2.
  ComplexMatrix h(3, 3);
  h << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const SpectralDecomposition s = eig_hermitian(h);
  EXPECT_NEAR(s.eigenvalues(0).real(), 2.0 - std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(s.eigenvalues(1).real(), 2.0, 1e-10);
  EXPECT_NEAR(s.eigenvalues(2).real(), 2.0 + std::sqrt(2.0), 1e-10);
}

TEST(EigHermitian, RandomReconstructionAndUnitarity) {
  Rng rng(Seed{8});
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix h = gen::hermitian(8, rng);
    const SpectralDecomposition s = eig_hermitian(h);
    EXPECT_LE((s.reconstruct() - h).norm(), 1e-11 * op_norm(h));
    EXPECT_LE((s.eigenvectors.adjoint() * s.eigenvectors - identity(8)).norm(), 1e-12 * 8);
    for (Eigen::Index i = 0; i < 8; ++i) EXPECT_EQ(s.eigenvalues(i).imag(), 0.0);
    for (Eigen::Index i = 1; i < 8; ++i) EXPECT_LE(s.eigenvalues(i - 1).real(), s.eigenvalues(i).real());
  }
}

TEST(EigHermitian, RejectsNonHermitian) {
  try {
    eig_hermitian(mat2(0, 1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(DiagonalizeNormal, PureImaginaryDiagonal) {
  const SpectralDecomposition s = diagonalize_normal(mat2(Complex(0, 1), 0, 0, Complex(0, -1)));
  EXPECT_FALSE(s.hermitian_flag);
  // Lexicographic (Re, Im) order puts -i first.
  EXPECT_NEAR(std::abs(s.eigenvalues(0) - Complex(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.eigenvalues(1) - Complex(0, 1)), 0.0, 1e-15);
}

TEST(DiagonalizeNormal, RecoversConstructedSpectrum) {
  Rng rng(Seed{9});
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix w = gen::unitary(2, rng);
    const ComplexMatrix a = w * mat2(Complex(1, 2), 0, 0, 3) * w.adjoint();
    const SpectralDecomposition s = diagonalize_normal(a);
    EXPECT_LE(multiset_distance({s.eigenvalues(0), s.eigenvalues(1)}, {Complex(1, 2), Complex(3, 0)}), 1e-10);
    EXPECT_LE((s.reconstruct() - a).norm(), 1e-11 * op_norm(a));
    EXPECT_LE((s.eigenvectors.adjoint() * s.eigenvectors - identity(2)).norm(), 1e-12 * 2);
  }
}

TEST(DiagonalizeNormal, MatchesCharacteristicPolynomial2x2) {
  Rng rng(Seed{10});
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix w = gen::unitary(2, rng);
    const ComplexMatrix a = w * mat2(rng.complex_normal(), 0, 0, rng.complex_normal()) * w.adjoint();
    const SpectralDecomposition s = diagonalize_normal(a);
    EXPECT_LE(multiset_distance({s.eigenvalues(0), s.eigenvalues(1)}, char_roots_2x2(a)), 1e-10);
  }
}

TEST(DiagonalizeNormal, JordanBlockIsNotNormal) {
  try {
    diagonalize_normal(mat2(0, 1, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormal);
  }
}

TEST(PinvPsdSqrt, DiagonalWithKernel) {
  const PsdSqrt p = pinv_psd_sqrt(mat2(4, 0, 0, 0));
  EXPECT_LE((p.sqrt - mat2(2, 0, 0, 0)).norm(), 1e-15);
  EXPECT_LE((p.pinv_sqrt - mat2(0.5, 0, 0, 0)).norm(), 1e-15);
  EXPECT_LE((p.kernel_projector - mat2(0, 0, 0, 1)).norm(), 1e-15);
  EXPECT_EQ(p.rank, 1);
}

TEST(PinvPsdSqrt, Identity) {
  const PsdSqrt p = pinv_psd_sqrt(identity(3));
  EXPECT_LE((p.sqrt - identity(3)).norm(), 1e-15);
  EXPECT_LE((p.pinv_sqrt - identity(3)).norm(), 1e-15);
}

TEST(PinvPsdSqrt, RandomPsdResidualAndKernelOrthogonality) {
  Rng rng(Seed{11});
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix g = gen::low_rank(6, 4, 4, rng);
    const ComplexMatrix h = hermitian_part(g * g.adjoint());
    const PsdSqrt p = pinv_psd_sqrt(h);
    EXPECT_EQ(p.rank, 4);
    EXPECT_LE((p.sqrt * p.sqrt - h).norm(), 1e-10 * op_norm(h));
    EXPECT_LE((p.pinv_sqrt * p.kernel_projector).norm(), 1e-10);
    EXPECT_LE((p.kernel_projector * h).norm(), 1e-10 * op_norm(h));
  }
}

TEST(PinvPsdSqrt, RejectsIndefinite) {
  try {
    pinv_psd_sqrt(mat2(-1, 0, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(PinvPsdSqrt, ClipsRoundoffNegatives) {
  const PsdSqrt p = pinv_psd_sqrt(mat2(1, 0, 0, -1e-12));
  EXPECT_EQ(p.rank, 1);
  EXPECT_EQ(p.sqrt(1, 1), Complex(0.0, 0.0));
}

TEST(Norms, OperatorNormOfDiagonal) {
  EXPECT_NEAR(op_norm(mat2(3, 0, 0, Complex(0, -5))), 5.0, 1e-14);
  EXPECT_NEAR(sigma_min(mat2(3, 0, 0, Complex(0, -5))), 3.0, 1e-14);
  EXPECT_NEAR(condition_number(mat2(3, 0, 0, Complex(0, -5))), 5.0 / 3.0, 1e-14);
}

TEST(Parts, CartesianDecomposition) {
  Rng rng(Seed{12});
  const ComplexMatrix a = gen::ginibre(4, 4, rng);
  const ComplexMatrix re = hermitian_part(a), im = imaginary_part(a);
  EXPECT_LE(hermitian_defect(re), 1e-15);
  EXPECT_LE(hermitian_defect(im), 1e-15);
  EXPECT_LE((re + Complex(0, 1) * im - a).norm(), 1e-14);
}

TEST(ErrorKinds, NamesAreStable) {
  EXPECT_STREQ(to_string(ErrorKind::NotPSD), "NotPSD");
  EXPECT_STREQ(to_string(ErrorKind::KernelObstruction), "KernelObstruction");
  EXPECT_STREQ(to_string(ErrorKind::NonFiniteValue), "NonFiniteValue");
}
