#include "opkit/bounds.hpp"

#include <gtest/gtest.h>

using namespace opkit;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (const Complex& x : d) m(i, i) = x, ++i;
  return m;
}

void expect_kind(const std::function<void()>& fn, ErrorKind kind) {
  try {
    fn();
    ADD_FAILURE() << "no error, expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

const std::vector<double> kGrid{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};

}  // namespace

TEST(AdmissiblePairs, Examples) {
  Rng rng(Seed{100});
  const ComplexMatrix a = gen::psd(4, rng, 0.5, 2.0);
  const auto same = admissible_pairs(a, a, {1.0});
  EXPECT_TRUE(same[0].quadratic);
  EXPECT_LE(same[0].b, 1e-6);
  EXPECT_NEAR(admissible_pairs(identity(3), ComplexMatrix::Zero(3, 3), {0.0})[0].b, 1.0, 1e-14);
  expect_kind([] { admissible_pairs(identity(2), -identity(2), {1.0}); }, ErrorKind::NotPSD);
}

TEST(AdmissiblePairs, RandomVectorRecheckAndFrontier) {
  Rng rng(Seed{101});
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = gen::psd(5, rng, 0.0, 3.0);
    const ComplexMatrix b = gen::ginibre(5, 5, rng);
    const auto pairs = admissible_pairs(b, a, kGrid);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i > 0) EXPECT_LE(pairs[i].b, pairs[i - 1].b + 1e-12);
      for (int k = 0; k < 500; ++k) {
        const ComplexVector f = gen::unit_vector(5, rng);
        const double lhs = (b * f).squaredNorm();
        const double rhs = pairs[i].a * pairs[i].a * (a * f).squaredNorm() + pairs[i].b * pairs[i].b;
        EXPECT_LE(lhs, rhs * (1.0 + 1e-12) + 1e-12);
      }
    }
  }
}

TEST(ConvertPair, Examples) {
  const BoundPair q = convert_pair({1.0, 1.0, false}, 1.0);
  EXPECT_TRUE(q.quadratic);
  EXPECT_DOUBLE_EQ(q.a, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(q.b, std::sqrt(2.0));
  const BoundPair l = convert_pair({2.0, 3.0, true}, 0.5);
  EXPECT_FALSE(l.quadratic);
  EXPECT_EQ(l.a, 2.0);
  EXPECT_EQ(l.b, 3.0);
  for (double eps : {0.25, 1.0, 4.0}) {
    const BoundPair back = convert_pair(convert_pair({0.7, 1.3, false}, eps), eps);
    EXPECT_GE(back.a, 0.7);
    EXPECT_GE(back.b, 1.3);
  }
  EXPECT_THROW(convert_pair({1.0, 1.0, false}, 0.0), Error);
}

TEST(ConvertPair, ConvertedPairsStayAdmissible) {
  Rng rng(Seed{102});
  const ComplexMatrix a = gen::psd(4, rng, 0.0, 2.0);
  const ComplexMatrix b = gen::ginibre(4, 4, rng);
  for (const BoundPair& q : admissible_pairs(b, a, kGrid)) {
    const BoundPair lin = convert_pair(q, 1.0);
    for (double eps : {0.25, 1.0, 4.0}) {
      const BoundPair q2 = convert_pair(lin, eps);
      for (int k = 0; k < 200; ++k) {
        const ComplexVector f = gen::unit_vector(4, rng);
        EXPECT_LE((b * f).norm(), lin.a * (a * f).norm() + lin.b + 1e-12);
        EXPECT_LE((b * f).squaredNorm(), q2.a * q2.a * (a * f).squaredNorm() + q2.b * q2.b + 1e-12);
      }
    }
  }
}

TEST(RelativeBoundCurve, Examples) {
  for (const CurvePoint& p : relative_bound_curve(identity(2), ComplexMatrix::Zero(2, 2), {0.5, 1.0, 10.0}))
    EXPECT_NEAR(p.norm, 1.0 / p.mu, 1e-14);
  const auto c = relative_bound_curve(diag({2.0}), diag({2.0}), {2.0});
  EXPECT_NEAR(c[0].norm, 0.5, 1e-14);
}

TEST(RelativeBoundCurve, MonotoneAndDominated) {
  Rng rng(Seed{103});
  std::vector<double> mus;
  for (int k = -3; k <= 6; ++k) mus.push_back(std::pow(2.0, k));
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = gen::psd(5, rng, 0.0, 4.0);
    const ComplexMatrix b = gen::ginibre(5, 5, rng);
    const auto curve = relative_bound_curve(b, a, mus);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i].norm, curve[i - 1].norm + 1e-12);
    for (const CurvePoint& p : curve) EXPECT_GT(p.norm, 0.0);
    for (const BoundPair& q : admissible_pairs(b, a, kGrid)) {
      const BoundPair lin = convert_pair(q, 1.0);
      for (const CurvePoint& p : curve) EXPECT_LE(p.norm, lin.a + lin.b / p.mu + 1e-10);
    }
  }
}

TEST(FormBound, Examples) {
  const FormBoundResult r = form_bound_check(identity(2), identity(2), {1.0, 0.0, false});
  EXPECT_NEAR(r.form_norm, 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(r.bound_ok);
  const FormBoundResult z = form_bound_check(ComplexMatrix::Zero(2, 2), identity(2), {0.0, 0.0, false});
  EXPECT_EQ(z.form_norm, 0.0);
  EXPECT_TRUE(z.bound_ok);
  expect_kind([] { form_bound_check(3.0 * identity(2), identity(2), {1.0, 0.5, false}); },
              ErrorKind::PairNotAdmissible);
}

TEST(FormBound, FrontierPairsSatisfyBound) {
  Rng rng(Seed{104});
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = gen::psd(4, rng, 0.0, 3.0);
    const ComplexMatrix b = gen::ginibre(4, 4, rng);
    for (const BoundPair& q : admissible_pairs(b, a, kGrid)) {
      const BoundPair lin = convert_pair(q, 1.0);
      EXPECT_TRUE(form_bound_check(b, a, lin).bound_ok);
    }
  }
}

TEST(Sandwich, IdentityCase) {
  const SandwichResult r = sandwich(identity(3), identity(3), identity(3));
  EXPECT_LE((r.value - 0.5 * identity(3)).norm(), 1e-14);
  EXPECT_LE(r.factored_residual, 1e-14);
  EXPECT_NEAR(r.norm, 0.5, 1e-14);
}

TEST(Sandwich, HermitianNormBoundAndFactorization) {
  Rng rng(Seed{105});
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix a = gen::psd(4, rng, 0.0, 3.0);
    const ComplexMatrix b = gen::ginibre(4, 4, rng);
    const SandwichResult r = sandwich(b, a, a);
    EXPECT_LE(r.factored_residual, 1e-8 * b.norm());
    // Direct oracle for the sandwich through the eigendecomposition of A.
    const ComplexMatrix m = psd_power(a + identity(4), -0.5);
    EXPECT_LE((r.value - m * b * m).norm(), 1e-12 * b.norm());
    const ComplexMatrix bs = b.adjoint();
    for (const BoundPair& p : admissible_pairs(b, a, kGrid))
      for (const BoundPair& ps : admissible_pairs(bs, a, kGrid))
        EXPECT_LE(r.norm, sandwich_norm_bound(convert_pair(ps, 1.0), convert_pair(p, 1.0)) + 1e-10);
    const SandwichResult adj = sandwich(bs, a, a);
    EXPECT_LE((r.value.adjoint() - adj.value).norm(), 1e-10 * b.norm());
  }
}

TEST(Sandwich, NonNormalAccretive) {
  Rng rng(Seed{106});
  const ComplexMatrix a = random_sectorial(4, 1.0, Seed{107});
  const ComplexMatrix b = gen::ginibre(4, 4, rng);
  const SandwichResult r = sandwich(b, a, a);
  EXPECT_LE(r.factored_residual, 1e-8 * b.norm());
  const SandwichResult f = sandwich(b, a, a, {true, false});
  EXPECT_LE(f.factored_residual, 1e-8 * b.norm());
  EXPECT_LE(sectorial_sandwich_residual(b, a), 1e-7 * b.norm());
  expect_kind([] { sandwich(identity(2), -identity(2), identity(2)); }, ErrorKind::NotAccretive);
}

TEST(Heinz, Examples) {
  Rng rng(Seed{108});
  const ComplexMatrix a = identity(3) + gen::psd(3, rng, 0.0, 2.0);
  for (const auto& [alpha, m] : heinz_check(a, a, {0.0, 0.5, 1.0})) EXPECT_NEAR(m, 0.0, 1e-12);
  const auto d = heinz_check(diag({1.0, 4.0}), diag({1.0, 2.0}), {0.5});
  EXPECT_NEAR(d[0].second, 0.0, 1e-14);
  const ComplexMatrix diff = psd_power(diag({1.0, 4.0}), 1.0) - psd_power(diag({1.0, 2.0}), 1.0);
  EXPECT_LE((diff - diag({0.0, 2.0})).norm(), 1e-14);
}

TEST(Heinz, FixturesAndMonotonicity) {
  std::vector<double> alphas;
  for (int k = 1; k <= 9; ++k) alphas.push_back(0.1 * k);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const HeinzPair p = heinz_pair(2 + static_cast<Eigen::Index>(s % 5), Seed{s});
    const double an = op_norm(p.A);
    const auto base = heinz_check(p.A, p.B, alphas);
    for (const auto& [alpha, m] : base) EXPECT_GE(m, -1e-8 * std::pow(an, 2.0 * alpha));
  }
  // Scaling B toward I (keeping B ⪰ I) never lowers the reported minimum.
  const HeinzPair p = heinz_pair(4, Seed{99});
  const auto base = heinz_check(p.A, p.B, alphas);
  for (double t : {0.9, 0.5, 0.1}) {
    const ComplexMatrix bt = identity(4) + t * (p.B - identity(4));
    const auto scaled = heinz_check(p.A, bt, alphas);
    for (std::size_t i = 0; i < alphas.size(); ++i) EXPECT_GE(scaled[i].second, base[i].second - 1e-10);
  }
}

TEST(Heinz, HypothesisViolated) {
  expect_kind([] { heinz_check(diag({1.0, 2.0}), diag({1.0, 3.0}), {0.5}); }, ErrorKind::HypothesisViolated);
  expect_kind([] { heinz_check(diag({0.5, 2.0}), diag({0.5, 1.0}), {0.5}); }, ErrorKind::HypothesisViolated);
}

TEST(Subordination, IdentityConstants) {
  const SubordinationReport r = subordination(identity(3), identity(3), identity(3), {0.25, 0.5, 1.0}, Seed{1}, 200);
  EXPECT_NEAR(r.D1, 1.0, 1e-14);
  EXPECT_NEAR(r.D1_tilde, 1.0, 1e-14);
  for (const SubordinationEntry& e : r.entries) {
    EXPECT_NEAR(e.D_alpha, 1.0, 1e-12);
    EXPECT_NEAR(e.C_alpha, 1.0, 1e-12);
    EXPECT_EQ(e.violations, 0);
    EXPECT_LE(e.max_ratio, 1.0 + 1e-12);
  }
}

TEST(Subordination, QEqualsA) {
  Rng rng(Seed{109});
  const ComplexMatrix a = gen::psd(4, rng, 0.5, 3.0);
  const SubordinationReport r = subordination(a, a, a, {0.3, 0.5, 0.8}, Seed{2}, 300);
  for (const SubordinationEntry& e : r.entries) {
    EXPECT_NEAR(e.D_alpha, 1.0, 1e-10);
    EXPECT_EQ(e.violations, 0);
  }
}

TEST(Subordination, ContractionTimesA) {
  Rng rng(Seed{110});
  const ComplexMatrix a = gen::psd(5, rng, 0.5, 3.0);
  const ComplexMatrix b = gen::psd(5, rng, 0.5, 3.0);
  ComplexMatrix m = gen::ginibre(5, 5, rng);
  m /= op_norm(m);
  const SubordinationReport r = subordination(m * a, a, b, {0.1, 0.25, 0.5, 0.75, 0.9}, Seed{3}, 1000);
  EXPECT_LE(r.D1, 1.0 + 1e-12);
  for (const SubordinationEntry& e : r.entries) {
    EXPECT_EQ(e.violations, 0);
    EXPECT_TRUE(e.loewner_heinz_checked);
    EXPECT_TRUE(e.loewner_heinz_ok);
    EXPECT_LE(e.D_alpha, std::pow(r.D1, e.alpha) + 1e-8);
    EXPECT_LE(e.route_discrepancy, 1e-10);
  }
}

TEST(Subordination, DiagonalizableSectorial) {
  Rng rng(Seed{111});
  const ComplexMatrix a = random_sectorial(4, 0.8, Seed{112});
  const ComplexMatrix b = random_sectorial(4, 0.8, Seed{113});
  const SubordinationReport r = subordination(gen::ginibre(4, 4, rng), a, b, {0.3, 0.6}, Seed{4}, 500);
  for (const SubordinationEntry& e : r.entries) {
    EXPECT_EQ(e.violations, 0);
    EXPECT_FALSE(e.loewner_heinz_checked);
  }
  expect_kind([] { subordination(identity(2), diag({0.0, 1.0}), identity(2), {0.5}); },
              ErrorKind::HypothesisViolated);
}

TEST(PowerSandwich, IdentityHalf) {
  const PowerSandwichFamily f = power_sandwich_family(identity(2), identity(2), {Complex(0.5, 0.0)});
  EXPECT_LE((f.values[0].second - 0.5 * identity(2)).norm(), 1e-10);
}

TEST(PowerSandwich, DiagonalClosedForm) {
  const std::vector<Complex> av{Complex(1.0, 0.5), Complex(2.0, -0.3), 0.5};
  const std::vector<double> bv{0.5, 2.0, 3.0};
  ComplexMatrix a = ComplexMatrix::Zero(3, 3), b = a;
  for (int i = 0; i < 3; ++i) a(i, i) = av[i], b(i, i) = bv[i];
  const std::vector<Complex> zs{Complex(0.3, 0.0), Complex(0.5, 0.4), Complex(0.7, -0.6)};
  const PowerSandwichFamily f = power_sandwich_family(b, a, zs);
  for (const auto& [z, m] : f.values)
    for (int i = 0; i < 3; ++i) {
      const Complex expect =
          std::exp(-z * std::log(std::conj(av[i]) + 1.0)) * bv[i] * std::exp(-(1.0 - z) * std::log(av[i] + 1.0));
      EXPECT_LE(std::abs(m(i, i) - expect), 1e-9);
    }
}

TEST(PowerSandwich, RandomSectorialResiduals) {
  Rng rng(Seed{114});
  const ComplexMatrix a = random_sectorial(4, 1.0, Seed{115});
  const ComplexMatrix b = gen::psd(4, rng, 0.2, 2.0);
  std::vector<Complex> zs;
  for (double re : {0.25, 0.5, 0.75})
    for (double im : {-0.5, 0.0, 0.5}) zs.emplace_back(re, im);
  const PowerSandwichFamily f = power_sandwich_family(b, a, zs);
  EXPECT_EQ(f.values.size(), 9u);
  EXPECT_LE(f.splitting_residual, 1e-7 * f.scale);
  EXPECT_LE(f.conjugation_residual, 1e-7 * f.scale);
}

TEST(PowerSandwich, Errors) {
  expect_kind([] { power_sandwich_family(diag({1.0, 0.0}), identity(2), {Complex(0.5, 0.0)}); },
              ErrorKind::KernelNotTrivial);
  expect_kind([] { power_sandwich_family(identity(2), remark43(1.0), {Complex(0.5, 0.0)}); },
              ErrorKind::NotSectorial);
  expect_kind([] { power_sandwich_family(identity(2), identity(2), {Complex(1.5, 0.0)}); },
              ErrorKind::ReOutOfRange);
}
