// Property suites run by `opkit verify`. Each suite is a deterministic
// function of its seed and returns named checks with residuals and the
// tolerances they were held to.
#pragma once

#include "opkit/bounds.hpp"
#include "opkit/core.hpp"
#include "opkit/fixtures.hpp"
#include "opkit/funcalc.hpp"
#include "opkit/intertwine.hpp"
#include "opkit/io.hpp"
#include "opkit/polar.hpp"
#include "opkit/sectorial.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace opkit::verify {

struct Check {
  std::string name;
  double value = 0.0;  // residual or violation count
  double tolerance = 0.0;
  bool passed = false;
  std::string error;  // set when the check threw
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

class Recorder {
 public:
  /// value ≤ tolerance.
  void le(const std::string& name, double value, double tolerance) {
    checks_.push_back({name, value, tolerance, std::isfinite(value) && value <= tolerance, ""});
  }
  /// Runs `body` and records its value; exceptions fail the check.
  void le(const std::string& name, const std::function<double()>& body, double tolerance) {
    try {
      le(name, body(), tolerance);
    } catch (const std::exception& e) {
      checks_.push_back({name, 0.0, tolerance, false, e.what()});
    }
  }
  void expect_true(const std::string& name, bool ok) { checks_.push_back({name, ok ? 0.0 : 1.0, 0.0, ok, ""}); }
  void expect_error(const std::string& name, ErrorKind kind, const std::function<void()>& body) {
    try {
      body();
      checks_.push_back({name, 1.0, 0.0, false, "no error raised"});
    } catch (const Error& e) {
      const bool ok = e.kind() == kind;
      checks_.push_back({name, ok ? 0.0 : 1.0, 0.0, ok, ok ? "" : std::string("raised ") + to_string(e.kind())});
    } catch (const std::exception& e) {
      checks_.push_back({name, 1.0, 0.0, false, e.what()});
    }
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

// Running maximum helper for per-sample residuals.
struct Max {
  double v = 0.0;
  void operator()(double x) { v = std::isfinite(x) ? std::max(v, x) : std::numeric_limits<double>::infinity(); }
};

inline ComplexMatrix random_test_matrix(Rng& rng, int k) {
  const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.next_u64() % 11);
  const Eigen::Index cols = (k % 3 == 0) ? rows : 2 + static_cast<Eigen::Index>(rng.next_u64() % 11);
  if (k % 4 == 1) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.next_u64() % std::min(rows, cols));
    return gen::low_rank(rows, cols, r, rng);
  }
  return gen::ginibre(rows, cols, rng);
}

inline ComplexMatrix eig_projection_oracle(const ComplexMatrix& h, double lambda) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexMatrix e = ComplexMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    if (es.eigenvalues()(i) <= lambda) e += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return e;
}

// ---------------------------------------------------------------------------

inline std::vector<Check> suite_core(std::uint64_t seed) {
  Recorder r;
  Rng rng(Seed{seed});
  Max svd_res, eig_res, normal_res, sqrt_res, pinv_res;
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix t = random_test_matrix(rng, k);
    const SVDResult s = svd(t);
    svd_res((s.U_left * s.singular_values.cast<Complex>().asDiagonal() * s.V_right.adjoint() - t).norm() / t.norm());

    const ComplexMatrix h = gen::hermitian(5, rng);
    eig_res((eig_hermitian(h).reconstruct() - h).norm() / h.norm());

    const ComplexMatrix q = gen::unitary(5, rng);
    const ComplexMatrix d = gen::ginibre(5, 1, rng);
    const ComplexMatrix a = q * ComplexVector(d.col(0)).asDiagonal() * q.adjoint();
    normal_res((diagonalize_normal(a).reconstruct() - a).norm() / a.norm());

    const ComplexMatrix p = gen::low_rank(5, 3, 3, rng);
    const ComplexMatrix psd = hermitian_part(p * p.adjoint());
    const PsdSqrt ps = pinv_psd_sqrt(psd);
    sqrt_res((ps.sqrt * ps.sqrt - psd).norm() / psd.norm());
    pinv_res((ps.pinv_sqrt * ps.sqrt + ps.kernel_projector - identity(5)).norm());
  }
  r.le("svd_reconstruction_rel", svd_res.v, 1e-12);
  r.le("eig_hermitian_reconstruction_rel", eig_res.v, 1e-12);
  r.le("diagonalize_normal_reconstruction_rel", normal_res.v, 1e-12);
  r.le("psd_sqrt_square_rel", sqrt_res.v, 1e-10);
  r.le("pinv_sqrt_complement", pinv_res.v, 1e-8);
  r.expect_error("eig_hermitian_rejects_non_hermitian", ErrorKind::NotHermitian, [] {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    eig_hermitian(m);
  });
  return r.take();
}

inline std::vector<Check> suite_polar(std::uint64_t seed) {
  Recorder r;
  Rng rng(Seed{seed});
  Max recon, init, fin, half;
  const double alphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int k = 0; k < 40; ++k) {
    const ComplexMatrix t = random_test_matrix(rng, k);
    const double tn = t.norm();
    for (double a : alphas) recon(( generalized_polar(t, FunctionPair::alpha(a)).product() - t).norm() / tn);
    const PolarFactors pf = polar(t);
    init((pf.U.adjoint() * pf.U - pf.P_init).norm());
    fin((pf.U * pf.U.adjoint() - pf.P_final).norm());
    for (const auto& [name, v] : half_power_identities(t)) half(v / tn);
  }
  r.le("generalized_polar_reconstruction_rel", recon.v, 1e-9);
  r.le("initial_projection", init.v, 1e-10);
  r.le("final_projection", fin.v, 1e-10);
  r.le("half_power_identities_rel", half.v, 1e-9);
  r.expect_error("rank_deficient_inverse_pair", ErrorKind::RankDeficiencyConflict, [] {
    ComplexMatrix t = ComplexMatrix::Zero(2, 2);
    t(0, 0) = 1.0;
    generalized_polar(t, {[](double l) { return l * l; }, [](double l) { return 1.0 / l; }, "square/inv"});
  });
  return r.take();
}

inline std::vector<Check> suite_funcalc(std::uint64_t seed) {
  Recorder r;
  Rng rng(Seed{seed});
  r.le("diag_0_3_half_power", [] {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(1, 1) = 3.0;
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    expect(1, 1) = 0.5;
    return (frac_power_m_accretive(s, 0.5).value - expect).norm();
  }, 1e-10);
  r.le("jordan_half_power_closed_form", [] {
    ComplexMatrix s(2, 2);
    s << 1.0, 1.0, 0.0, 1.0;
    ComplexMatrix expect(2, 2);
    expect << 1.0 / std::sqrt(2.0), -1.0 / (4.0 * std::sqrt(2.0)), 0.0, 1.0 / std::sqrt(2.0);
    return (frac_power_m_accretive(s, 0.5).value - expect).norm();
  }, 1e-9);

  Max psd_rel, semigroup, bound_excess, proj_err, imag_excess;
  for (int k = 0; k < 6; ++k) {
    const ComplexMatrix h = gen::psd(6, rng, 0.0, 5.0);
    const double alpha = rng.uniform(0.05, 0.95);
    const ComplexMatrix oracle = psd_power(h + identity(6), -alpha);
    psd_rel((frac_power_m_accretive(h, alpha).value - oracle).norm() / oracle.norm());

    const ComplexMatrix s = random_sectorial(5, 1.2, Seed{seed + 100 + static_cast<std::uint64_t>(k)});
    const ComplexMatrix q = frac_power_m_accretive(s, 0.25).value;
    const ComplexMatrix h2 = frac_power_m_accretive(s, 0.5).value;
    semigroup((q * q - h2).norm() / h2.norm());

    for (double re : {0.1, 0.5, 0.9})
      for (double im : {-1.0, 0.0, 1.5}) {
        const Complex z(re, im);
        bound_excess(op_norm(complex_power(s, z).value) - complex_power_norm_bound(z));
      }

    ComplexVector d(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      const double mag = rng.uniform(0.2, 1.0);
      d(i) = (i % 2 == 0) ? mag : -mag;
    }
    const ComplexMatrix w = gen::unitary(6, rng);
    const ComplexMatrix hh = hermitian_part(w * d.asDiagonal() * w.adjoint());
    const double lambda = rng.uniform(-0.05, 0.05);
    proj_err((spectral_projection_resolvent(hh, lambda).value - eig_projection_oracle(hh, lambda)).norm());

    const SimilarFixture f = similar_to_selfadjoint(5, 10.0, Seed{seed + 200 + static_cast<std::uint64_t>(k)});
    const double cond = condition_number(f.V);
    for (double g : {-4.0, -1.0, 2.0}) imag_excess(op_norm(imaginary_power(f.A, g)) - cond);
  }
  r.le("psd_power_vs_spectral_rel", psd_rel.v, 1e-8);
  r.le("semigroup_rel", semigroup.v, 1e-7);
  r.le("complex_power_norm_bound_excess", bound_excess.v, 1e-6);
  r.le("spectral_projection_vs_eigenprojection", proj_err.v, 1e-6);
  r.le("imaginary_power_similarity_excess", imag_excess.v, 1e-6);
  r.le("spectral_projection_exact_hit", [] {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = -1.0;
    h(2, 2) = 2.0;
    ComplexMatrix expect = ComplexMatrix::Zero(3, 3);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0;
    return (spectral_projection_resolvent(h, 0.0).value - expect).norm();
  }, 1e-10);
  r.expect_error("re_out_of_range", ErrorKind::ReOutOfRange,
                 [] { complex_power(identity(2), Complex(1.5, 0.0)); });
  return r.take();
}

inline std::vector<Check> suite_intertwine(std::uint64_t seed) {
  Recorder r;
  Max fp, primal, resolvent, commute, gform;
  for (int k = 0; k < 20; ++k) {
    const IntertwineTriple t = random_normal_intertwined(2 + k % 7, Seed{seed + static_cast<std::uint64_t>(k)});
    const ResidualReport rep = intertwining_residuals(t);
    const double scale = intertwining_scale(t);
    primal(rep.r_primal / scale);
    fp(rep.r_adjoint / scale);
    resolvent(resolvent_intertwining_residual(t, Complex(3.0, 2.5)) / std::max(t.V.norm(), 1e-300));
  }
  Rng rng(Seed{seed});
  for (int k = 0; k < 5; ++k) {
    ComplexVector d(6);
    for (Eigen::Index i = 0; i < 6; ++i) d(i) = (i < 3 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
    const ComplexMatrix q = gen::unitary(6, rng);
    const ComplexMatrix a1 = hermitian_part(q * d.asDiagonal() * q.adjoint());
    const IntertwineTriple t = normal_intertwined_from(a1, gen::unitary(6, rng), {rng.complex_normal(), rng.complex_normal()});
    commute(spectral_projection_commutation(t, 0.0) / t.V.norm());

    const ComplexMatrix p1 = gen::psd(5, rng, 0.0, 3.0);
    const IntertwineTriple tp = normal_intertwined_from(p1, gen::unitary(5, rng), {rng.complex_normal(), 1.0});
    const ComplexFunctionPair sq{[](Complex l) { return std::sqrt(Complex(std::max(l.real(), 0.0), 0.0)); },
                                 [](Complex l) { return std::sqrt(Complex(std::max(l.real(), 0.0), 0.0)); }, "sqrt"};
    gform(generalized_intertwined_form(tp, sq) / intertwining_scale(tp));
  }
  r.le("primal_residual_rel", primal.v, 1e-12);
  r.le("fuglede_putnam_adjoint_rel", fp.v, 1e-9);
  r.le("resolvent_intertwining_rel", resolvent.v, 1e-10);
  r.le("spectral_projection_commutation_rel", commute.v, 1e-8);
  r.le("generalized_intertwined_form_rel", gform.v, 1e-8);
  r.le("jordan_counterexample_sqrt2", [] {
    ComplexMatrix j = ComplexMatrix::Zero(2, 2);
    j(0, 1) = 1.0;
    return std::abs(intertwining_residuals({j, j, j}).r_adjoint - std::sqrt(2.0));
  }, 1e-12);
  return r.take();
}

inline std::vector<Check> suite_sectorial(std::uint64_t seed) {
  Recorder r;
  Max theta_excess, recon, xnorm, kernel, probe, acute_viol;
  double min_eps0 = std::numeric_limits<double>::infinity();
  double min_shifted_re = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 12; ++k) {
    const double theta0 = 0.1 + 0.1 * (k % 12);
    const ComplexMatrix a = random_sectorial(3 + k % 6, theta0, Seed{seed + static_cast<std::uint64_t>(k)});
    const SectorialCertificate c = sectorial_certificate(a);
    theta_excess(c.semi_angle_theta - theta0);
    const KatoFactors kf = kato_decompose(a);
    recon(kf.reconstruction_residual / op_norm(a));
    xnorm(op_norm(kf.X) - std::tan(c.semi_angle_theta));
    kernel((kf.X * kf.kernel_projector).norm());
    if (k % 3 == 0) {
      probe(t_sharp(a, k % 2 == 0).probe_residual);
      for (double alpha : {0.1, 0.25, 0.5}) {
        const AcuteAngleReport rep = acute_angle(a, alpha, false, Seed{seed + 7}, 200);
        acute_viol(rep.violations_max_form + rep.violations_product_form);
        min_eps0 = std::min(min_eps0, rep.eps0);
      }
      min_shifted_re = std::min(min_shifted_re, lambda_min_hermitian(hermitian_part(acute_angle(a, 0.5, true, Seed{seed}, 50).Y)));
    }
  }
  r.le("semi_angle_within_construction", theta_excess.v, 1e-6);
  r.le("kato_reconstruction_rel", recon.v, 1e-9);
  r.le("kato_x_norm_excess", xnorm.v, 1e-7);
  r.le("kato_x_on_kernel", kernel.v, 1e-9);
  r.le("t_sharp_probe", probe.v, 1e-8);
  r.le("acute_angle_violations", acute_viol.v, 0.0);
  r.expect_true("acute_angle_eps0_positive", min_eps0 > 0.0);
  r.expect_true("shifted_y_real_part_positive", min_shifted_re > 1e-12);
  r.expect_error("remark43_kernel_obstruction", ErrorKind::KernelObstruction, [] { kato_decompose(remark43(1.0)); });
  r.expect_true("remark43_not_sectorial", !sectorial_certificate(remark43(1.0)).sectorial);
  return r.take();
}

inline std::vector<Check> suite_bounds(std::uint64_t seed) {
  Recorder r;
  Rng rng(Seed{seed});
  const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> mus = {0.1, 0.5, 1.0, 2.0, 10.0};
  int form_viol = 0, sandwich_viol = 0, envelope_viol = 0;
  Max factored, adjoint_id;
  for (int k = 0; k < 15; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(k % 6);
    const ComplexMatrix a = gen::psd(n, rng, 0.0, 4.0);
    const ComplexMatrix b = gen::ginibre(n, n, rng);
    const auto pairs = admissible_pairs(b, a, grid);
    const auto pairs_adj = admissible_pairs(ComplexMatrix(b.adjoint()), a, grid);
    const SandwichResult sw = sandwich(b, a, a);
    factored(sw.factored_residual / b.norm());
    adjoint_id((sw.value.adjoint() - sandwich(ComplexMatrix(b.adjoint()), a, a).value).norm());
    const auto curve = relative_bound_curve(b, a, mus);
    for (const BoundPair& q : pairs) {
      const BoundPair lin = convert_pair(q, 1.0);
      if (!form_bound_check(b, a, lin).bound_ok) ++form_viol;
      for (const CurvePoint& cp : curve)
        if (cp.norm > lin.a + lin.b / cp.mu + 1e-10) ++envelope_viol;
      for (const BoundPair& qa : pairs_adj)
        if (sw.norm > sandwich_norm_bound(convert_pair(qa, 1.0), lin) + 1e-9) ++sandwich_viol;
    }
  }
  r.le("form_bound_violations", form_viol, 0.0);
  r.le("sandwich_bound_violations", sandwich_viol, 0.0);
  r.le("relative_bound_envelope_violations", envelope_viol, 0.0);
  r.le("sandwich_factored_rel", factored.v, 1e-8);
  r.le("sandwich_adjoint_identity", adjoint_id.v, 1e-10);

  Max heinz;
  for (int k = 0; k < 40; ++k) {
    const HeinzPair hp = heinz_pair(2 + k % 7, Seed{seed + 1000 + static_cast<std::uint64_t>(k)});
    const double an = op_norm(hp.A);
    for (const auto& [alpha, mn] : heinz_check(hp.A, hp.B, {0.1, 0.3, 0.5, 0.7, 0.9}))
      heinz(-mn / std::pow(an, 2.0 * alpha));
  }
  r.le("heinz_min_eigenvalue_deficit", heinz.v, 1e-8);

  r.le("subordination_violations", [&] {
    const ComplexMatrix a = hermitian_part(identity(4) + gen::psd(4, rng, 0.0, 2.0));
    const ComplexMatrix b = hermitian_part(identity(4) + gen::psd(4, rng, 0.0, 2.0));
    ComplexMatrix m = gen::ginibre(4, 4, rng);
    m /= op_norm(m);
    const SubordinationReport rep = subordination(m * a, a, b, {0.25, 0.5, 0.75}, Seed{seed}, 300);
    double bad = 0.0;
    for (const auto& e : rep.entries) bad += e.violations + (e.loewner_heinz_ok ? 0 : 1) + (e.route_discrepancy > 1e-10 ? 1 : 0);
    return bad;
  }, 0.0);

  Max split, conj, five;
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix a = random_sectorial(4, 0.6, Seed{seed + 2000 + static_cast<std::uint64_t>(k)});
    const ComplexMatrix b = gen::psd(4, rng, 0.5, 2.0);
    const PowerSandwichFamily fam = power_sandwich_family(b, a, {Complex(0.3, -0.5), Complex(0.5, 0.0), Complex(0.7, 1.0)});
    split(fam.splitting_residual / fam.scale);
    conj(fam.conjugation_residual / fam.scale);
    const ComplexMatrix bb = gen::ginibre(4, 4, rng);
    five(sectorial_sandwich_residual(bb, a) / bb.norm());
  }
  r.le("power_sandwich_splitting_rel", split.v, 1e-7);
  r.le("power_sandwich_conjugation_rel", conj.v, 1e-7);
  r.le("sectorial_five_factor_rel", five.v, 1e-7);
  return r.take();
}

inline std::vector<Check> suite_fixtures(std::uint64_t seed) {
  Recorder r;
  r.expect_true("random_sectorial_deterministic",
                random_sectorial(6, 0.4, Seed{seed}) == random_sectorial(6, 0.4, Seed{seed}));
  r.expect_true("normal_intertwined_deterministic",
                random_normal_intertwined(5, Seed{seed}).V == random_normal_intertwined(5, Seed{seed}).V);
  Max lap;
  for (Eigen::Index n : {1, 3, 8, 20}) {
    const RealVector ev = hermitian_eigenvalues(dirichlet_laplacian_1d(n));
    const double h = static_cast<double>(n + 1);
    for (Eigen::Index k = 1; k <= n; ++k) {
      const double s = std::sin(static_cast<double>(k) * kPi / (2.0 * h));
      const double expect = 4.0 * h * h * s * s;
      lap(std::abs(ev(k - 1) - expect) / expect);
    }
  }
  r.le("laplacian_closed_form_spectrum_rel", lap.v, 1e-9);
  r.le("remark43_accretive_margin", [] {
    const AccretiveCertificate c = accretive_certificate(remark43(1.0));
    return c.accretive ? std::abs(c.margin) : 1.0;
  }, 1e-15);
  r.expect_error("remark43_zero_parameter", ErrorKind::ZeroParameter, [] { remark43(0.0); });
  Max heinz_hyp, cond_dev;
  for (int k = 0; k < 10; ++k) {
    const HeinzPair hp = heinz_pair(4, Seed{seed + static_cast<std::uint64_t>(k)});
    const double an = op_norm(hp.A);
    heinz_hyp(-lambda_min_hermitian(hermitian_part(hp.A * hp.A - hp.B * hp.B)) / (an * an));
    heinz_hyp(1.0 - lambda_min_hermitian(hp.B));
    const SimilarFixture f = similar_to_selfadjoint(5, 20.0, Seed{seed + static_cast<std::uint64_t>(k)});
    cond_dev(std::abs(condition_number(f.V) / 20.0 - 1.0));
  }
  r.le("heinz_pair_hypotheses", heinz_hyp.v, 1e-10);
  r.le("similar_condition_within_10pct", cond_dev.v, 0.1);
  return r.take();
}

inline std::vector<Check> suite_io(std::uint64_t seed) {
  Recorder r;
  Rng rng(Seed{seed});
  const ComplexMatrix m = gen::ginibre(4, 3, rng);
  r.expect_true("matrix_market_round_trip_bitwise", [&] {
    std::istringstream in(format_matrix_market(m));
    return parse_matrix_market(in) == m;
  }());
  r.expect_true("json_matrix_round_trip_bitwise", matrix_from_json(Json::parse(matrix_to_json(m).dump())) == m);
  r.expect_true("report_round_trip", [&] {
    ReportDocument d;
    d.command = "verify";
    d.results = {{"x", 0.1}, {"m", matrix_to_json(m)}};
    d.tolerances_used = {{"rel_tol", 1e-10}};
    d.seed = seed;
    return parse_report(serialize_report(d)) == d;
  }());
  r.expect_error("report_rejects_nan", ErrorKind::NonFiniteValue, [] {
    ReportDocument d;
    d.results = {{"bad", std::numeric_limits<double>::quiet_NaN()}};
    serialize_report(d);
  });
  r.expect_error("pattern_unsupported", ErrorKind::UnsupportedFormat, [] {
    std::istringstream in("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n");
    parse_matrix_market(in);
  });
  return r.take();
}

// ---------------------------------------------------------------------------

using SuiteFn = std::vector<Check> (*)(std::uint64_t);

inline const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table = {
      {"bounds", suite_bounds},       {"core", suite_core},         {"fixtures", suite_fixtures},
      {"funcalc", suite_funcalc},     {"intertwine", suite_intertwine}, {"io", suite_io},
      {"polar", suite_polar},         {"sectorial", suite_sectorial},
  };
  return table;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  const auto it = suites().find(name);
  if (it == suites().end()) throw Error(ErrorKind::InvalidInput, "unknown suite '" + name + "'");
  SuiteResult out{name, {}};
  try {
    out.checks = it->second(seed);
  } catch (const std::exception& e) {
    out.checks.push_back({"suite_aborted", 0.0, 0.0, false, e.what()});
  }
  return out;
}

inline Json to_json(const SuiteResult& s) {
  Json checks = Json::array();
  for (const Check& c : s.checks) {
    Json j{{"name", c.name}, {"tolerance", c.tolerance}, {"passed", c.passed}};
    if (std::isfinite(c.value)) j["value"] = c.value;
    else j["value"] = std::isnan(c.value) ? "nan" : (c.value > 0 ? "inf" : "-inf");
    if (!c.error.empty()) j["error"] = c.error;
    checks.push_back(j);
  }
  return Json{{"passed", s.passed()}, {"checks", checks}};
}

}  // namespace opkit::verify
