// opkit command-line front end. Every subcommand reads matrices, calls the
// library, and writes a JSON report (stdout or --out).
#include "opkit/opkit.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

namespace {

using namespace opkit;

struct Globals {
  double rel_tol = 1e-10;
  double rank_tol = 0.0;
  int max_panels = 4096;
  std::string out;
  std::string format;  // "", "mm" or "json"
};

MatrixFormat input_format(const Globals& g, const std::string& path) {
  if (g.format == "json") return MatrixFormat::json;
  if (g.format == "mm") return MatrixFormat::matrix_market;
  return guess_format(path);
}

QuadratureConfig quad_config(const Globals& g) {
  QuadratureConfig cfg;
  cfg.rel_tol = g.rel_tol;
  cfg.max_panels = g.max_panels;
  return cfg;
}

class Command {
 public:
  Command(const Globals& g, std::string name) : g_(g) {
    doc_.command = std::move(name);
    doc_.tolerances_used["rel_tol"] = g.rel_tol;
    doc_.tolerances_used["rank_tol"] = g.rank_tol;
    doc_.tolerances_used["max_panels"] = g.max_panels;
  }

  ComplexMatrix load(const std::string& path) {
    doc_.inputs.push_back(digest_file(path));
    return read_matrix(path, input_format(g_, path));
  }

  Json& results() { return doc_.results; }
  ReportDocument& doc() { return doc_; }

 private:
  const Globals& g_;
  ReportDocument doc_;
};

Json real_array(const RealVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("list", "invalid number '" + item + "'");
    }
  }
  return out;
}

const CLI::Validator kNumberList(
    [](std::string& text) {
      try {
        parse_list(text);
      } catch (const CLI::ValidationError&) {
        return std::string("expected a comma-separated list of numbers");
      }
      return std::string();
    },
    "LIST");

void emit(const Globals& g, const ReportDocument& doc) {
  const std::string text = serialize_report(doc);
  if (g.out.empty()) std::cout << text;
  else write_file(g.out, text);
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  if (const char* env = std::getenv("OPKIT_DEFAULT_TOL")) {
    try {
      g.rel_tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "OPKIT_DEFAULT_TOL is not a number\n";
      return 2;
    }
  }

  CLI::App app{"opkit: polar decompositions, fractional powers and sectorial operator checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--rel-tol", g.rel_tol, "relative tolerance (overrides OPKIT_DEFAULT_TOL)");
  app.add_option("--rank-tol", g.rank_tol, "relative rank cutoff (0 = default)")->check(CLI::NonNegativeNumber);
  app.add_option("--max-panels", g.max_panels, "quadrature panel limit")->check(CLI::Range(4, 1 << 24));
  app.add_option("--out", g.out, "report output file (default stdout)");
  app.add_option("--format", g.format, "matrix file format")->check(CLI::IsMember({"mm", "json"}));

  std::string input;
  const auto add_input = [&](CLI::App* sub) { sub->add_option("-i,--input", input, "input matrix file")->required(); };

  // polar
  auto* polar_cmd = app.add_subcommand("polar", "polar decomposition T = U|T|");
  add_input(polar_cmd);

  // gpolar
  auto* gpolar_cmd = app.add_subcommand("gpolar", "generalized polar decomposition φ(|T*|) U ψ(|T|)");
  add_input(gpolar_cmd);
  double alpha = 0.5;
  std::string phi_name, psi_name;
  auto* gp_alpha = gpolar_cmd->add_option("--alpha", alpha, "use φ = λ^α, ψ = λ^{1-α}");
  auto* gp_phi = gpolar_cmd->add_option("--phi", phi_name, "named φ: one, id, sqrt, square, inv, pow:<p>");
  auto* gp_psi = gpolar_cmd->add_option("--psi", psi_name, "named ψ");
  gp_phi->needs(gp_psi);
  gp_psi->needs(gp_phi);
  gp_alpha->excludes(gp_phi)->excludes(gp_psi);

  // fracpow
  auto* frac_cmd = app.add_subcommand("fracpow", "(S + I)^{-z} by the resolvent integral");
  add_input(frac_cmd);
  double frac_alpha = 0.5;
  std::string z_text;
  auto* fp_alpha = frac_cmd->add_option("--alpha", frac_alpha, "real exponent in (0,1)");
  auto* fp_z = frac_cmd->add_option("--z", z_text, "complex exponent re,im")->check(kNumberList);
  fp_alpha->excludes(fp_z);

  // specproj
  auto* spec_cmd = app.add_subcommand("specproj", "spectral projection E_H(λ) of a Hermitian matrix");
  add_input(spec_cmd);
  double lambda = 0.0;
  spec_cmd->add_option("--lambda", lambda, "spectral parameter")->required();

  // nrange
  auto* nr_cmd = app.add_subcommand("nrange", "numerical range boundary and sectorial certificate");
  add_input(nr_cmd);
  int points = 256;
  nr_cmd->add_option("--points", points, "number of support angles")->check(CLI::Range(8, 1 << 20));

  // kato
  auto* kato_cmd = app.add_subcommand("kato", "Kato factorization A = A_R^{1/2}(I + iX)A_R^{1/2}");
  add_input(kato_cmd);

  // acute
  auto* acute_cmd = app.add_subcommand("acute", "acute-angle constants of a sectorial matrix");
  add_input(acute_cmd);
  double acute_alpha = 0.5;
  bool shifted = false;
  std::uint64_t seed = 1;
  acute_cmd->add_option("--alpha", acute_alpha, "exponent in (0, 1/2]")->required();
  acute_cmd->add_flag("--shifted", shifted, "use A + I");
  acute_cmd->add_option("--seed", seed, "sampling seed");

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "relative/form bound report for (B, A)");
  std::string b_path, a_path, mus_text = "0.1,1,10,100", grid_text = "0,0.5,1,2,4";
  bounds_cmd->add_option("--B", b_path, "B matrix file")->required();
  bounds_cmd->add_option("--A", a_path, "A matrix file (Hermitian PSD)")->required();
  bounds_cmd->add_option("--mus", mus_text, "comma-separated μ values")->check(kNumberList);
  bounds_cmd->add_option("--a-grid", grid_text, "comma-separated ã values")->check(kNumberList);

  // intertwine
  auto* tw_cmd = app.add_subcommand("intertwine", "intertwining residuals for V A1 = A2 V");
  std::string v_path, a1_path, a2_path;
  bool check = false;
  tw_cmd->add_flag("--check", check, "report residuals")->required();
  tw_cmd->add_option("--V", v_path, "V matrix file")->required();
  tw_cmd->add_option("--A1", a1_path, "A1 matrix file")->required();
  tw_cmd->add_option("--A2", a2_path, "A2 matrix file")->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "write a seeded fixture matrix");
  std::string fixture, gen_out;
  Eigen::Index gen_n = 4;
  double theta = 0.5, cond = 10.0, t0 = 1.0;
  gen_cmd->add_option("fixture", fixture, "fixture name")
      ->required()
      ->check(CLI::IsMember({"random_sectorial", "dirichlet_laplacian_1d", "remark43", "heinz_pair_A", "heinz_pair_B",
                             "similar_to_selfadjoint", "ginibre", "psd"}));
  gen_cmd->add_option("--n", gen_n, "dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", seed, "seed");
  gen_cmd->add_option("--theta", theta, "semi-angle for random_sectorial");
  gen_cmd->add_option("--cond", cond, "condition number for similar_to_selfadjoint");
  gen_cmd->add_option("--t0", t0, "parameter for remark43");
  gen_cmd->add_option("-o,--output", gen_out, "matrix output file")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run property suites");
  std::string suite = "all";
  std::vector<std::string> suite_names{"all"};
  for (const auto& [name, fn] : verify::suites()) suite_names.push_back(name);
  verify_cmd->add_option("--suite", suite, "suite name or 'all'")->required()->check(CLI::IsMember(suite_names));
  verify_cmd->add_option("--seed", seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Command cmd(g, app.get_subcommands().front()->get_name());
  auto& res = cmd.results();
  const double rank_tol = g.rank_tol;
  int status = 0;
  try {
    if (*polar_cmd) {
      const ComplexMatrix t = cmd.load(input);
      const PolarFactors pf = polar(t, rank_tol);
      res["U"] = matrix_to_json(pf.U);
      res["absT"] = matrix_to_json(pf.absT);
      res["absTstar"] = matrix_to_json(pf.absTstar);
      res["numerical_rank"] = pf.numerical_rank;
      res["singular_values"] = real_array(pf.singular_values);
      res["reconstruction_residual"] = (pf.U * pf.absT - t).norm();
      res["half_power_identities"] = half_power_identities(t, rank_tol);
    } else if (*gpolar_cmd) {
      const ComplexMatrix t = cmd.load(input);
      const FunctionPair pair = gp_phi->count() > 0
                                    ? FunctionPair{named_function(phi_name), named_function(psi_name), phi_name + "/" + psi_name}
                                    : FunctionPair::alpha(alpha);
      const GeneralizedPolarFactors f = generalized_polar(t, pair, rank_tol);
      res["pair"] = pair.label;
      res["left"] = matrix_to_json(f.left);
      res["mid"] = matrix_to_json(f.mid);
      res["right"] = matrix_to_json(f.right);
      res["reconstruction_residual"] = (f.product() - t).norm();
    } else if (*frac_cmd) {
      const ComplexMatrix s = cmd.load(input);
      Complex z(frac_alpha, 0.0);
      if (fp_z->count() > 0) {
        const std::vector<double> parts = parse_list(z_text);
        if (parts.size() != 2) throw CLI::ValidationError("--z", "expected re,im");
        z = Complex(parts[0], parts[1]);
      }
      const PowerResult p = complex_power(s, z, quad_config(g));
      res["value"] = matrix_to_json(p.value);
      res["z"] = {{"re", z.real()}, {"im", z.imag()}};
      res["estimated_error"] = p.estimated_error;
      res["panels_used"] = p.panels_used;
      res["norm"] = op_norm(p.value);
      res["norm_bound"] = complex_power_norm_bound(z);
    } else if (*spec_cmd) {
      const ComplexMatrix h = cmd.load(input);
      const SpectralProjectionResult p = spectral_projection_resolvent(h, lambda, quad_config(g));
      cmd.doc().tolerances_used["gap_tol"] = kDefaultGapTol;
      res["lambda"] = lambda;
      res["value"] = matrix_to_json(p.value);
      res["estimated_error"] = p.estimated_error;
      res["panels_used"] = p.panels_used;
      res["exact_hits"] = p.exact_hits;
    } else if (*nr_cmd) {
      const ComplexMatrix a = cmd.load(input);
      const NumericalRangeBoundary b = numerical_range_boundary(a, points);
      const SectorialCertificate c = sectorial_certificate(a, points);
      Json re = Json::array(), im = Json::array();
      for (const Complex& w : b.points) {
        re.push_back(w.real());
        im.push_back(w.imag());
      }
      res["boundary"] = {{"re", re}, {"im", im}};
      res["certificate"] = {{"accretive", c.accretive},
                            {"accretivity_margin", c.accretivity_margin},
                            {"sectorial", c.sectorial},
                            {"semi_angle_theta", c.semi_angle_theta},
                            {"sampled_theta", c.sampled_theta},
                            {"vertex", c.vertex}};
    } else if (*kato_cmd) {
      const ComplexMatrix a = cmd.load(input);
      const KatoFactors k = kato_decompose(a, rank_tol);
      res["A_R"] = matrix_to_json(k.A_R);
      res["X"] = matrix_to_json(k.X);
      res["X_norm"] = op_norm(k.X);
      res["reconstruction_residual"] = k.reconstruction_residual;
      res["semi_angle_theta"] = sectorial_certificate(a).semi_angle_theta;
    } else if (*acute_cmd) {
      const ComplexMatrix a = cmd.load(input);
      const AcuteAngleReport r = acute_angle(a, acute_alpha, shifted, Seed{seed}, 1000, quad_config(g));
      cmd.doc().seed = seed;
      cmd.doc().tolerances_used["inequality_slack"] = 1e-8;
      res["Y"] = matrix_to_json(r.Y);
      res["eps1"] = r.eps1;
      res["eps2"] = r.eps2;
      res["eps0"] = r.eps0;
      res["alpha"] = r.alpha;
      res["shifted"] = r.shifted;
      res["samples"] = r.samples;
      res["violations_max_form"] = r.violations_max_form;
      res["violations_product_form"] = r.violations_product_form;
    } else if (*bounds_cmd) {
      const ComplexMatrix b = cmd.load(b_path);
      const ComplexMatrix a = cmd.load(a_path);
      const BoundReport r = bound_report(b, a, parse_list(mus_text), parse_list(grid_text));
      Json pairs = Json::array(), curve = Json::array();
      for (const BoundPair& p : r.pairs) pairs.push_back({{"a", p.a}, {"b", p.b}, {"quadratic", p.quadratic}});
      for (const CurvePoint& c : r.curve) curve.push_back({{"mu", c.mu}, {"norm", c.norm}});
      res["pairs"] = pairs;
      res["curve"] = curve;
      res["form_norm"] = r.form_norm;
      res["form_norm_adjoint"] = r.form_norm_adjoint;
      res["sandwich_norm"] = r.sandwich_norm;
      res["finite_dimensional_relative_bound"] = r.finite_dimensional_relative_bound;
    } else if (*tw_cmd) {
      const IntertwineTriple t{cmd.load(v_path), cmd.load(a1_path), cmd.load(a2_path)};
      const ResidualReport r = intertwining_residuals(t);
      res["r_primal"] = r.r_primal;
      res["r_adjoint"] = r.r_adjoint;
      res["scale"] = intertwining_scale(t);
    } else if (*gen_cmd) {
      ComplexMatrix m;
      if (fixture == "random_sectorial") m = random_sectorial(gen_n, theta, Seed{seed});
      else if (fixture == "dirichlet_laplacian_1d") m = dirichlet_laplacian_1d(gen_n);
      else if (fixture == "remark43") m = remark43(t0);
      else if (fixture == "heinz_pair_A") m = heinz_pair(gen_n, Seed{seed}).A;
      else if (fixture == "heinz_pair_B") m = heinz_pair(gen_n, Seed{seed}).B;
      else if (fixture == "similar_to_selfadjoint") m = similar_to_selfadjoint(gen_n, cond, Seed{seed}).A;
      else {
        Rng rng(Seed{seed});
        m = fixture == "ginibre" ? gen::ginibre(gen_n, gen_n, rng) : gen::psd(gen_n, rng, 0.0, 1.0);
      }
      const MatrixFormat fmt = g.format.empty() ? guess_format(gen_out) : input_format(g, gen_out);
      write_matrix(m, gen_out, fmt);
      cmd.doc().seed = seed;
      res["fixture"] = fixture;
      res["rows"] = m.rows();
      res["cols"] = m.cols();
      res["output"] = digest_file(gen_out).sha256;
    } else if (*verify_cmd) {
      std::vector<std::string> names;
      if (suite == "all")
        for (const auto& [name, fn] : verify::suites()) names.push_back(name);
      else names.push_back(suite);
      cmd.doc().seed = seed;
      Json suites = Json::object(), failures = Json::array();
      for (const std::string& name : names) {
        const verify::SuiteResult r = verify::run_suite(name, seed);
        suites[name] = verify::to_json(r);
        for (const verify::Check& c : r.checks)
          if (!c.passed) failures.push_back(name + "/" + c.name);
      }
      res["suites"] = suites;
      res["failures"] = failures;
      res["passed"] = failures.empty();
      if (!failures.empty()) status = 1;
    }
    emit(g, cmd.doc());
    return status;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    ReportDocument& doc = cmd.doc();
    doc.results = Json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    try {
      emit(g, doc);
    } catch (const std::exception&) {
    }
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
