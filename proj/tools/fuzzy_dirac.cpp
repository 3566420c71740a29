// fuzzy-dirac: command-line surface for the fuzzy-sphere Dirac engine.
//
// Subcommands:
//   spectrum      Dirac eigenvalues per angular-momentum block (json|csv)
//   verify        spectral-triple axiom residuals, signs, KO dimension,
//                 moduli dimensions and integral laws
//   reduce        lambda_p = 1/n matrix reduction and consistency residuals
//   distance      Connes spectral distance between states
//   lichnerowicz  residual of D^2 = Delta_S + curvature, per block
//
// Exit status: 0 all asserted identities pass, 1 verification failure,
// 2 usage error. FUZZY_DIRAC_TOL overrides the default tolerance; --config
// supplies a JSON file whose fields are merged under explicit flags.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fuzzydirac/distance.hpp"
#include "fuzzydirac/json_io.hpp"
#include "fuzzydirac/reduced.hpp"

namespace {

using fuzzy::cd;
using json = fuzzy::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr const char* kSchema = "fuzzy-dirac/1";

double default_tol() {
  if (const char* env = std::getenv("FUZZY_DIRAC_TOL")) {
    try {
      double t = std::stod(env);
      if (t > 0.0) return t;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("FUZZY_DIRAC_TOL must be a positive number");
  }
  return 1e-10;
}

std::vector<double> parse_floats(const std::string& s) {
  std::string cleaned = s;
  for (char& ch : cleaned)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream is(cleaned);
  std::vector<double> vals;
  double v;
  while (is >> v) vals.push_back(v);
  if (!is.eof())
    throw CLI::ValidationError("could not parse number list: " + s);
  return vals;
}

/// "round", "diag:a,b,c", or nine row-major floats (symmetry validated).
fuzzy::QuantumMetric parse_metric(const std::string& spec, double tol) {
  if (spec == "round") return fuzzy::round_metric();
  if (spec.rfind("diag:", 0) == 0) {
    auto v = parse_floats(spec.substr(5));
    if (v.size() != 3)
      throw CLI::ValidationError("diag: metric needs three values");
    return fuzzy::diag_metric(v[0], v[1], v[2]);
  }
  auto v = parse_floats(spec);
  if (v.size() != 9)
    throw CLI::ValidationError(
        "metric must be 'round', 'diag:a,b,c' or nine row-major floats");
  Eigen::Matrix3d g;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g(r, c) = v[3 * r + c];
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + g.norm()))
    throw CLI::ValidationError("metric matrix must be symmetric");
  return fuzzy::make_metric(g, tol);
}

json metric_json(const fuzzy::QuantumMetric& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r)
    rows.push_back(json::array({m.g(r, 0), m.g(r, 1), m.g(r, 2)}));
  return rows;
}

void emit(const json& report, const std::string& output) {
  if (output.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream os(output);
    if (!os) throw CLI::ValidationError("cannot open output file " + output);
    os << report.dump(2) << "\n";
  }
}

/// Merge a JSON config file under explicit flags: every option that was not
/// given on the command line takes the config value when present.
void merge_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("cannot open config file " + path);
  json cfg = json::parse(is);
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (char& ch : flag)
      if (ch == '_') ch = '-';
    CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt == nullptr || opt->count() > 0) continue;
    std::string text =
        value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

struct CommonOpts {
  std::string metric = "round";
  double lambda_p = 0.25;
  int L = 3;
  double tol = default_tol();
  std::string config;
  std::string output;

  void attach(CLI::App* cmd, bool with_algebra = true) {
    cmd->add_option("--metric", metric,
                    "metric: 'round', 'diag:a,b,c' or nine floats");
    if (with_algebra) {
      cmd->add_option("--lambda-p", lambda_p,
                      "deformation parameter in (0,1)");
      cmd->add_option("--L", L, "angular momentum truncation");
    }
    cmd->add_option("--tol", tol, "numerical tolerance");
    cmd->add_option("--config", config, "JSON config merged under flags");
    cmd->add_option("--output", output, "write the report here (else stdout)");
  }
};

json clusters_json(const std::vector<fuzzy::EigenvalueCluster>& cs) {
  json out = json::array();
  for (const auto& c : cs)
    out.push_back(json{{"value", c.value}, {"multiplicity", c.multiplicity}});
  return out;
}

int run_spectrum(const CommonOpts& o, const std::string& format) {
  fuzzy::QuantumMetric m = parse_metric(o.metric, o.tol);
  fuzzy::Parameters p(o.lambda_p, o.L, o.tol);
  fuzzy::SpectralReport rep = fuzzy::spectrum(m, o.L, p);

  if (format == "csv") {
    std::ostringstream os;
    os << "l,eigenvalue,multiplicity\n";
    for (size_t l = 0; l < rep.per_l.size(); ++l)
      for (const auto& c : rep.per_l[l]) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu,%.12g,%d\n", l, c.value,
                      c.multiplicity);
        os << buf;
      }
    if (o.output.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream f(o.output);
      if (!f) throw CLI::ValidationError("cannot open output file " + o.output);
      f << os.str();
    }
    return kExitPass;
  }

  json blocks = json::array();
  for (size_t l = 0; l < rep.per_l.size(); ++l)
    blocks.push_back(json{{"l", l}, {"eigenvalues", clusters_json(rep.per_l[l])}});
  json report{{"schema", kSchema},
              {"command", "spectrum"},
              {"lambda_p", rep.lambda_p},
              {"L", rep.truncation_L},
              {"metric", metric_json(m)},
              {"hermiticity_residual", rep.hermiticity_residual},
              {"blocks", blocks},
              {"pass", true}};
  emit(report, o.output);
  return kExitPass;
}

int run_verify(const CommonOpts& o) {
  fuzzy::QuantumMetric m = parse_metric(o.metric, o.tol);
  fuzzy::SpinData sd = fuzzy::make_spin_data(m, {}, o.tol);
  fuzzy::AxiomReport r = fuzzy::verify_axioms(m, sd);
  fuzzy::ConnectionModuli moduli =
      fuzzy::solve_connection_moduli(sd.C, fuzzy::qlc(m), o.tol);

  fuzzy::Parameters p(o.lambda_p, o.L, o.tol);
  fuzzy::IntegralLawReport laws = fuzzy::verify_integral_laws(p);

  const double gate = 100.0 * o.tol;
  bool pass = r.max_residual() < gate && r.grading_dim == 0 &&
              laws.pass(gate) && moduli.kernel.size() == 3;

  json equations = json::array(
      {json{{"eq", "clifford"}, {"residual", r.clifford}},
       json{{"eq", "connection"}, {"residual", r.connection}},
       json{{"eq", "JJ"}, {"residual", r.jj}},
       json{{"eq", "SJ"}, {"residual", r.sj}},
       json{{"eq", "CJ"}, {"residual", r.cj}},
       json{{"eq", "torsion"}, {"residual", r.torsion}},
       json{{"eq", "metric-compatibility"}, {"residual", r.metric_compat}}});
  json report{{"schema", kSchema},
              {"command", "verify"},
              {"lambda_p", o.lambda_p},
              {"L", o.L},
              {"metric", metric_json(m)},
              {"equations", equations},
              {"eps", r.eps},
              {"eps_prime", r.eps_prime},
              {"eps_prime_iD", r.eps_prime_iD},
              {"ko_dimension", r.ko_dim},
              {"grading_dimension", r.grading_dim},
              {"grading_present", r.grading_dim > 0},
              {"real_structure", fuzzy::to_json(Eigen::MatrixXcd(sd.J_mat))},
              {"moduli",
               json{{"connection_kernel_dimension", moduli.kernel.size()},
                    {"real_structure_phases", 1}}},
              {"integral_laws",
               json{{"partial", laws.partial_law},
                    {"trace", laws.trace_law},
                    {"star", laws.star_law},
                    {"min_gram_eigenvalue", laws.min_gram_eigenvalue}}},
              {"pass", pass}};
  emit(report, o.output);
  return pass ? kExitPass : kExitFail;
}

int run_reduce(const CommonOpts& o, int n) {
  if (n < 2) throw CLI::ValidationError("--n must be at least 2");
  fuzzy::QuantumMetric m = parse_metric(o.metric, o.tol);
  if (!m.euclidean())
    throw CLI::ValidationError("reduce requires a Euclidean metric");
  fuzzy::Parameters p(1.0 / n, n - 1, o.tol);

  std::vector<double> red = fuzzy::reduced_spectrum(n, m);
  fuzzy::SpectralReport model = fuzzy::spectrum(m, n - 1, p);
  double spectrum_dev = 0.0;
  for (size_t k = 0; k < red.size(); ++k)
    spectrum_dev =
        std::max(spectrum_dev, std::abs(red[k] - model.sorted_spectrum[k]));

  std::mt19937 rng(4242);
  double hom_res = 0.0, integral_res = 0.0;
  fuzzy::Parameters half = p.with_truncation(std::max(1, (n - 1) / 2));
  fuzzy::Parameters lifted = p.with_truncation(2 * (n - 1));
  for (int s = 0; s < 20; ++s) {
    fuzzy::AlgebraElement a =
        fuzzy::random_element(half, half.truncation_L, rng).with_truncation(
            lifted.truncation_L);
    fuzzy::AlgebraElement b =
        fuzzy::random_element(half, half.truncation_L, rng).with_truncation(
            lifted.truncation_L);
    Eigen::MatrixXcd lhs = fuzzy::reduce(fuzzy::multiply(a, b), n);
    Eigen::MatrixXcd rhs = fuzzy::reduce(a, n) * fuzzy::reduce(b, n);
    hom_res = std::max(hom_res, (lhs - rhs).cwiseAbs().maxCoeff());
    cd tr = fuzzy::reduce(a, n).trace() / double(n);
    integral_res = std::max(integral_res, std::abs(fuzzy::integral(a) - tr));
  }

  const double gate = 100.0 * o.tol;
  bool pass = spectrum_dev < 1e-8 && hom_res < gate && integral_res < gate;
  json report{{"schema", kSchema},
              {"command", "reduce"},
              {"n", n},
              {"lambda_p", 1.0 / n},
              {"metric", metric_json(m)},
              {"reduced_spectrum",
               clusters_json(fuzzy::cluster_eigenvalues(red, o.tol))},
              {"spectrum_deviation", spectrum_dev},
              {"homomorphism_residual", hom_res},
              {"integral_residual", integral_res},
              {"pass", pass}};
  emit(report, o.output);
  return pass ? kExitPass : kExitFail;
}

fuzzy::State parse_state(const std::string& angles, const std::string& rho,
                         const char* which) {
  if (!angles.empty()) {
    auto v = parse_floats(angles);
    if (v.size() != 2)
      throw CLI::ValidationError(std::string(which) +
                                 " wants 'theta,phi' (two numbers)");
    return fuzzy::State::coherent(v[0], v[1]);
  }
  if (rho.empty())
    throw CLI::ValidationError(std::string("missing ") + which);
  json j;
  std::ifstream f(rho);
  if (f)
    j = json::parse(f);
  else
    j = json::parse(rho);
  return fuzzy::State::from_density(fuzzy::matrix_from_json(j));
}

int run_distance(const CommonOpts& o, int n, const std::string& state_a,
                 const std::string& state_b, const std::string& rho_a,
                 const std::string& rho_b) {
  fuzzy::QuantumMetric m = parse_metric(o.metric, o.tol);
  fuzzy::State wa = parse_state(state_a, rho_a, "--state-a/--rho-a");
  fuzzy::State wb = parse_state(state_b, rho_b, "--state-b/--rho-b");
  if (wa.rho.rows() != n || wb.rho.rows() != n)
    throw CLI::ValidationError("states must be n x n density matrices");

  fuzzy::DistanceResult res = fuzzy::distance_numeric(wa, wb, m, n, o.tol);
  double feas = fuzzy::lipschitz_seminorm(res.certificate, m, n);
  bool pass = feas <= 1.0 + 100.0 * o.tol &&
              res.lower_bound <= res.upper_bound + 100.0 * o.tol;

  json report{{"schema", kSchema},
              {"command", "distance"},
              {"n", n},
              {"metric", metric_json(m)},
              {"value", res.value},
              {"lower_bound", res.lower_bound},
              {"upper_bound", res.upper_bound},
              {"converged", res.converged},
              {"certificate", fuzzy::to_json(res.certificate)},
              {"certificate_seminorm", feas},
              {"pass", pass}};
  if (!state_a.empty() && !state_b.empty() && n == 2) {
    auto va = parse_floats(state_a), vb = parse_floats(state_b);
    report["analytic"] =
        fuzzy::distance_n2_analytic(va[0], va[1], vb[0], vb[1]);
  }
  emit(report, o.output);
  return pass ? kExitPass : kExitFail;
}

int run_lichnerowicz(const CommonOpts& o) {
  fuzzy::QuantumMetric m = parse_metric(o.metric, o.tol);
  fuzzy::Parameters p(o.lambda_p, o.L, o.tol);
  fuzzy::SpinData sd = fuzzy::make_spin_data(m, {}, o.tol);
  fuzzy::Matrix2 R = fuzzy::curvature_action(m, sd);

  json table = json::array();
  double worst = 0.0;
  for (int l = 0; l <= o.L; ++l) {
    double res = 0.0;
    for (const auto& e : fuzzy::spinor_basis(l, p)) {
      fuzzy::SpinorField lhs =
          fuzzy::apply_dirac(sd, fuzzy::apply_dirac(sd, e));
      fuzzy::SpinorField rhs = fuzzy::spinor_laplacian(m, sd, e);
      for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
          rhs.comp[alpha] += R(beta, alpha) * e.comp[beta];
      res = std::max(res, (lhs - rhs).max_abs_coefficient());
    }
    worst = std::max(worst, res);
    table.push_back(json{{"l", l}, {"residual", res}});
  }

  bool pass = worst < 100.0 * o.tol;
  json report{{"schema", kSchema},
              {"command", "lichnerowicz"},
              {"lambda_p", o.lambda_p},
              {"L", o.L},
              {"metric", metric_json(m)},
              {"curvature_action", fuzzy::to_json(Eigen::MatrixXcd(R))},
              {"residuals", table},
              {"max_residual", worst},
              {"pass", pass}};
  emit(report, o.output);
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Riemannian geometry of the fuzzy sphere"};
  app.require_subcommand(1);

  CommonOpts spec_opts, verify_opts, reduce_opts, dist_opts, lich_opts;
  std::string format = "json";
  int reduce_n = 2, dist_n = 2;
  std::string state_a, state_b, rho_a, rho_b;

  CLI::App* c_spec = app.add_subcommand("spectrum", "Dirac eigenvalues");
  spec_opts.attach(c_spec);
  c_spec->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* c_verify =
      app.add_subcommand("verify", "spectral-triple axiom report");
  verify_opts.attach(c_verify);

  CLI::App* c_reduce =
      app.add_subcommand("reduce", "matrix reduction at lambda_p = 1/n");
  reduce_opts.attach(c_reduce, false);
  c_reduce->add_option("--n", reduce_n, "matrix algebra size")->required();

  CLI::App* c_dist = app.add_subcommand("distance", "spectral distance");
  dist_opts.attach(c_dist, false);
  c_dist->add_option("--n", dist_n, "matrix algebra size");
  c_dist->add_option("--state-a", state_a, "coherent state 'theta,phi'");
  c_dist->add_option("--state-b", state_b, "coherent state 'theta,phi'");
  c_dist->add_option("--rho-a", rho_a, "density matrix (JSON or file)");
  c_dist->add_option("--rho-b", rho_b, "density matrix (JSON or file)");

  CLI::App* c_lich =
      app.add_subcommand("lichnerowicz", "D^2 - Delta_S - curvature residuals");
  lich_opts.attach(c_lich);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_spec->parsed()) {
      merge_config(c_spec, spec_opts.config);
      return run_spectrum(spec_opts, format);
    }
    if (c_verify->parsed()) {
      merge_config(c_verify, verify_opts.config);
      return run_verify(verify_opts);
    }
    if (c_reduce->parsed()) {
      merge_config(c_reduce, reduce_opts.config);
      return run_reduce(reduce_opts, reduce_n);
    }
    if (c_dist->parsed()) {
      merge_config(c_dist, dist_opts.config);
      return run_distance(dist_opts, dist_n, state_a, state_b, rho_a, rho_b);
    }
    if (c_lich->parsed()) {
      merge_config(c_lich, lich_opts.config);
      return run_lichnerowicz(lich_opts);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
