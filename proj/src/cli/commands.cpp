// SPDX-License-Identifier: Apache-2.0
#include "stabcert/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "stabcert/helmholtz.hpp"
#include "stabcert/normalize.hpp"
#include "stabcert/verify.hpp"

namespace stabcert::cli {

namespace {

constexpr double kBoundSlack = 1e-6;
constexpr double kAbscissaSlack = 1e-9;
constexpr double kRateSlack = 1e-6;
constexpr double kMonotoneSlack = 1e-10;
constexpr double kTransformResidualTol = 1e-10;
constexpr double kSchurSlack = 1e-10;

// Non-finite values are written as null.
nlohmann::json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json nums(const std::vector<double>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : xs) out.push_back(num(x));
  return out;
}

ComplexVector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

nlohmann::json sweep_to_json(const ResolventSweepReport& s) {
  return {
      {"abscissa", s.abscissa},
      {"points", s.lambdas.size()},
      {"lambda_min", s.lambdas.empty() ? 0.0 : s.lambdas.front()},
      {"lambda_max", s.lambdas.empty() ? 0.0 : s.lambdas.back()},
      {"max_norm", num(s.max_norm)},
      {"singular_points", s.singular_points},
      {"lambdas", s.lambdas},
      {"norms", nums(s.norms)},
  };
}

nlohmann::json trajectory_to_json(const TrajectoryTrace& t) {
  return {
      {"expm_path", std::string(to_string(t.expm_path))},
      {"samples", t.times.size()},
      {"t_end", t.times.empty() ? 0.0 : t.times.back()},
      {"fitted_rate", t.fitted_rate ? num(*t.fitted_rate) : nlohmann::json(nullptr)},
      {"fit_window", {t.fit_window.first, t.fit_window.second}},
      {"times", t.times},
      {"state_norms", nums(t.state_norms)},
  };
}

const nlohmann::json& formulas() {
  static const nlohmann::json f = {
      {"kappa_norm",
       "max(||alpha^(1/2)||, ||beta^(1/2)||) * max(||alpha^(-1/2)||, ||beta^(-1/2)||)"},
      {"gamma_tilde", "alpha^(-1/2) gamma alpha^(-1/2)"},
      {"D", "beta^(-1/2) C alpha^(-1/2)"},
      {"a0", "c / 4 with c = coercivity of gamma_tilde"},
      {"c_eff", "3c/4 when D has a kernel, else c"},
      {"g_eff", "||gamma_tilde|| + ||gamma_tilde||^2 / (3c/4) when D has a kernel, else ||gamma_tilde||"},
      {"transform_bound", "1 + ||gamma_tilde|| / (3c/4) when D has a kernel, else 1"},
      {"kernel_bound", "1 / (c - a0) when D has a kernel, else 0"},
      {"u_term", "c_eff - delta (1 + ((g_eff + delta) ||C_tilde^-1||)^2 / (2 p))"},
      {"v_term", "delta (1 - p/2)"},
      {"d", "min(u_term, v_term) / 2 at (delta_star, p_star), maximized on a grid"},
      {"M_inner", "(2/d) ((1 + g_eff + delta_star) ||C_tilde^-1|| + 2)"},
      {"delta_cert", "min(a0, d), halved until the audit passes"},
      {"M_normalized", "transform_bound^2 * max(M_inner, kernel_bound)"},
      {"M_total", "M_normalized * kappa_norm^2"},
      {"audit",
       "||(z - B_r)^-1|| <= M_normalized on a grid over Re z in [-delta_cert, 2 delta_star], "
       "|Im z| <= 2 delta_star, B_r = generator on H0 x ran(D)"},
  };
  return f;
}

nlohmann::json verdicts_json(const std::vector<std::pair<std::string, bool>>& verdicts,
                             bool* all_passed) {
  nlohmann::json out = nlohmann::json::object();
  bool all = true;
  for (const auto& [name, ok] : verdicts) {
    out[name] = ok;
    all = all && ok;
  }
  *all_passed = all;
  return out;
}

double trajectory_horizon(double abscissa) {
  if (!(abscissa < 0.0)) return 20.0;
  return std::clamp(10.0 / -abscissa, 1.0, 200.0);
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    const std::string re_text = text.substr(0, comma);
    const double re = std::stod(re_text, &used);
    if (used != re_text.size()) throw std::invalid_argument(text);
    double im = 0.0;
    if (comma != std::string::npos) {
      const std::string im_text = text.substr(comma + 1);
      im = std::stod(im_text, &used);
      if (used != im_text.size()) throw std::invalid_argument(text);
    }
    return {re, im};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "expected RE,IM but got '" + text + "'", "z");
  }
}

ComplexVector read_state_file(const std::string& path) {
  const nlohmann::json j = read_json(path);
  if (j.is_object()) {
    if (!j.contains("state")) throw Error(ErrorKind::InvalidInput, "u0 file needs 'state'", "u0");
    return vector_from_json(j["state"], "u0");
  }
  return vector_from_json(j, "u0");
}

}  // namespace

nlohmann::json certificate_to_json(const StabilityCertificate& cert) {
  nlohmann::json inner = nullptr;
  if (cert.inner) {
    const InvertibleCaseCertificate& in = *cert.inner;
    inner = {{"c", in.c},
             {"gamma_norm", in.gamma_norm},
             {"C_tilde_inv_norm", in.C_inv_norm},
             {"delta_star", in.delta_star},
             {"p_star", in.p_star},
             {"c_tilde", in.c_tilde},
             {"d", in.d},
             {"M_inner", in.M_inner}};
  }
  const AuditRecord& a = cert.audit;
  return {
      {"delta_cert", cert.delta_cert},
      {"M_total", num(cert.M_total)},
      {"M_normalized", num(cert.M_normalized)},
      {"a0", cert.working_abscissa},
      {"c_gamma_tilde", cert.c_gamma},
      {"gamma_tilde_norm", cert.gamma_norm},
      {"c_eff", cert.c_eff},
      {"g_eff", cert.g_eff},
      {"transform_bound", cert.transform_bound},
      {"kernel_bound", cert.kernel_bound},
      {"kappa_norm", cert.kappa_norm},
      {"sigma_min_pos", cert.sigma_min_pos},
      {"rank", cert.rank},
      {"has_kernel", cert.has_kernel},
      {"trivial_range", cert.trivial_range},
      {"inner", inner},
      {"audit",
       {{"grid_points_per_axis", a.grid_points},
        {"halvings", a.halvings},
        {"re_min", a.re_min},
        {"re_max", a.re_max},
        {"im_half_height", a.im_half_height},
        {"max_norm", num(a.max_norm)},
        {"bound", num(a.bound)},
        {"passed", a.passed}}},
      // The chain of constants above is assembled by this tool from the
      // individual inequalities; it is not a published closed form.
      {"constant_chain", "assembled"},
  };
}

CommandResult certify(const ProblemFile& problem, const CertifyOptions& options) {
  const BlockSystem sys = validate_system(problem.system, problem.tolerances);
  const StabilityCertificate cert = full_certificate(sys, options.certificate);
  const NormalizedSystem ns = normalize_system(sys);
  const HelmholtzFrames frames = decompose(ns.D, ns.tolerances);
  const ComplexMatrix restricted = restricted_generator(ns, frames);
  const DissipativityReport diss = check_m_dissipative(assemble_generator(ns));

  const ResolventSweepReport axis = gp_sweep(restricted, 0.0, options.lambda_max, options.points);
  const ResolventSweepReport half =
      gp_sweep(restricted, -0.5 * cert.delta_cert, options.lambda_max, options.points);
  const double abscissa = spectral_abscissa(restricted);

  std::mt19937_64 rng(options.seed);
  const ComplexVector x0 = random_vector(rng, restricted.rows());
  const TrajectoryTrace trace =
      stabcert::simulate(restricted, x0, trajectory_horizon(abscissa), options.samples);

  const double bound = cert.M_total * (1.0 + kBoundSlack);
  const bool regular = axis.singular_points.empty() && half.singular_points.empty();
  CommandResult res;
  const nlohmann::json verdicts = verdicts_json(
      {{"delta_cert_positive", cert.delta_cert > 0.0},
       {"audit_passed", cert.audit.passed},
       {"sweeps_regular", regular},
       {"sweeps_bounded", regular && axis.max_norm <= bound && half.max_norm <= bound},
       {"abscissa_sound", abscissa <= -cert.delta_cert + kAbscissaSlack},
       {"rate_sound", trace.fitted_rate && *trace.fitted_rate >= cert.delta_cert - kRateSlack},
       {"m_dissipative", diss.dissipative && diss.shifted_invertible}},
      &res.all_passed);

  res.report = {
      {"schema_version", kSchemaVersion},
      {"command", "certify"},
      {"dimensions", {{"n0", sys.n0()}, {"n1", sys.n1()}, {"rank", frames.rank}}},
      {"certificate", certificate_to_json(cert)},
      {"formulas", formulas()},
      {"sweeps", {sweep_to_json(axis), sweep_to_json(half)}},
      {"oracles",
       {{"spectral_abscissa", abscissa},
        {"fitted_rate", trace.fitted_rate ? num(*trace.fitted_rate) : nlohmann::json(nullptr)},
        {"max_re_quadratic", diss.max_re_quadratic},
        {"shifted_invertible", diss.shifted_invertible}}},
      {"trajectory", trajectory_to_json(trace)},
      {"thresholds",
       {{"bound_slack", kBoundSlack},
        {"abscissa_slack", kAbscissaSlack},
        {"rate_slack", kRateSlack}}},
      {"seed", options.seed},
      {"verdicts", verdicts},
      {"all_passed", res.all_passed},
  };
  return res;
}

CommandResult sweep(const ProblemFile& problem, const SweepOptions& options) {
  const BlockSystem sys = validate_system(problem.system, problem.tolerances);
  const NormalizedSystem ns = normalize_system(sys);
  const HelmholtzFrames frames = decompose(ns.D, ns.tolerances);
  const ComplexMatrix restricted = restricted_generator(ns, frames);
  const ResolventSweepReport s =
      gp_sweep(restricted, options.abscissa, options.lambda_max, options.points);

  CommandResult res;
  const nlohmann::json verdicts =
      verdicts_json({{"regular", s.singular_points.empty()}}, &res.all_passed);
  res.report = {
      {"schema_version", kSchemaVersion},
      {"command", "sweep"},
      {"generator", "normalized, restricted to H0 x ran(D)"},
      {"sweep", sweep_to_json(s)},
      {"verdicts", verdicts},
      {"all_passed", res.all_passed},
  };
  return res;
}

CommandResult simulate(const ProblemFile& problem, const SimulateOptions& options) {
  const BlockSystem sys = validate_system(problem.system, problem.tolerances);
  const Index n0 = sys.n0();
  const Index n1 = sys.n1();
  ComplexVector start;
  if (options.u0) {
    start = *options.u0;
    if (start.size() != n0 + n1) {
      throw Error(ErrorKind::DimensionMismatch,
                  "u0 needs " + std::to_string(n0 + n1) + " entries", "u0",
                  static_cast<double>(start.size()));
    }
  } else {
    std::mt19937_64 rng(options.seed);
    start = random_vector(rng, n0 + n1);
  }
  const HelmholtzFrames frames_c = decompose(sys.C(), sys.tolerances());
  const AdmissibleInitial adm = admissible_initial(sys.beta(), frames_c, start.tail(n1));
  start.tail(n1) = adm.v_adm;

  const StabilityCertificate cert = full_certificate(sys);
  const NormalizedSystem ns = normalize_system(sys);
  const TrajectoryTrace trace =
      stabcert::simulate(assemble_original_generator(sys), start, options.t_end, options.samples);

  std::vector<double> energy;
  energy.reserve(trace.states.size());
  for (const ComplexVector& s : trace.states) {
    energy.push_back(map_state(ns, s, MapDirection::Forward).norm());
  }
  bool monotone = true;
  for (std::size_t k = 1; k < energy.size(); ++k) {
    if (energy[k] > energy[k - 1] + kMonotoneSlack * energy.front()) monotone = false;
  }

  CommandResult res;
  const nlohmann::json verdicts = verdicts_json(
      {{"energy_monotone", monotone},
       {"rate_sound", trace.fitted_rate && *trace.fitted_rate >= cert.delta_cert - kRateSlack}},
      &res.all_passed);
  res.report = {
      {"schema_version", kSchemaVersion},
      {"command", "simulate"},
      {"variables", "original"},
      {"projection_residual", adm.residual},
      {"delta_cert", cert.delta_cert},
      {"trajectory", trajectory_to_json(trace)},
      {"energy_norms", nums(energy)},
      {"thresholds", {{"monotone_slack", kMonotoneSlack}, {"rate_slack", kRateSlack}}},
      {"seed", options.u0 ? nlohmann::json(nullptr) : nlohmann::json(options.seed)},
      {"verdicts", verdicts},
      {"all_passed", res.all_passed},
  };
  return res;
}

CommandResult reduce(const ProblemFile& problem, Complex z) {
  const BlockSystem sys = validate_system(problem.system, problem.tolerances);
  const NormalizedSystem ns = normalize_system(sys);
  const HelmholtzFrames frames = decompose(ns.D, ns.tolerances);
  const double c = ns.c_gamma_tilde;
  const DecoupledBlocks blocks = decoupling_transforms(ns.gamma_tilde, frames, z, c);
  const ComplexMatrix reduced = reduced_operator(blocks, frames);

  const Index r = frames.rank;
  const Index k = frames.kernel_dim();
  const ComplexMatrix M = three_block_form(ns.gamma_tilde, frames, z);
  ComplexMatrix expected = ComplexMatrix::Zero(2 * r + k, 2 * r + k);
  expected.topLeftCorner(2 * r, 2 * r) = reduced;
  expected.bottomRightCorner(k, k) =
      z * ComplexMatrix::Identity(k, k) + blocks.gamma2;
  const double scale = std::max(1.0, operator_norm(M));
  const double split_residual = (blocks.T1 * M * blocks.T2 - expected).norm() / scale;
  const ComplexMatrix id = ComplexMatrix::Identity(2 * r + k, 2 * r + k);
  const double inverse_residual =
      std::max((blocks.T1 * blocks.T1_inv - id).norm(), (blocks.T2 * blocks.T2_inv - id).norm());
  const double schur_min = r > 0 ? hermitian_min_eig(blocks.gamma1_z) : 0.0;
  const double schur_floor = std::min(z.real() + c, c);

  CommandResult res;
  const nlohmann::json verdicts = verdicts_json(
      {{"block_diagonal", split_residual <= kTransformResidualTol},
       {"transforms_inverse", inverse_residual <= kTransformResidualTol},
       {"schur_coercive", r == 0 || schur_min >= schur_floor - kSchurSlack}},
      &res.all_passed);
  res.report = {
      {"schema_version", kSchemaVersion},
      {"command", "reduce"},
      {"z", {z.real(), z.imag()}},
      {"c_gamma_tilde", c},
      {"rank", r},
      {"kernel_dim", k},
      {"frames",
       {{"iota0", matrix_to_json(frames.iota0)},
        {"kappa0", matrix_to_json(frames.kappa0)},
        {"iota1", matrix_to_json(frames.iota1)},
        {"kappa1", matrix_to_json(frames.kappa1)},
        {"C_tilde", matrix_to_json(frames.C_tilde)}}},
      {"T1", matrix_to_json(blocks.T1)},
      {"T1_inv", matrix_to_json(blocks.T1_inv)},
      {"T2", matrix_to_json(blocks.T2)},
      {"T2_inv", matrix_to_json(blocks.T2_inv)},
      {"gamma1_z", matrix_to_json(blocks.gamma1_z)},
      {"gamma2", matrix_to_json(blocks.gamma2)},
      {"reduced_operator", matrix_to_json(reduced)},
      {"checks",
       {{"block_diagonal_residual", split_residual},
        {"transform_inverse_residual", inverse_residual},
        {"schur_hermitian_min", schur_min},
        {"schur_floor", schur_floor}}},
      {"verdicts", verdicts},
      {"all_passed", res.all_passed},
  };
  return res;
}

ProblemFile maxwell_gen(const MaxwellGenOptions& options) {
  for (double v : {options.eps, options.mu, options.sigma}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "material values must be finite");
  }
  const maxwell::DiscreteCurl curl = maxwell::build_curl(options.grid, options.dense_limit);
  const Index cells = options.grid.cells();
  ProblemFile p;
  p.system.alpha = maxwell::MaterialProfile::uniform(options.eps).diagonal(cells);
  p.system.beta = maxwell::MaterialProfile::uniform(options.mu).diagonal(cells);
  p.system.gamma = maxwell::MaterialProfile::uniform(options.sigma).diagonal(cells);
  p.system.C = curl.K;
  return p;
}

Index dense_limit_from_env() {
  const char* raw = std::getenv("STABCERT_DENSE_LIMIT");
  if (raw == nullptr || *raw == '\0') return maxwell::kDefaultDenseLimit;
  char* end = nullptr;
  const long long v = std::strtoll(raw, &end, 10);
  if (*end != '\0' || v <= 0) {
    throw Error(ErrorKind::InvalidInput,
                std::string("STABCERT_DENSE_LIMIT must be a positive integer, got '") + raw + "'",
                "STABCERT_DENSE_LIMIT");
  }
  return static_cast<Index>(v);
}

std::string error_line(const Error& e) {
  nlohmann::json j = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (!e.which().empty()) j["which"] = e.which();
  if (e.value()) j["value"] = num(*e.value());
  return j.dump();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stabcert: resolvent-based decay certificates for damped block systems"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string output;

  CertifyOptions certify_opts;
  auto* certify_cmd = app.add_subcommand("certify", "Certify a decay abscissa and audit it");
  certify_cmd->add_option("problem", problem_path, "Problem file")->required();
  certify_cmd->add_option("-o,--output", output, "Report file (stdout when absent)");
  certify_cmd->add_option("--lambda-max", certify_opts.lambda_max, "Sweep half-width");
  certify_cmd->add_option("--points", certify_opts.points, "Sweep points");
  certify_cmd->add_option("--seed", certify_opts.seed, "Seed for the trajectory start");

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Resolvent norms along a vertical line");
  sweep_cmd->add_option("problem", problem_path, "Problem file")->required();
  sweep_cmd->add_option("-o,--output", output, "Report file (stdout when absent)");
  sweep_cmd->add_option("--abscissa", sweep_opts.abscissa, "Re z of the line");
  sweep_cmd->add_option("--lambda-max", sweep_opts.lambda_max, "Half-width in Im z");
  sweep_cmd->add_option("--points", sweep_opts.points, "Number of points");

  SimulateOptions sim_opts;
  std::string u0_path;
  auto* sim_cmd = app.add_subcommand("simulate", "Trajectory from admissible initial data");
  sim_cmd->add_option("problem", problem_path, "Problem file")->required();
  sim_cmd->add_option("-o,--output", output, "Report file (stdout when absent)");
  sim_cmd->add_option("--t-end", sim_opts.t_end, "Final time");
  sim_cmd->add_option("--samples", sim_opts.samples, "Number of samples");
  sim_cmd->add_option("--u0", u0_path, "Initial state file");
  sim_cmd->add_option("--seed", sim_opts.seed, "Seed when --u0 is absent");

  std::string z_text;
  auto* reduce_cmd = app.add_subcommand("reduce", "Helmholtz frames and Schur decoupling at z");
  reduce_cmd->add_option("problem", problem_path, "Problem file")->required();
  reduce_cmd->add_option("-o,--output", output, "Report file (stdout when absent)");
  reduce_cmd->add_option("--z", z_text, "Spectral point RE,IM")->required();

  MaxwellGenOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("maxwell-gen", "Write a periodic-grid Maxwell problem");
  gen_cmd->add_option("--n", gen_opts.grid.N, "Cells per axis")->required();
  gen_cmd->add_option("--spacing", gen_opts.grid.h, "Grid spacing");
  gen_cmd->add_option("--eps", gen_opts.eps, "Permittivity")->required();
  gen_cmd->add_option("--mu", gen_opts.mu, "Permeability")->required();
  gen_cmd->add_option("--sigma", gen_opts.sigma, "Conductivity")->required();
  gen_cmd->add_option("-o,--output", output, "Problem file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitPass;
    }
    err << nlohmann::json{{"error", "InvalidInput"}, {"message", e.what()}}.dump() << '\n';
    return kExitInputError;
  }

  try {
    if (gen_cmd->parsed()) {
      gen_opts.dense_limit = dense_limit_from_env();
      const ProblemFile p = maxwell_gen(gen_opts);
      write_json(output, problem_to_json(p));
      out << nlohmann::json{{"command", "maxwell-gen"},
                            {"N", gen_opts.grid.N},
                            {"rows", p.system.alpha.rows()},
                            {"output", output}}
                 .dump()
          << '\n';
      return kExitPass;
    }

    const ProblemFile problem = problem_from_json(read_json(problem_path));
    CommandResult res;
    if (certify_cmd->parsed()) {
      res = certify(problem, certify_opts);
    } else if (sweep_cmd->parsed()) {
      res = sweep(problem, sweep_opts);
    } else if (sim_cmd->parsed()) {
      if (!u0_path.empty()) sim_opts.u0 = read_state_file(u0_path);
      res = simulate(problem, sim_opts);
    } else {
      res = reduce(problem, parse_complex(z_text));
    }

    if (output.empty()) {
      out << res.report.dump(2) << '\n';
    } else {
      write_json(output, res.report);
      out << nlohmann::json{{"command", res.report["command"]},
                            {"all_passed", res.all_passed},
                            {"output", output}}
                 .dump()
          << '\n';
    }
    return res.all_passed ? kExitPass : kExitVerdictFailed;
  } catch (const Error& e) {
    err << error_line(e) << '\n';
    return e.kind() == ErrorKind::CertificateFailure ? kExitVerdictFailed : kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << nlohmann::json{{"error", "InvalidInput"}, {"message", e.what()}}.dump() << '\n';
    return kExitInputError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace stabcert::cli
