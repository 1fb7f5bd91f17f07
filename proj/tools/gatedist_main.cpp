// gatedist: batch CLI for propagator-vs-gate distance, fidelity bounds, and
// alternating control optimization. Structured records go to stdout,
// diagnostics to stderr.

#include "gatedist/io.hpp"
#include "gatedist/random.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace gd = gatedist;

namespace {

// stable exit-code contract (see README)
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitNotUnitary = 4;
constexpr int kExitEnvNotNormalized = 5;

struct LoadedUnitary {
  gd::BipartiteUnitary u;
  std::string path;
  std::string hash;
};

struct CommonOpts {
  std::string ordering_flag;  // empty: use file metadata, then system_first
  int n_s_flag = 0;
  int n_b_flag = 0;
  double unitary_tol = -1.0;  // <0: library default
  bool timing = false;
};

gd::Json input_entry(const std::string& path) {
  gd::Json j;
  j["path"] = path;
  j["hash"] = gd::file_hash_hex(path);
  return j;
}

// n_s comes from the target gate; n_b from the joint dimension. File
// metadata and flags must agree when present (no automatic factoring).
LoadedUnitary load_unitary(const std::string& path, const gd::Matrix& g,
                           const CommonOpts& opts) {
  gd::MatrixFile mf = gd::read_matrix_file(path);
  const Eigen::Index dim = mf.matrix.rows();
  if (mf.matrix.cols() != dim)
    throw gd::dimension_error(path + ": propagator matrix must be square");

  const int n_s = int(g.rows());
  if (opts.n_s_flag > 0 && opts.n_s_flag != n_s)
    throw gd::dimension_error("--n-s disagrees with the target gate dimension");
  if (mf.n_s && *mf.n_s != n_s)
    throw gd::dimension_error(path + ": embedded n_s disagrees with the target gate");
  if (dim % n_s != 0)
    throw gd::dimension_error(path + ": joint dimension " + std::to_string(dim) +
                              " is not divisible by n_s = " + std::to_string(n_s));
  const int n_b = int(dim) / n_s;
  if (opts.n_b_flag > 0 && opts.n_b_flag != n_b)
    throw gd::dimension_error("--n-b disagrees with the joint dimension");
  if (mf.n_b && *mf.n_b != n_b)
    throw gd::dimension_error(path + ": embedded n_b disagrees with the joint dimension");

  gd::Ordering ordering = gd::Ordering::SystemFirst;
  if (mf.ordering) ordering = *mf.ordering;
  if (!opts.ordering_flag.empty())
    ordering = gd::ordering_from_string(opts.ordering_flag);

  LoadedUnitary out{
      gd::BipartiteUnitary::checked(std::move(mf.matrix), n_s, n_b, ordering,
                                    opts.unitary_tol),
      path, gd::file_hash_hex(path)};
  return out;
}

gd::Matrix load_gate(const std::string& path, double unitary_tol) {
  gd::MatrixFile mf = gd::read_matrix_file(path);
  if (mf.matrix.rows() != mf.matrix.cols())
    throw gd::dimension_error(path + ": gate matrix must be square");
  const double tol = unitary_tol >= 0.0
                         ? unitary_tol
                         : gd::unitary_input_tol(int(mf.matrix.rows()));
  const double residual = gd::unitarity_residual(mf.matrix);
  if (residual > tol)
    throw gd::not_unitary_error(
        path + ": gate is not unitary, ||G^dag G - I||_F = " +
            gd::format_double(residual),
        residual);
  return mf.matrix;
}

gd::Json solver_echo(const gd::SolverConfig& cfg) {
  gd::Json j;
  j["max_iters"] = cfg.max_iters;
  j["tol"] = cfg.tol;
  j["restarts"] = cfg.restarts;
  j["step_scale"] = cfg.step_scale;
  return j;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------- distance

struct DistanceOpts {
  std::string u_path;
  std::string g_path;
  std::vector<std::string> batch;
  int jobs = 1;
  std::string norm = "frobenius";
  std::string emit_phi;
  std::string emit_phi_bar;
  CommonOpts common;
  gd::SolverConfig solver = gd::SolverConfig::spectral_defaults();
};

gd::Json distance_record(const DistanceOpts& opts, const std::string& u_path,
                         const gd::Matrix& g, const std::string& g_hash) {
  Stopwatch watch;
  LoadedUnitary lu = load_unitary(u_path, g, opts.common);

  gd::Json record;
  record["command"] = "distance";
  record["inputs"]["u"] = input_entry(u_path);
  record["inputs"]["g"]["path"] = opts.g_path;
  record["inputs"]["g"]["hash"] = g_hash;
  record["config"]["norm"] = opts.norm;
  record["config"]["ordering"] = gd::to_string(lu.u.ordering);
  record["config"]["n_s"] = lu.u.n_s;
  record["config"]["n_b"] = lu.u.n_b;

  gd::Json out;
  if (opts.norm == "frobenius") {
    const gd::FrobDistanceReport rep = gd::frob_distance(lu.u, g);
    out["distance"] = rep.distance;
    out["gamma_trace_norm"] = rep.gamma_trace_norm;
    if (!opts.emit_phi.empty()) {
      gd::write_matrix_file(opts.emit_phi, rep.phi_opt, "phi_opt");
      out["phi_written"] = opts.emit_phi;
    }
  } else {
    record["config"]["solver"] = solver_echo(opts.solver);
    record["seed"] = opts.solver.seed;
    const gd::SpecDistanceReport rep = gd::spec_distance(lu.u, g, opts.solver);
    out["lower"] = rep.lower;
    out["upper"] = rep.upper;
    out["iterations"] = rep.iterations;
    out["converged"] = rep.converged;
    gd::Json sv = gd::Json::array();
    for (Eigen::Index i = 0; i < rep.phi_bar_singulars.size(); ++i)
      sv.push_back(rep.phi_bar_singulars(i));
    out["phi_bar_singulars"] = std::move(sv);
    if (!opts.emit_phi.empty()) {
      gd::write_matrix_file(opts.emit_phi, rep.phi_hat, "phi_hat");
      out["phi_written"] = opts.emit_phi;
    }
    if (!opts.emit_phi_bar.empty()) {
      gd::write_matrix_file(opts.emit_phi_bar, rep.phi_bar, "phi_bar");
      out["phi_bar_written"] = opts.emit_phi_bar;
    }
  }
  record["outputs"] = std::move(out);
  if (opts.common.timing) record["wall_time_ms"] = watch.elapsed_ms();
  return record;
}

int run_distance(const DistanceOpts& opts) {
  const gd::Matrix g = load_gate(opts.g_path, opts.common.unitary_tol);
  const std::string g_hash = gd::file_hash_hex(opts.g_path);

  std::vector<std::string> u_paths{opts.u_path};
  u_paths.insert(u_paths.end(), opts.batch.begin(), opts.batch.end());

  if (u_paths.size() == 1) {
    std::cout << distance_record(opts, u_paths[0], g, g_hash).dump(2) << "\n";
    return 0;
  }

  // batch mode: independent records, emitted in input order as JSON lines
  std::vector<gd::Json> records(u_paths.size());
  const int jobs = std::max(1, opts.jobs);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < u_paths.size(); i = next.fetch_add(1))
      records[i] = distance_record(opts, u_paths[i], g, g_hash);
  };
  std::vector<std::future<void>> pool;
  for (int t = 1; t < jobs; ++t)
    pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();
  for (const gd::Json& r : records) std::cout << r.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- fidelity

struct FidelityOpts {
  std::string u_path;
  std::string g_path;
  std::string env_path;
  std::int64_t env_random_seed = -1;
  bool env_avg = false;
  int mc_samples = 10000;
  std::string emit_worst_density;
  CommonOpts common;
  gd::SolverConfig solver = gd::SolverConfig::fidelity_defaults();
};

int run_fidelity(const FidelityOpts& opts) {
  Stopwatch watch;
  const gd::Matrix g = load_gate(opts.g_path, opts.common.unitary_tol);
  LoadedUnitary lu = load_unitary(opts.u_path, g, opts.common);

  gd::Json record;
  record["command"] = "fidelity";
  record["inputs"]["u"] = input_entry(opts.u_path);
  record["inputs"]["g"] = input_entry(opts.g_path);
  record["config"]["ordering"] = gd::to_string(lu.u.ordering);
  record["config"]["n_s"] = lu.u.n_s;
  record["config"]["n_b"] = lu.u.n_b;
  record["config"]["solver"] = solver_echo(opts.solver);

  gd::Json out;
  const gd::SandwichReport sandwich = gd::check_sandwich(lu.u, g);
  out["f_avg_upper"] = gd::f_avg_upper(lu.u, g);
  out["sandwich"]["lhs"] = sandwich.lhs;
  out["sandwich"]["mid"] = sandwich.mid;
  out["sandwich"]["rhs"] = sandwich.rhs;
  out["sandwich"]["holds"] = sandwich.holds;

  if (opts.env_avg) {
    // Monte-Carlo cross-estimate of the averaged bound
    gd::Rng rng(opts.solver.seed);
    record["seed"] = opts.solver.seed;
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < opts.mc_samples; ++s) {
      const gd::EnvState env{gd::haar_state(lu.u.n_b, rng)};
      const double f = gd::f_upper(gd::kraus_from_unitary(lu.u, env), g);
      sum += f;
      sum2 += f * f;
    }
    const double mean = sum / opts.mc_samples;
    const double var = std::max(0.0, sum2 / opts.mc_samples - mean * mean);
    out["mc"]["samples"] = opts.mc_samples;
    out["mc"]["mean"] = mean;
    out["mc"]["std_error"] = std::sqrt(var / opts.mc_samples);
  } else {
    gd::EnvState env{gd::Vector()};
    if (opts.env_random_seed >= 0) {
      gd::Rng rng(std::uint64_t(opts.env_random_seed));
      env = gd::EnvState{gd::haar_state(lu.u.n_b, rng)};
      record["seed"] = opts.env_random_seed;
      out["env"]["source"] = "random";
    } else {
      gd::MatrixFile ef = gd::read_matrix_file(opts.env_path);
      if (ef.matrix.cols() != 1)
        throw gd::dimension_error(opts.env_path +
                                  ": environment state must be a column vector");
      env = gd::EnvState::checked(ef.matrix.col(0));
      record["inputs"]["env"] = input_entry(opts.env_path);
      out["env"]["source"] = "file";
    }
    const gd::FidelityReport rep = gd::fidelity_report(lu.u, env, g, opts.solver);
    out["completeness_residual"] = rep.completeness_residual;
    out["f_upper"] = rep.f_upper;
    out["f_lower"] = rep.f_lower;
    out["f_lower_converged"] = rep.f_lower_converged;
    out["worst_density_top_eig_share"] = rep.worst_density_top_eig_share;
    out["near_rank_one"] = rep.worst_density_top_eig_share >= 0.99;
    if (!opts.emit_worst_density.empty()) {
      gd::write_matrix_file(opts.emit_worst_density, rep.worst_density,
                            "worst_density");
      out["worst_density_written"] = opts.emit_worst_density;
    }
  }
  record["outputs"] = std::move(out);
  if (opts.common.timing) record["wall_time_ms"] = watch.elapsed_ms();
  std::cout << record.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- optimize

struct OptimizeOpts {
  std::string problem_path;
  std::string theta0_inline;
  std::string theta0_file;
  std::string trace_out;
  std::string emit_phi;
  bool spec_variant = false;
  gd::OptConfig opt;
  gd::SolverConfig solver = gd::SolverConfig::spectral_defaults();
  bool timing = false;
};

gd::RealVector parse_inline_theta(const std::string& text) {
  std::vector<double> vals;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    try {
      vals.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw gd::parse_error("--theta0: '" + token + "' is not a number");
    }
  }
  gd::RealVector v(Eigen::Index(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v(Eigen::Index(i)) = vals[i];
  return v;
}

int run_optimize(const OptimizeOpts& opts) {
  Stopwatch watch;
  const gd::ControlProblem problem = gd::read_problem_file(opts.problem_path);

  gd::RealVector theta0;
  if (!opts.theta0_inline.empty()) {
    theta0 = parse_inline_theta(opts.theta0_inline);
  } else if (!opts.theta0_file.empty()) {
    theta0 = gd::real_vector_from_json(gd::read_json_file(opts.theta0_file),
                                       opts.theta0_file);
  } else {
    theta0 = gd::theta_center(problem.theta_set);
  }
  if (theta0.size() != problem.num_coeffs())
    throw gd::dimension_error("theta0 has " + std::to_string(theta0.size()) +
                              " coefficients, expected " +
                              std::to_string(problem.num_coeffs()));

  const gd::OptRun run = gd::alternate_optimize(problem, theta0, opts.opt);

  if (!opts.trace_out.empty()) {
    std::ofstream csv(opts.trace_out, std::ios::binary);
    if (!csv)
      throw gd::parse_error(opts.trace_out + ": cannot open file for writing");
    csv << "iter,distance\n";
    for (size_t i = 0; i < run.objective_trace.size(); ++i)
      csv << i << "," << gd::format_double(run.objective_trace[i]) << "\n";
  }

  gd::Json record;
  record["command"] = "optimize";
  record["inputs"]["problem"] = input_entry(opts.problem_path);
  if (!opts.theta0_file.empty())
    record["inputs"]["theta0"] = input_entry(opts.theta0_file);
  record["config"]["outer_max"] = opts.opt.outer_max;
  record["config"]["outer_tol"] = opts.opt.outer_tol;
  record["config"]["inner_max"] = opts.opt.inner_max;
  record["config"]["fd_step"] = opts.opt.fd_step;
  record["config"]["single_step"] = opts.opt.single_step;

  gd::Json out;
  out["initial_distance"] = run.objective_trace.front();
  out["final_distance"] = run.objective_trace.back();
  out["outer_iterations"] = run.outer_iterations;
  out["converged"] = run.converged;
  out["theta"] = gd::real_vector_to_json(run.theta);
  out["phi"] = gd::matrix_to_json(run.phi);
  if (!opts.trace_out.empty()) out["trace_written"] = opts.trace_out;
  if (!opts.emit_phi.empty()) {
    gd::write_matrix_file(opts.emit_phi, run.phi, "phi");
    out["phi_written"] = opts.emit_phi;
  }
  if (opts.spec_variant) {
    record["seed"] = opts.solver.seed;
    const auto [phi_hat, upper] =
        gd::spec_variant_step(problem, run.theta, opts.solver);
    out["spec_variant"]["distance_upper"] = upper;
  }
  record["outputs"] = std::move(out);
  if (opts.timing) record["wall_time_ms"] = watch.elapsed_ms();
  std::cout << record.dump(2) << "\n";
  return 0;
}

// --------------------------------------------------------------------- gen

struct GenOpts {
  std::string kind = "unitary";
  int n = 2;
  int n_s = 0;
  int n_b = 0;
  std::string ordering = "system_first";
  std::uint64_t seed = 0;
  std::string out_path;
  std::string label;
};

int run_gen(const GenOpts& opts) {
  gd::Rng rng(opts.seed);
  int n = opts.n;
  std::optional<int> meta_ns, meta_nb;
  std::optional<gd::Ordering> meta_ord;
  if (opts.n_s > 0 && opts.n_b > 0) {
    n = opts.n_s * opts.n_b;
    meta_ns = opts.n_s;
    meta_nb = opts.n_b;
    meta_ord = gd::ordering_from_string(opts.ordering);
  }

  gd::Matrix m;
  if (opts.kind == "unitary") {
    m = gd::haar_unitary(n, rng);
  } else if (opts.kind == "state") {
    m = gd::haar_state(n, rng);
  } else if (opts.kind == "hermitian") {
    m = gd::random_hermitian(n, rng);
  } else {
    throw gd::parse_error("--kind must be unitary, state, or hermitian");
  }

  const std::optional<std::string> label =
      opts.label.empty() ? std::nullopt : std::optional<std::string>(opts.label);
  gd::write_matrix_file(opts.out_path, m, label, meta_ns, meta_nb, meta_ord);

  gd::Json record;
  record["command"] = "gen";
  record["config"]["kind"] = opts.kind;
  record["config"]["n"] = n;
  record["seed"] = opts.seed;
  record["outputs"]["written"] = opts.out_path;
  record["outputs"]["hash"] = gd::file_hash_hex(opts.out_path);
  std::cout << record.dump(2) << "\n";
  return 0;
}

void add_common_flags(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--ordering", common.ordering_flag,
                  "Channel ordering override (system_first|bath_first)")
      ->check(CLI::IsMember({"system_first", "bath_first"}));
  cmd->add_option("--n-s", common.n_s_flag, "System dimension (cross-checked)");
  cmd->add_option("--n-b", common.n_b_flag, "Bath dimension (cross-checked)");
  cmd->add_option("--unitary-tol", common.unitary_tol,
                  "Unitarity tolerance for input validation");
  cmd->add_flag("--timing", common.timing,
                "Include wall_time_ms in the record (breaks byte-reproducibility)");
}

void add_solver_flags(CLI::App* cmd, gd::SolverConfig& cfg) {
  cmd->add_option("--max-iters", cfg.max_iters, "Solver iteration cap");
  cmd->add_option("--tol", cfg.tol, "Solver stall tolerance");
  cmd->add_option("--restarts", cfg.restarts, "Random restarts");
  cmd->add_option("--seed", cfg.seed, "Random seed (echoed in the record)");
  cmd->add_option("--step-scale", cfg.step_scale, "Subgradient step scale");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Distance, fidelity, and control-design tool for bipartite unitary "
      "propagators vs. lower-dimensional ideal gates"};
  app.require_subcommand(1);

  DistanceOpts dist;
  CLI::App* cd = app.add_subcommand(
      "distance", "Frobenius distance (closed form) or spectral-norm bracket");
  cd->add_option("u_path", dist.u_path, "Propagator matrix file")->required();
  cd->add_option("g_path", dist.g_path, "Ideal gate matrix file")->required();
  cd->add_option("--norm", dist.norm, "Distance norm")
      ->check(CLI::IsMember({"frobenius", "spectral"}));
  cd->add_option("--batch", dist.batch, "Additional propagator files");
  cd->add_option("--jobs", dist.jobs, "Concurrent workers for batch mode");
  cd->add_option("--emit-phi", dist.emit_phi, "Write the optimizing phi here");
  cd->add_option("--emit-phi-bar", dist.emit_phi_bar,
                 "Write the relaxed phi_bar here (spectral norm only)");
  add_common_flags(cd, dist.common);
  add_solver_flags(cd, dist.solver);

  FidelityOpts fid;
  CLI::App* cf = app.add_subcommand(
      "fidelity", "Kraus extraction and fidelity bounds for an environment state");
  cf->add_option("u_path", fid.u_path, "Propagator matrix file")->required();
  cf->add_option("g_path", fid.g_path, "Ideal gate matrix file")->required();
  auto* env_file = cf->add_option("--env", fid.env_path, "Environment state file");
  auto* env_rand = cf->add_option("--env-random", fid.env_random_seed,
                                  "Sample a Haar-random environment state")
                       ->check(CLI::NonNegativeNumber);
  auto* env_avg = cf->add_flag("--env-avg", fid.env_avg,
                               "Environment-averaged bound with Monte-Carlo check");
  env_file->excludes(env_rand)->excludes(env_avg);
  env_rand->excludes(env_avg);
  cf->add_option("--mc-samples", fid.mc_samples, "Monte-Carlo samples for --env-avg");
  cf->add_option("--emit-worst-density", fid.emit_worst_density,
                 "Write the minimizing density here");
  add_common_flags(cf, fid.common);
  add_solver_flags(cf, fid.solver);

  OptimizeOpts opt;
  CLI::App* co = app.add_subcommand(
      "optimize", "Alternating phi/theta optimization for a control problem");
  co->add_option("problem_path", opt.problem_path, "Problem file")->required();
  co->add_option("--theta0", opt.theta0_inline, "Comma-separated initial coefficients");
  co->add_option("--theta0-file", opt.theta0_file, "JSON array of initial coefficients");
  co->add_option("--trace-out", opt.trace_out, "Write per-iteration CSV here");
  co->add_option("--emit-phi", opt.emit_phi, "Write the final phi here");
  co->add_option("--outer-max", opt.opt.outer_max, "Outer iteration cap");
  co->add_option("--outer-tol", opt.opt.outer_tol, "Outer decrease tolerance");
  co->add_option("--inner-max", opt.opt.inner_max, "Step-2 iteration cap");
  co->add_option("--fd-step", opt.opt.fd_step, "Central-difference step");
  co->add_flag("--single-step", opt.opt.single_step,
               "One accepted descent step per Step 2");
  co->add_flag("--spec-variant", opt.spec_variant,
               "Also report the two-norm upper bound at the solution");
  co->add_flag("--timing", opt.timing, "Include wall_time_ms in the record");
  add_solver_flags(co, opt.solver);

  GenOpts gen;
  CLI::App* cg = app.add_subcommand("gen", "Emit Haar-random test matrices");
  cg->add_option("--kind", gen.kind, "unitary|state|hermitian")
      ->check(CLI::IsMember({"unitary", "state", "hermitian"}));
  cg->add_option("--n", gen.n, "Dimension");
  cg->add_option("--n-s", gen.n_s, "System dimension (writes metadata)");
  cg->add_option("--n-b", gen.n_b, "Bath dimension (writes metadata)");
  cg->add_option("--ordering", gen.ordering, "Ordering metadata")
      ->check(CLI::IsMember({"system_first", "bath_first"}));
  cg->add_option("--seed", gen.seed, "Random seed");
  cg->add_option("-o,--out", gen.out_path, "Output path")->required();
  cg->add_option("--label", gen.label, "Label metadata");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cd->parsed()) return run_distance(dist);
    if (cf->parsed()) {
      if (!fid.env_avg && fid.env_random_seed < 0 && fid.env_path.empty())
        throw gd::parse_error(
            "fidelity: one of --env, --env-random, --env-avg is required");
      return run_fidelity(fid);
    }
    if (co->parsed()) return run_optimize(opt);
    if (cg->parsed()) return run_gen(gen);
  } catch (const gd::parse_error& e) {
    std::cerr << "gatedist: " << e.what() << "\n";
    return kExitParse;
  } catch (const gd::dimension_error& e) {
    std::cerr << "gatedist: " << e.what() << "\n";
    return kExitDimension;
  } catch (const gd::not_unitary_error& e) {
    std::cerr << "gatedist: " << e.what() << "\n";
    return kExitNotUnitary;
  } catch (const gd::not_normalized_error& e) {
    std::cerr << "gatedist: " << e.what() << "\n";
    return kExitEnvNotNormalized;
  } catch (const gd::domain_error& e) {
    std::cerr << "gatedist: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "gatedist: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
