// Batch front door: run configurations for the ensemble oracle, the
// Liouville and marginal solvers, solver-vs-oracle comparison, resource
// estimates, and the causal linear-system check.
//
// Exit codes: 0 success, 2 config/validation error, 3 numerical failure,
// 4 artifact mismatch. Errors are emitted as one-line JSON on stdout.

#include "liou/causal.hpp"
#include "liou/ensemble.hpp"
#include "liou/io.hpp"
#include "liou/marginal.hpp"
#include "liou/presets.hpp"
#include "liou/resources.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr const char* kVersion = "liou 1.0.0";

int fail(int code, const std::string& error_code, const std::string& message) {
  json err;
  err["error"] = error_code;
  err["message"] = message;
  std::cout << err.dump() << "\n";
  return code;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  json j;
  in >> j;
  return j;
}

// config value unless the flag was given on the command line
template <typename T>
T resolve(const CLI::Option* opt, const T& flag_value, const json& cfg,
          const std::string& key, const T& fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) return cfg.at(key).get<T>();
  return flag_value == fallback ? fallback : flag_value;
}

liou::Scheme parse_scheme(const std::string& s) {
  if (s == "paper_matrix") return liou::Scheme::paper_matrix;
  if (s == "consistent_central") return liou::Scheme::consistent_central;
  throw std::invalid_argument("unknown scheme: " + s);
}

void write_manifest(const std::string& path, const std::string& command,
                    const json& resolved, double wall_s) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["inputs"] = resolved;
  m["wall_time_s"] = wall_s;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << m.dump(2) << "\n";
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// ---------------------------------------------------------------- ensemble

int run_ensemble_cmd(const json& cfg) {
  Timer timer;
  const int N = cfg.value("sites", 3);
  const bool periodic = cfg.value("periodic", true);
  const double nu = cfg.value("nu", 0.1);
  const double dt = cfg.value("dt", 0.005);
  const int steps = cfg.value("steps", 100);
  const int count = cfg.value("count", 1000);
  const std::uint64_t seed = cfg.value("seed", 0ULL);
  if (!(dt > 0.0)) throw std::invalid_argument("bad_dt");

  liou::SpatialGrid grid{N, periodic};
  liou::DynamicsSpec dyn{parse_scheme(cfg.value("scheme", std::string(
                             "consistent_central"))), nu};

  liou::InitialEnsembleSpec init;
  init.count = count;
  init.seed = seed;
  init.base_profile = Eigen::VectorXd::Zero(N);
  if (cfg.contains("base_profile")) {
    auto base = cfg.at("base_profile").get<std::vector<double>>();
    if (static_cast<int>(base.size()) != N)
      throw std::invalid_argument("base_profile length mismatch");
    for (int j = 0; j < N; ++j) init.base_profile[j] = base[j];
  }
  const std::string pk = cfg.value("perturbation", std::string("gaussian"));
  init.perturbation.kind = pk == "uniform" ? liou::Perturbation::Kind::uniform
                                           : liou::Perturbation::Kind::gaussian;
  init.perturbation.scale = cfg.value("perturbation_scale", 0.1);

  const auto ic = liou::sample_initial_conditions(init, grid);
  const auto bundle = liou::run_ensemble(ic, dyn, grid, dt, steps, seed);

  json resolved = cfg;
  resolved["seed"] = seed;

  if (cfg.contains("histogram_out")) {
    const int n = cfg.value("phase_levels", 64);
    const double lo = cfg.value("u_min", -2.0);
    const double hi = cfg.value("u_max", 2.0);
    std::vector<int> axes;
    if (cfg.contains("axes"))
      axes = cfg.at("axes").get<std::vector<int>>();
    else
      for (int j = 0; j < N; ++j) axes.push_back(j);
    const auto phase =
        liou::build_phase_grid(static_cast<int>(axes.size()), n, lo, hi);
    liou::HistogramMode mode;
    if (cfg.value("mode", std::string("snapshot")) == "time_occupation")
      mode.kind = liou::HistogramMode::Kind::time_occupation;
    mode.t_index = cfg.value("t_index", steps);
    const auto pdf = liou::empirical_pdf(bundle, phase, axes, mode);
    liou::write_field(pdf.field, cfg.at("histogram_out").get<std::string>());
    resolved["out_of_range_fraction"] = pdf.out_of_range_fraction;
  }
  if (cfg.contains("trajectories_out"))
    liou::write_bundle_csv(bundle, cfg.at("trajectories_out").get<std::string>());

  if (cfg.contains("manifest_out"))
    write_manifest(cfg.at("manifest_out").get<std::string>(), "ensemble",
                   resolved, timer.seconds());
  return 0;
}

// --------------------------------------------------- liouville / marginal

liou::FluxOperator build_solver_operator(const json& cfg,
                                         const liou::PhaseGrid& phase,
                                         bool marginal) {
  const double D = cfg.value("diffusion", 0.0);
  liou::DynamicsSpec dyn{
      parse_scheme(cfg.value("scheme", std::string("consistent_central"))),
      cfg.value("nu", 0.1)};
  const std::string field = cfg.value("field", std::string("burgers"));

  if (marginal) {
    liou::ClosureSpec closure;
    const std::string ck = cfg.value("closure", std::string("triplet_periodic"));
    if (ck == "mean_field") {
      closure.kind = liou::ClosureSpec::Kind::mean_field;
      closure.p1 = liou::read_field(cfg.at("p1_path").get<std::string>());
    }
    return liou::assemble_3pt_operator(
        phase, liou::effective_field(closure, dyn), D);
  }
  if (field == "rotation")
    return liou::assemble_operator(phase, [&] {
      auto v = liou::rigid_rotation_field(phase);
      v.diffusion = D;
      return v;
    }());
  if (field == "zero")
    return liou::assemble_operator(phase, liou::zero_velocity_field(D));
  return liou::assemble_operator(phase,
                                 liou::burgers_velocity_field(phase, dyn, D));
}

int run_solver_cmd(const json& cfg, bool marginal) {
  Timer timer;
  const int axes = marginal ? 3 : cfg.value("axes", 3);
  const int n = cfg.value("phase_levels", 32);
  const double lo = cfg.value("u_min", -2.0);
  const double hi = cfg.value("u_max", 2.0);
  const auto phase = liou::build_phase_grid(axes, n, lo, hi);

  const auto op = build_solver_operator(cfg, phase, marginal);

  std::vector<double> means(axes, 0.0);
  if (cfg.contains("initial_means"))
    means = cfg.at("initial_means").get<std::vector<double>>();
  const double sigma = cfg.value("initial_sigma", 0.3);
  const auto p0 = liou::gaussian_product_field(phase, means, sigma);

  double dt = cfg.value("dt", 0.0);
  int steps = cfg.value("steps", 0);
  const double cfl = cfg.value("cfl", 0.9);
  if (dt <= 0.0) {
    dt = liou::max_stable_dt(op, cfl);
    if (!std::isfinite(dt))
      throw std::invalid_argument("zero transport; supply dt explicitly");
  }
  if (steps <= 0) {
    const double t_final = cfg.value("t_final", 0.5);
    steps = std::max(1, static_cast<int>(std::ceil(t_final / dt)));
    dt = t_final / steps;
  }

  const std::string method = cfg.value("method", std::string("euler"));
  const auto result = liou::evolve(
      p0, op, dt, steps,
      method == "rk2" ? liou::TimeMethod::rk2 : liou::TimeMethod::euler);

  if (cfg.contains("field_out"))
    liou::write_field(result.field, cfg.at("field_out").get<std::string>());
  if (cfg.contains("diagnostics_out"))
    liou::write_diagnostics_csv(result.diagnostics,
                                cfg.at("diagnostics_out").get<std::string>());
  json resolved = cfg;
  resolved["dt"] = dt;
  resolved["steps"] = steps;
  if (cfg.contains("manifest_out"))
    write_manifest(cfg.at("manifest_out").get<std::string>(),
                   marginal ? "marginal" : "liouville", resolved,
                   timer.seconds());
  return 0;
}

// ----------------------------------------------------------------- compare

int run_compare_cmd(const std::string& solver_path,
                    const std::string& oracle_path, double tol_mean,
                    double tol_energy, const std::string& report_out) {
  const auto solver = liou::read_field(solver_path);
  const auto oracle = liou::read_field(oracle_path);
  if (!solver.grid.same_geometry(oracle.grid))
    return fail(4, "grid_mismatch", "solver and oracle grids differ");

  json report;
  bool pass = true;
  json means = json::array();
  for (int a = 0; a < solver.grid.axes_count; ++a) {
    liou::ObservableSpec obs{liou::ObservableSpec::Kind::axis_mean, a, 1, true};
    const double ms = liou::average(solver, obs);
    const double mo = liou::average(oracle, obs);
    const double diff = std::abs(ms - mo);
    const bool ok = diff <= tol_mean;
    pass = pass && ok;
    means.push_back({{"axis", a},
                     {"solver", ms},
                     {"oracle", mo},
                     {"abs_diff", diff},
                     {"pass", ok}});
  }
  report["axis_means"] = means;

  liou::ObservableSpec ke{liou::ObservableSpec::Kind::kinetic_energy, 0, 1, true};
  const double ks = liou::average(solver, ke);
  const double ko = liou::average(oracle, ke);
  const double krel = std::abs(ks - ko) / std::max(std::abs(ko), 1e-300);
  const bool kok = krel <= tol_energy;
  pass = pass && kok;
  report["kinetic_energy"] = {
      {"solver", ks}, {"oracle", ko}, {"rel_diff", krel}, {"pass", kok}};

  // L1 distance between matching 1-point marginals
  json l1 = json::array();
  for (int a = 0; a < solver.grid.axes_count; ++a) {
    const int keep[1] = {a};
    const auto ms = liou::marginalize(solver, keep);
    const auto mo = liou::marginalize(oracle, keep);
    l1.push_back((ms.values - mo.values).cwiseAbs().sum());
  }
  report["marginal_l1"] = l1;
  report["pass"] = pass;

  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!report_out.empty()) {
    std::ofstream out(report_out);
    out << text;
  }
  return pass ? 0 : 4;
}

// ---------------------------------------------------------------- estimate

int run_estimate_cmd(bool full, bool marginal, bool dynamic, bool sweep,
                     std::uint64_t G, int F, int z, int n, double dof,
                     bool with_cost, const liou::CostQuery& cost,
                     const std::string& out_path) {
  json report;
  report["convention_notes"] = {
      "qubits per encoded variable = ceil(log2 n)",
      "polylog(G, 1/eps) realized as log2(G) * log2(1/eps)",
      "costs are model units, proportionality only"};
  json inputs;

  if (sweep) {
    // one CSV row per n in a doubling sweep
    std::string csv = "n,qubits_full,qubits_marginal\n";
    for (int levels = 2; levels <= n; levels *= 2) {
      liou::ProblemShape shape{G, F, z, levels};
      csv += std::to_string(levels) + "," +
             std::to_string(liou::qubits_full(shape)) + "," +
             std::to_string(liou::qubits_marginal(shape)) + "\n";
    }
    std::cout << csv;
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << csv;
    }
    return 0;
  }

  std::uint64_t qubits = 0;
  if (dynamic) {
    qubits = liou::dynamic_approach_qubits(dof);
    inputs["dof"] = dof;
    if (dof < 2.0) report["note"] = "degenerate input: a single state needs no qubits";
  } else {
    liou::ProblemShape shape{G, F, z, n};
    qubits = full ? liou::qubits_full(shape) : liou::qubits_marginal(shape);
    inputs["G"] = G;
    inputs["F"] = F;
    inputs["z"] = z;
    inputs["n"] = n;
    (void)marginal;
  }
  report["qubits"] = qubits;

  if (with_cost) {
    report["cost_quantum"] = liou::cost_quantum(cost);
    report["cost_classical"] =
        liou::cost_classical(cost.sparsity, cost.time_span, cost.grid_size);
    inputs["s"] = cost.sparsity;
    inputs["phi"] = cost.fidelity;
    inputs["T"] = cost.time_span;
    inputs["cost_G"] = cost.grid_size;
    inputs["epsilon"] = cost.epsilon;
  }
  report["inputs"] = inputs;

  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << text;
  }
  return 0;
}

// ------------------------------------------------------------------ causal

int run_causal_cmd(const json& cfg) {
  const int n = cfg.value("phase_levels", 8);
  const double lo = cfg.value("u_min", -2.0);
  const double hi = cfg.value("u_max", 2.0);
  const auto phase = liou::build_phase_grid(3, n, lo, hi);

  liou::DynamicsSpec dyn{
      parse_scheme(cfg.value("scheme", std::string("consistent_central"))),
      cfg.value("nu", 0.1)};
  liou::ClosureSpec closure;
  const auto op = liou::assemble_3pt_operator(
      phase, liou::effective_field(closure, dyn), cfg.value("diffusion", 0.0));

  std::vector<double> means(3, 0.0);
  if (cfg.contains("initial_means"))
    means = cfg.at("initial_means").get<std::vector<double>>();
  const auto p0 =
      liou::gaussian_product_field(phase, means, cfg.value("initial_sigma", 0.3));

  double dt = cfg.value("dt", 0.0);
  if (dt <= 0.0) dt = liou::max_stable_dt(op, cfg.value("cfl", 0.9));
  const int slices = cfg.value("time_slices", 20);

  const auto sys = liou::build_causal_system(op, dt, slices, p0);
  const auto solution = liou::forward_solve(sys);
  const double res = liou::residual(sys, solution);
  double pmax = 0.0;
  for (const auto& s : solution)
    pmax = std::max(pmax, s.values.lpNorm<Eigen::Infinity>());
  const auto rep = liou::sparsity_report(sys);

  // cross-check against Euler marching
  const auto euler = liou::evolve(p0, op, dt, slices, liou::TimeMethod::euler);
  const double euler_diff =
      (solution.back().values - euler.field.values).lpNorm<Eigen::Infinity>();

  json out;
  out["dimension"] = rep.dimension;
  out["sparsity_s"] = rep.s;
  out["total_nonzeros"] = rep.total_nonzeros;
  out["residual"] = res;
  out["residual_relative"] = res / std::max(pmax, 1e-300);
  out["euler_max_diff"] = euler_diff;
  out["dt"] = dt;
  std::cout << out.dump(2) << "\n";

  if (cfg.contains("matrix_out"))
    liou::export_matrix(sys, cfg.at("matrix_out").get<std::string>());
  if (cfg.contains("report_out")) {
    std::ofstream f(cfg.at("report_out").get<std::string>());
    f << out.dump(2) << "\n";
  }
  return euler_diff <= 1e-13 && res / std::max(pmax, 1e-300) <= 1e-12 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liouville ensemble-fluid laboratory"};
  app.set_version_flag("--version", kVersion);
  int threads = 0;  // accepted for contract symmetry; numerics never depend on it
  if (const char* env = std::getenv("LIOU_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "worker threads (does not affect output)");

  std::string config_path;
  std::uint64_t seed_flag = 0;

  auto* cmd_ensemble = app.add_subcommand("ensemble", "Monte-Carlo ensemble run");
  cmd_ensemble->add_option("--config", config_path);
  auto* seed_opt = cmd_ensemble->add_option("--seed", seed_flag);

  auto* cmd_liouville = app.add_subcommand("liouville", "full phase-space solve");
  cmd_liouville->add_option("--config", config_path);
  auto* cmd_marginal = app.add_subcommand("marginal", "3-point marginal solve");
  cmd_marginal->add_option("--config", config_path);
  auto* cmd_causal = app.add_subcommand("causal", "causal linear-system check");
  cmd_causal->add_option("--config", config_path);

  auto* cmd_compare = app.add_subcommand("compare", "solver vs oracle report");
  std::string solver_path, oracle_path, report_out;
  double tol_mean = 0.05, tol_energy = 0.05;
  cmd_compare->add_option("--solver", solver_path)->required();
  cmd_compare->add_option("--oracle", oracle_path)->required();
  cmd_compare->add_option("--tol-mean", tol_mean);
  cmd_compare->add_option("--tol-energy", tol_energy);
  cmd_compare->add_option("--report", report_out);

  auto* cmd_estimate = app.add_subcommand("estimate", "resource estimates");
  bool est_full = false, est_marginal = false, est_dynamic = false,
       est_sweep = false, est_cost = false;
  std::uint64_t est_G = 1;
  int est_F = 1, est_z = 1, est_n = 2;
  double est_dof = 1.0;
  liou::CostQuery cost;
  std::string est_out;
  cmd_estimate->add_flag("--full", est_full);
  cmd_estimate->add_flag("--marginal", est_marginal);
  cmd_estimate->add_flag("--dynamic", est_dynamic);
  cmd_estimate->add_flag("--sweep", est_sweep);
  cmd_estimate->add_option("--G", est_G);
  cmd_estimate->add_option("--F", est_F);
  cmd_estimate->add_option("--z", est_z);
  cmd_estimate->add_option("--n", est_n);
  cmd_estimate->add_option("--dof", est_dof);
  cmd_estimate->add_flag("--cost", est_cost);
  cmd_estimate->add_option("--s", cost.sparsity);
  cmd_estimate->add_option("--phi", cost.fidelity);
  cmd_estimate->add_option("--T", cost.time_span);
  cmd_estimate->add_option("--cost-G", cost.grid_size);
  cmd_estimate->add_option("--eps", cost.epsilon);
  cmd_estimate->add_option("--out", est_out);

  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_ensemble) {
      json cfg = load_config(config_path);
      if (seed_opt->count() > 0) cfg["seed"] = seed_flag;
      return run_ensemble_cmd(cfg);
    }
    if (*cmd_liouville) return run_solver_cmd(load_config(config_path), false);
    if (*cmd_marginal) return run_solver_cmd(load_config(config_path), true);
    if (*cmd_causal) return run_causal_cmd(load_config(config_path));
    if (*cmd_compare)
      return run_compare_cmd(solver_path, oracle_path, tol_mean, tol_energy,
                             report_out);
    if (*cmd_estimate) {
      if (!est_full && !est_marginal && !est_dynamic && !est_sweep)
        return fail(2, "bad_mode", "choose --full, --marginal, --dynamic or --sweep");
      return run_estimate_cmd(est_full, est_marginal, est_dynamic, est_sweep,
                              est_G, est_F, est_z, est_n, est_dof, est_cost,
                              cost, est_out);
    }
  } catch (const liou::PositivityViolation& e) {
    return fail(3, "positivity_violation", e.what());
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    return fail(2, msg == "bad_dt" ? "bad_dt" : "invalid_config", msg);
  } catch (const std::exception& e) {
    return fail(3, "numerical_failure", e.what());
  }
  return 0;
}
