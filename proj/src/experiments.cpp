#include "hs/experiments.hpp"

#include "hs/exponents.hpp"
#include "hs/field_io.hpp"
#include "hs/norms.hpp"
#include "hs/observables.hpp"
#include "hs/scattering.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace hs {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CheckList {
  std::vector<Check> checks;

  void add(const std::string& name, bool pass, double measured, double threshold,
           const std::string& detail = "") {
    checks.push_back({name, pass, measured, threshold, detail});
  }
  // measured must stay at or below threshold
  void add_below(const std::string& name, double measured, double threshold,
                 const std::string& detail = "") {
    add(name, measured <= threshold, measured, threshold, detail);
  }
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  json to_json() const {
    json arr = json::array();
    for (const Check& c : checks) {
      json j;
      j["name"] = c.name;
      j["pass"] = c.pass;
      j["measured"] = c.measured;
      j["threshold"] = c.threshold;
      if (!c.detail.empty()) j["detail"] = c.detail;
      arr.push_back(j);
    }
    return arr;
  }
  void print(std::ostream& os) const {
    for (const Check& c : checks) {
      os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured=" << fmt_param(c.measured)
         << " threshold=" << fmt_param(c.threshold);
      if (!c.detail.empty()) os << "  (" << c.detail << ")";
      os << "\n";
    }
  }
};

json grid_json(const GridSpec& g) {
  return json{{"n", g.dim}, {"points", g.points_per_axis}, {"half_length", g.half_length},
              {"spacing", g.spacing()}};
}

json potential_json(const PotentialConfig& pc) {
  json j;
  switch (pc.spec.kind) {
    case PotentialKind::zero: j["kind"] = "zero"; break;
    case PotentialKind::inverse_power:
      j["kind"] = "inverse_power";
      j["C"] = pc.spec.strength;
      j["gamma"] = pc.spec.power;
      break;
    case PotentialKind::tabulated_radial:
      j["kind"] = "tabulated_radial";
      j["table_file"] = pc.table_file;
      break;
  }
  if (pc.spec.truncate_inner > 0.0) j["truncate_inner"] = pc.spec.truncate_inner;
  if (pc.spec.truncate_outer > 0.0) j["truncate_outer"] = pc.spec.truncate_outer;
  j["alpha"] = pc.alpha;
  j["a"] = pc.a;
  if (pc.mollify_j > 0) j["mollify_j"] = pc.mollify_j;
  return j;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

void write_fields_dir(const Trajectory& traj, const fs::path& out, const std::string& mode) {
  if (mode == "none") return;
  const fs::path dir = out / "fields";
  fs::create_directories(dir);
  if (mode == "endpoints") {
    write_field(traj.initial(), (dir / "initial.hsf").string());
    write_field(traj.final(), (dir / "final.hsf").string());
    return;
  }
  char name[32];
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    std::snprintf(name, sizeof(name), "snap_%06zu.hsf", i);
    write_field(traj.snapshots[i], (dir / name).string());
  }
}

PotentialOnGrid build_potential(const ExperimentConfig& cfg) {
  if (cfg.potential.mollify_j > 0)
    return regularize(cfg.potential.spec, cfg.potential.mollify_j, cfg.grid);
  return sample_potential(cfg.potential.spec, cfg.grid);
}

// Spacetime diagnostic pair (q0, r0) = (4, 2n/(n-1)) when meaningful.
void add_spacetime_norms(json& payload, const Trajectory& traj) {
  const int n = traj.grid.dim;
  if (n < 2) return;
  const double r0 = 2.0 * n / (n - 1.0);
  const double t1 = traj.rows.front().t;
  const double t2 = traj.rows.back().t;
  if (traj.snapshots.size() >= 2 && t2 > t1) {
    payload["spacetime_q"] = 4.0;
    payload["spacetime_r"] = r0;
    payload["spacetime_norm"] = spacetime_norm(traj, 4.0, r0, std::min(t1, t2), std::max(t1, t2));
  }
}

json rows_summary(const Trajectory& traj) {
  double mass0 = traj.rows.front().mass;
  double drift = 0.0, e0 = traj.rows.front().energy, edrift = 0.0;
  for (const DiagnosticsRow& r : traj.rows) {
    drift = std::max(drift, std::abs(r.mass - mass0) / std::max(mass0, 1e-300));
    edrift = std::max(edrift, std::abs(r.energy - e0) / (std::abs(e0) + 1.0));
  }
  json j;
  j["mass_drift"] = drift;
  j["energy_drift"] = edrift;
  j["boundary_mass_max"] = traj.boundary_mass_max;
  if (traj.boundary_first_exceed >= 0.0)
    j["boundary_first_exceed_t"] = traj.boundary_first_exceed;
  j["cube_edge"] = traj.cube_edge;
  j["cube_edge_clamped"] = traj.cube_edge_clamped;
  return j;
}

void common_trajectory_checks(CheckList& cl, const Trajectory& traj,
                              const PotentialOnGrid& pot, const CheckThresholds& th,
                              bool gate_boundary) {
  double mass0 = traj.rows.front().mass;
  double drift = 0.0;
  for (const DiagnosticsRow& r : traj.rows)
    drift = std::max(drift, std::abs(r.mass - mass0) / std::max(mass0, 1e-300));
  cl.add_below("mass_conservation", drift, th.mass_drift, "max relative L2 drift");

  const Field& last = traj.final();
  const double e_rows = traj.rows.back().energy;
  const double e_direct = energy(last, pot);
  const double rel = std::abs(e_rows - e_direct) / (std::abs(e_direct) + 1.0);
  cl.add_below("energy_identity", rel, th.energy_identity,
               "per-step energy vs direct kinetic+interaction evaluation");

  if (gate_boundary)
    cl.add_below("boundary_mass", traj.boundary_mass_max, th.boundary_mass,
                 "peak mass fraction within the wraparound band");
}

int finish(const fs::path& out, json& report, CheckList& cl, const RunOptions& opts,
           const ExperimentConfig& cfg) {
  report["experiment"] = kind_name(cfg.kind);
  report["schema"] = "hs-report-1";
  report["checks"] = cl.to_json();
  report["all_passed"] = cl.all_passed();
  write_json(report, out / "report.json");
  if (!opts.quiet) {
    cl.print(std::cout);
    int npass = 0;
    for (const Check& c : cl.checks) npass += c.pass ? 1 : 0;
    std::cout << "experiment " << kind_name(cfg.kind) << ": " << npass << "/" << cl.checks.size()
              << " checks passed\n";
  }
  return cl.all_passed() ? 0 : 1;
}

int run_evolve(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out) {
  const PotentialOnGrid pot = build_potential(cfg);
  const Field u0 = generate_initial_data(cfg.initial, cfg.grid);
  const Trajectory traj = strang_evolve(u0, pot, cfg.evolve);

  write_diagnostics_csv(traj, (out / "diagnostics.csv").string());
  write_fields_dir(traj, out, cfg.write_fields);

  CheckList cl;
  common_trajectory_checks(cl, traj, pot, cfg.checks, /*gate_boundary=*/true);

  json payload;
  payload["grid"] = grid_json(cfg.grid);
  payload["potential"] = potential_json(cfg.potential);
  payload["trajectory"] = rows_summary(traj);
  add_spacetime_norms(payload, traj);

  if (cfg.decay_r > 2.0) {
    const DecayReport dr = decay_scan(traj, cfg.decay_r);
    payload["decay"] = {{"r", dr.r}, {"slope", dr.slope}, {"t_lo", dr.t_lo}, {"t_hi", dr.t_hi},
                        {"monotone_decreasing", dr.monotone_decreasing}};
    cl.add("decay_monotone", dr.monotone_decreasing, dr.slope, 0.0,
           "L^r norm nonincreasing over the final dyadic window");
  }
  if (cfg.window_epsilon > 0.0 && cfg.window_length > 0.0) {
    const auto wr = window_search(traj, cfg.window_epsilon, cfg.window_length,
                                  cfg.potential.alpha);
    json wj;
    wj["epsilon"] = cfg.window_epsilon;
    wj["length"] = cfg.window_length;
    wj["found"] = wr.has_value();
    if (wr) {
      wj["t2"] = wr->t2;
      wj["window_index"] = wr->window_index;
      wj["window_integral"] = wr->window_integral;
      wj["measured_M"] = wr->measured_M;
      wj["log_bound"] = wr->log_bound;
      if (std::isfinite(wr->bound)) wj["bound"] = wr->bound;
    }
    payload["window_search"] = wj;
    cl.add("window_found", wr.has_value(), wr ? wr->t2 : -1.0, 0.0,
           "first admissible low-norm window within the horizon");
  }
  return finish(out, payload, cl, opts, cfg);
}

int run_scatter(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out) {
  const PotentialOnGrid pot = build_potential(cfg);
  const Field u0 = generate_initial_data(cfg.initial, cfg.grid);

  const double snap_dt = cfg.evolve.dt * cfg.evolve.sample_stride;
  for (double cp : cfg.checkpoints) {
    const double nearest = std::round(cp / snap_dt) * snap_dt;
    if (std::abs(nearest - cp) > cfg.evolve.dt / 2.0)
      throw std::invalid_argument("scatter: checkpoint " + fmt_param(cp) +
                                  " does not align with the snapshot stride");
  }

  EvolveConfig ev = cfg.evolve;
  ev.t_end = cfg.checkpoints.back();
  const Trajectory traj = strang_evolve(u0, pot, ev);
  const ScatterResult res = extract_asymptotic(traj, pot, cfg.checkpoints,
                                               cfg.checks.scatter_converged);

  write_diagnostics_csv(traj, (out / "diagnostics.csv").string());
  write_fields_dir(traj, out, cfg.write_fields);
  fs::create_directories(out / "fields");
  write_field(res.u_plus, (out / "fields" / "u_plus.hsf").string());

  CheckList cl;
  common_trajectory_checks(cl, traj, pot, cfg.checks, /*gate_boundary=*/false);
  cl.add_below("mass_residual", res.mass_residual, cfg.checks.mass_residual,
               "|  ||u_plus||_2 - ||u0||_2 |");
  const double e0 = energy(u0, pot);
  cl.add_below("energy_residual", res.energy_residual / (std::abs(e0) + 1e-300),
               cfg.checks.energy_residual, "relative |(1/2)||grad u_plus||^2 - E(u0)|");
  cl.add("scatter_converged", res.converged, res.increments.back(),
         cfg.checks.scatter_converged * h1_norm(res.u_plus), "final H1 Cauchy increment");
  const bool inc_drop = res.increments.size() >= 3 &&
                        res.increments.back() <= res.increments[1];
  cl.add("increments_decreasing", inc_drop && !res.diverging, res.increments.back(),
         res.increments.size() >= 2 ? res.increments[1] : 0.0,
         "H1 increments shrink along the checkpoints");
  const bool tail_drop = std::abs(res.hartree_tail.back()) <= std::abs(res.hartree_tail.front());
  cl.add("hartree_tail_decreasing", tail_drop, std::abs(res.hartree_tail.back()),
         std::abs(res.hartree_tail.front()), "interaction energy decays along the checkpoints");

  json payload;
  payload["grid"] = grid_json(cfg.grid);
  payload["potential"] = potential_json(cfg.potential);
  payload["trajectory"] = rows_summary(traj);
  payload["checkpoints"] = res.checkpoint_times;
  payload["increments_h1"] = res.increments;
  payload["hartree_tail"] = res.hartree_tail;
  payload["mass_residual"] = res.mass_residual;
  payload["energy_residual"] = res.energy_residual;
  payload["converged"] = res.converged;
  payload["diverging"] = res.diverging;
  add_spacetime_norms(payload, traj);
  return finish(out, payload, cl, opts, cfg);
}

int run_roundtrip(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out) {
  const PotentialOnGrid pot = build_potential(cfg);
  const Field u0 = generate_initial_data(cfg.initial, cfg.grid);
  const double T = cfg.roundtrip_T;

  EvolveConfig ev = cfg.evolve;
  ev.t_start = 0.0;
  ev.t_end = T;
  const Trajectory traj = strang_evolve(u0, pot, ev);

  Field u_plus, u0_prime;
  const RoundTripReport rep =
      roundtrip_from_state(u0, traj.final(), pot, T, cfg.evolve.dt, &u_plus, &u0_prime);

  write_diagnostics_csv(traj, (out / "diagnostics.csv").string());
  write_fields_dir(traj, out, cfg.write_fields);
  fs::create_directories(out / "fields");
  write_field(u_plus, (out / "fields" / "u_plus.hsf").string());
  write_field(u0_prime, (out / "fields" / "u0_prime.hsf").string());

  CheckList cl;
  cl.add_below("roundtrip_h1_error", rep.relative_h1_error, cfg.checks.roundtrip_h1,
               "relative H1 error of the reconstructed data");
  cl.add_below("mass_residual", rep.mass_residual, cfg.checks.mass_residual,
               "|  ||u0'||_2 - ||u0||_2 |");
  // Energy transfer budget: horizon truncation (Richardson surrogate) plus the
  // residual interaction at T plus the splitting error allowance.
  const double budget = 5.0 * (rep.richardson_h1 * rep.u0_h1 + std::abs(rep.hartree_at_T)) +
                        100.0 * cfg.evolve.dt * cfg.evolve.dt;
  cl.add_below("energy_within_budget", rep.energy_residual, budget,
               "|E(u0') - (1/2)||grad u_plus||^2| within the truncation budget");
  if (!rep.h3_pass)
    cl.add("repulsivity_precondition", true, 0.0, 0.0,
           "warning: potential fails the repulsivity check; theory does not apply");

  json payload;
  payload["grid"] = grid_json(cfg.grid);
  payload["potential"] = potential_json(cfg.potential);
  payload["trajectory"] = rows_summary(traj);
  payload["T"] = rep.T;
  payload["relative_h1_error"] = rep.relative_h1_error;
  payload["richardson_h1"] = rep.richardson_h1;
  payload["mass_residual"] = rep.mass_residual;
  payload["energy_residual"] = rep.energy_residual;
  payload["hartree_at_T"] = rep.hartree_at_T;
  payload["u0_h1"] = rep.u0_h1;
  payload["h3_pass"] = rep.h3_pass;
  return finish(out, payload, cl, opts, cfg);
}

int run_morawetz(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out) {
  const PotentialOnGrid pot = build_potential(cfg);
  const Field u0 = generate_initial_data(cfg.initial, cfg.grid);

  EvolveConfig ev = cfg.evolve;
  ev.t_end = std::max(ev.t_end, cfg.morawetz_t2);
  const Trajectory traj = strang_evolve(u0, pot, ev);

  const double sigma = cfg.morawetz_sigma < 0.0 ? cfg.grid.spacing() : cfg.morawetz_sigma;
  const MorawetzReport rep = morawetz_check(traj, pot, cfg.morawetz_t1, cfg.morawetz_t2, sigma,
                                            cfg.checks.dilation_step);

  write_diagnostics_csv(traj, (out / "diagnostics.csv").string());
  write_fields_dir(traj, out, cfg.write_fields);

  CheckList cl;
  common_trajectory_checks(cl, traj, pot, cfg.checks, /*gate_boundary=*/true);

  const H3Report h3 = check_H3(pot, cfg.potential.alpha, cfg.potential.a);
  cl.add("h3_monotone", h3.pass, h3.best_A, 0.0, "radial nonincreasing with power-law decrease");

  cl.add("morawetz_integrand_nonnegative",
         rep.integrand_min >= -cfg.checks.morawetz_integrand * rep.scale, rep.integrand_min,
         -cfg.checks.morawetz_integrand * rep.scale, "min over sampled times");
  const double chain_tol = cfg.checks.morawetz_chain * rep.scale + 1e-3 * std::abs(rep.lhs);
  const bool chain = rep.lhs <= rep.rhs_boundary + chain_tol &&
                     rep.rhs_boundary <= rep.rhs_bound + chain_tol;
  cl.add("morawetz_chain_inequality", chain, rep.lhs, rep.rhs_boundary,
         "integral <= boundary difference <= a-priori bound");
  cl.add("dilation_monotone", rep.monotonicity_violations == 0,
         static_cast<double>(rep.monotonicity_violations), 0.0,
         "per-step decreases beyond tolerance");

  json payload;
  payload["grid"] = grid_json(cfg.grid);
  payload["potential"] = potential_json(cfg.potential);
  payload["trajectory"] = rows_summary(traj);
  payload["t1"] = rep.t1;
  payload["t2"] = rep.t2;
  payload["sigma"] = rep.sigma;
  payload["lhs"] = rep.lhs;
  payload["rhs_boundary"] = rep.rhs_boundary;
  payload["rhs_bound"] = rep.rhs_bound;
  payload["integrand_min"] = rep.integrand_min;
  payload["scale"] = rep.scale;
  payload["monotonicity_violations"] = rep.monotonicity_violations;
  payload["sample_times"] = rep.sample_times;
  payload["integrand_values"] = rep.integrand_values;
  payload["dilation_sigmas"] = rep.dilation_sigmas;
  payload["dilation_t1"] = rep.dilation_t1;
  payload["dilation_t2"] = rep.dilation_t2;
  return finish(out, payload, cl, opts, cfg);
}

int run_check_potential(const ExperimentConfig& cfg, const RunOptions& opts,
                        const fs::path& out) {
  const PotentialOnGrid pot = build_potential(cfg);
  const int n = cfg.grid.dim;

  double p1 = cfg.potential.p1, p2 = cfg.potential.p2;
  if (p2 <= 0.0 || p1 <= 0.0) {
    if (pot.spec.kind == PotentialKind::inverse_power) {
      const double p_split = n / pot.spec.power;
      p2 = 0.5 * (std::max(1.0, n / 4.0) + p_split);
      p1 = 0.5 * (p_split + n / 2.0);
      if (!(p1 >= p2)) p1 = p2;
    } else {
      p1 = p2 = 2.0;
    }
  }

  const H1Report h1 = check_H1(pot, p1, p2, cfg.potential.a);
  const H2Report h2 = check_H2(pot, cfg.potential.a);
  const H3Report h3 = check_H3(pot, cfg.potential.alpha, cfg.potential.a);

  CheckList cl;
  cl.add("h1_pass", h1.pass, h1.near_norm, 0.0, "split integrability at the chosen exponents");
  cl.add("h2_pass", h2.pass, h2.near_norm, 0.0, "negative part integrability");
  cl.add("h3_pass", h3.pass, h3.best_A, 0.0, "repulsivity with power-law decrease");

  json payload;
  payload["grid"] = grid_json(cfg.grid);
  payload["potential"] = potential_json(cfg.potential);
  payload["h1"] = {{"p1", h1.p1}, {"p2", h1.p2}, {"split_radius", h1.split_radius},
                   {"near_norm", h1.near_norm}, {"far_norm", h1.far_norm},
                   {"near_finite", h1.near_finite}, {"far_finite", h1.far_finite},
                   {"window_cauchy", h1.window_cauchy},
                   {"window_wave_operator", h1.window_wave_operator},
                   {"window_completeness", h1.window_completeness},
                   {"window_decay", h1.window_decay}, {"pass", h1.pass}};
  payload["h2"] = {{"near_norm", h2.near_norm}, {"far_norm", h2.far_norm},
                   {"near_finite", h2.near_finite}, {"far_finite", h2.far_finite},
                   {"trivially_nonnegative", h2.trivially_nonnegative}, {"pass", h2.pass}};
  payload["h3"] = {{"alpha", h3.alpha}, {"a", h3.radius}, {"monotone", h3.monotone},
                   {"best_A", h3.best_A}, {"pass", h3.pass}};

  // Feasible exponent windows for the power-law family.
  if (pot.spec.kind == PotentialKind::inverse_power) {
    const double gamma = pot.spec.power;
    const double p_split = n / gamma;
    const double p2_lo = std::max(1.0, n / 4.0);
    const bool cauchy = p_split > p2_lo;                       // gamma < min(4, n)
    const bool wave = cauchy && p_split < n / 2.0;             // 2 < gamma < min(4, n)
    payload["gamma_windows"] = {{"gamma", gamma},
                                {"cauchy", cauchy},
                                {"wave_operators", wave},
                                {"completeness", wave && h3.pass}};
  }
  return finish(out, payload, cl, opts, cfg);
}

int run_sweep(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out);

int dispatch(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out) {
  switch (cfg.kind) {
    case ExperimentKind::evolve: return run_evolve(cfg, opts, out);
    case ExperimentKind::scatter: return run_scatter(cfg, opts, out);
    case ExperimentKind::roundtrip: return run_roundtrip(cfg, opts, out);
    case ExperimentKind::morawetz: return run_morawetz(cfg, opts, out);
    case ExperimentKind::check_potential: return run_check_potential(cfg, opts, out);
    case ExperimentKind::sweep: return run_sweep(cfg, opts, out);
  }
  return 2;
}

int run_sweep(const ExperimentConfig& cfg, const RunOptions& opts, const fs::path& out) {
  std::vector<double> gammas = cfg.sweep_gamma;
  std::vector<double> cs = cfg.sweep_C;
  std::vector<double> amps = cfg.sweep_amplitude;
  if ((!gammas.empty() || !cs.empty()) &&
      cfg.potential.spec.kind != PotentialKind::inverse_power)
    throw std::invalid_argument("sweep: gamma/C axes need an inverse_power potential");
  if (gammas.empty()) gammas = {cfg.potential.spec.power};
  if (cs.empty()) cs = {cfg.potential.spec.strength};
  if (amps.empty()) amps = {cfg.initial.amplitude};

  struct Job {
    ExperimentConfig child;
    std::string name;
    int exit_code = 2;
  };
  std::vector<Job> jobs;
  for (double g : gammas)
    for (double c : cs)
      for (double a : amps) {
        Job job;
        job.child = cfg;
        job.child.kind = cfg.sweep_base;
        if (cfg.potential.spec.kind == PotentialKind::inverse_power) {
          job.child.potential.spec.power = g;
          job.child.potential.spec.strength = c;
        }
        job.child.initial.amplitude = a;
        std::string name;
        if (!cfg.sweep_gamma.empty()) name += "g" + fmt_param(g);
        if (!cfg.sweep_C.empty()) name += (name.empty() ? "" : "_") + std::string("C") + fmt_param(c);
        if (!cfg.sweep_amplitude.empty())
          name += (name.empty() ? "" : "_") + std::string("a") + fmt_param(a);
        job.name = name.empty() ? "base" : name;
        jobs.push_back(std::move(job));
      }

  int pool = opts.threads;
  if (pool <= 0) {
    if (const char* env = std::getenv("HS_THREADS")) pool = std::atoi(env);
    if (pool <= 0) pool = 1;
  }
  pool = std::min<int>(pool, static_cast<int>(jobs.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      RunOptions child_opts = opts;
      child_opts.quiet = true;
      child_opts.out_override.clear();
      Job& job = jobs[i];
      job.child.output_dir = (out / job.name).string();
      try {
        job.exit_code = run_experiment(job.child, child_opts);
      } catch (const std::exception&) {
        job.exit_code = 2;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  CheckList cl;
  json children = json::array();
  for (const Job& job : jobs) {
    json cj;
    cj["name"] = job.name;
    cj["dir"] = job.name;
    cj["exit_code"] = job.exit_code;
    cj["passed"] = job.exit_code == 0;
    children.push_back(cj);
    cl.add("sweep_" + job.name, job.exit_code == 0, job.exit_code, 0.0,
           "child experiment exit code");
  }

  json payload;
  payload["base_kind"] = kind_name(cfg.sweep_base);
  payload["children"] = children;
  write_json(payload, out / "summary.json");
  return finish(out, payload, cl, opts, cfg);
}

}  // namespace

void write_diagnostics_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "t,mass,kinetic,hartree,energy,dilation,l4,l6,internal_mass,external_mass,"
        "internal_cube\n";
  for (const DiagnosticsRow& r : traj.rows) {
    os << fmt_double(r.t) << ',' << fmt_double(r.mass) << ',' << fmt_double(r.kinetic) << ','
       << fmt_double(r.hartree) << ',' << fmt_double(r.energy) << ',' << fmt_double(r.dilation)
       << ',' << fmt_double(r.l4) << ',' << fmt_double(r.l6) << ',' << fmt_double(r.internal_mass)
       << ',' << fmt_double(r.external_mass) << ',' << fmt_double(r.internal_cube) << '\n';
  }
}

int run_experiment(ExperimentConfig cfg, const RunOptions& opts) {
  if (!opts.expected_kind.empty() && opts.expected_kind != kind_name(cfg.kind))
    throw std::invalid_argument("config declares experiment kind '" +
                                std::string(kind_name(cfg.kind)) + "' but '" +
                                opts.expected_kind + "' was requested");
  if (!opts.out_override.empty()) cfg.output_dir = opts.out_override;
  if (opts.seed_override >= 0) {
    cfg.initial.seed = static_cast<std::uint64_t>(opts.seed_override);
    cfg.seed_given = true;
  }

  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  try {
    return dispatch(cfg, opts, out);
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    err["experiment"] = kind_name(cfg.kind);
    write_json(err, out / "error.json");
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_config_file(const std::string& path, const RunOptions& opts) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    return run_experiment(std::move(cfg), opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hs
