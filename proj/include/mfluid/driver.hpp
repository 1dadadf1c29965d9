#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "integrator.hpp"
#include "problems.hpp"
#include "snapshot.hpp"

namespace mfluid {

// Everything a run needs after defaults and overrides are applied.
struct RunPlan {
  ProblemSpec problem;
  SchemeConfig scheme;
  std::array<int, 2> n{1, 1};
  double t_final = 0.0;
  std::vector<double> snapshots;
  OutputFormat format = OutputFormat::csv;
};

inline RunPlan plan_run(const RunConfig& c) {
  RunPlan p;
  try {
    p.problem = build_problem(c.problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.scheme.scheme = c.reference ? Scheme::pccu : c.scheme;
  p.scheme.cfl = c.cfl;
  p.scheme.eps0 = c.eps0;
  p.scheme.sharp = {c.theta, c.tau_interface};
  p.scheme.smooth = {c.theta, c.tau_smooth};
  p.scheme.hybrid = c.hybrid.value_or(p.problem.hybrid_default);
  p.scheme.thresholds = p.problem.thresholds();
  p.n = c.reference ? p.problem.n_ref : p.problem.n;
  if (c.nx) p.n[0] = *c.nx;
  if (c.ny) {
    if (p.problem.dim != 2) throw ConfigError("ny given for 1-D problem " + c.problem);
    p.n[1] = *c.ny;
  }
  p.t_final = c.t_final.value_or(p.problem.t_final);
  p.snapshots = c.snapshots.value_or(p.problem.snapshots);
  std::erase_if(p.snapshots, [&](double t) { return t > p.t_final; });
  if (p.snapshots.empty() || p.snapshots.back() < p.t_final) p.snapshots.push_back(p.t_final);
  p.format = c.format;
  if (p.format == OutputFormat::automatic)
    p.format = p.problem.dim == 1 ? OutputFormat::csv : OutputFormat::grid_binary;
  if (p.format == OutputFormat::csv && p.problem.dim != 1)
    throw ConfigError("csv output is only available for 1-D problems");
  return p;
}

struct Progress {
  int steps = 0;
  double time = 0.0;
};

// Advances the initial field of the plan, calling on_snapshot at every
// scheduled time. Throws StateError on abort; `last_good` then holds the
// state at `progress.time`.
template <int Dim>
Field<Dim> simulate(const RunPlan& plan, Progress& progress,
                    const std::function<void(const Field<Dim>&, double)>& on_snapshot,
                    Field<Dim>* last_good = nullptr) {
  const auto grid = problem_grid<Dim>(plan.problem, plan.n, ghost_width(plan.scheme.scheme));
  Solver<Dim> solver(grid, plan.scheme);
  Field<Dim> U = initialize(plan.problem, grid);
  double t = 0.0;
  for (double target : plan.snapshots) {
    while (t < target) {
      if (last_good) *last_good = U;
      const double dt = solver.step(U, t, target);
      t = (target - t - dt <= 1e-14 * std::max(1.0, std::abs(target))) ? target : t + dt;
      ++progress.steps;
      progress.time = t;
    }
    if (on_snapshot) on_snapshot(U, t);
  }
  return U;
}

inline std::string snapshot_name(const RunPlan& p, double t) {
  char buf[256];
  if (p.problem.dim == 1)
    std::snprintf(buf, sizeof buf, "%s_%s_n%d_t%.6g", p.problem.name.c_str(),
                  to_string(p.scheme.scheme).c_str(), p.n[0], t);
  else
    std::snprintf(buf, sizeof buf, "%s_%s_n%dx%d_t%.6g", p.problem.name.c_str(),
                  to_string(p.scheme.scheme).c_str(), p.n[0], p.n[1], t);
  return buf;
}

struct RunResult {
  bool aborted = false;
  std::string error;
  int steps = 0;
  double time = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  std::string manifest;
};

namespace detail {

template <int Dim>
std::string write_output(const Field<Dim>& U, double t, const RunPlan& plan,
                         const RunConfig& cfg, const std::string& name) {
  Snapshot s = make_snapshot(U, t);
  s.meta["scheme"] = to_string(plan.scheme.scheme);
  s.meta["problem"] = plan.problem.name;
  s.meta["resolution"] =
      Dim == 1 ? std::to_string(plan.n[0])
               : std::to_string(plan.n[0]) + "x" + std::to_string(plan.n[1]);
  s.meta["config_hash"] = hash_hex(config_hash(cfg));
  const auto base = (std::filesystem::path(cfg.out) / name).string();
  if (plan.format == OutputFormat::csv) {
    write_csv(s, base + ".csv");
    return base + ".csv";
  }
  write_grid_binary(s, base);
  return base + ".meta";
}

template <int Dim>
void run_dim(const RunConfig& cfg, const RunPlan& plan, RunResult& r, std::ostream& log) {
  Progress prog;
  Field<Dim> last_good;
  try {
    simulate<Dim>(
        plan, prog,
        [&](const Field<Dim>& U, double t) {
          r.outputs.push_back(write_output(U, t, plan, cfg, snapshot_name(plan, t)));
          log << "t=" << t << " steps=" << prog.steps << " -> " << r.outputs.back() << "\n";
        },
        &last_good);
  } catch (const StateError& e) {
    r.aborted = true;
    r.error = e.what();
    log << "solver abort at t=" << prog.time << ": " << e.what() << "\n";
    if (last_good.size() > 0)
      r.outputs.push_back(write_output(last_good, prog.time, plan, cfg,
                                       snapshot_name(plan, prog.time) + "_lastgood"));
  }
  r.steps = prog.steps;
  r.time = prog.time;
}

}  // namespace detail

inline RunResult run(const RunConfig& cfg, std::ostream& log) {
  const RunPlan plan = plan_run(cfg);
  std::filesystem::create_directories(cfg.out);
  RunResult r;
  const auto t0 = std::chrono::steady_clock::now();
  if (plan.problem.dim == 1)
    detail::run_dim<1>(cfg, plan, r, log);
  else
    detail::run_dim<2>(cfg, plan, r, log);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json m;
  m["config"] = serialize_config(cfg);
  m["config_hash"] = hash_hex(config_hash(cfg));
  m["problem"] = plan.problem.name;
  m["scheme"] = to_string(plan.scheme.scheme);
  m["hybrid"] = plan.scheme.hybrid;
  m["resolution"] = plan.n;
  m["t_final"] = plan.t_final;
  m["time_reached"] = r.time;
  m["steps"] = r.steps;
  m["wall_seconds"] = r.wall_seconds;
  m["status"] = r.aborted ? "aborted" : "ok";
  if (r.aborted) m["error"] = r.error;
  m["outputs"] = r.outputs;
  r.manifest = (std::filesystem::path(cfg.out) /
                (plan.problem.name + "_" + to_string(plan.scheme.scheme) + "_manifest.json"))
                   .string();
  std::ofstream out(r.manifest);
  if (!out) throw IoError("cannot write " + r.manifest);
  out << m.dump(2) << "\n";
  return r;
}

struct ConvergenceRow {
  int n = 0;
  double l1 = 0.0;
  double order = 0.0;  // against the previous row; 0 for the first
};

// L1 density error against the closed-form solution at t_final for a
// sequence of 1-D resolutions. With high_order_dt the step is scaled by
// (h/h_coarsest)^(2/3) so that dt ~ h^(5/3).
inline std::vector<ConvergenceRow> convergence_study(const std::string& problem, Scheme scheme,
                                                     const std::vector<int>& ns,
                                                     bool high_order_dt) {
  RunConfig cfg;
  cfg.problem = problem;
  cfg.scheme = scheme;
  std::vector<ConvergenceRow> rows;
  for (int n : ns) {
    cfg.nx = n;
    RunPlan plan = plan_run(cfg);
    if (plan.problem.dim != 1 || !plan.problem.exact)
      throw ConfigError("problem " + problem + " has no closed-form 1-D solution");
    plan.snapshots = {plan.t_final};
    const auto grid = problem_grid<1>(plan.problem, plan.n, ghost_width(scheme));
    Solver<1> solver(grid, plan.scheme);
    if (high_order_dt)
      solver.set_dt_factor(std::pow(static_cast<double>(ns.front()) / n, 2.0 / 3.0));
    Field<1> U = initialize(plan.problem, grid);
    double t = 0.0;
    while (t < plan.t_final) {
      const double dt = solver.step(U, t, plan.t_final);
      t = (plan.t_final - t - dt <= 1e-14) ? plan.t_final : t + dt;
    }
    double err = 0.0;
    for (int i = 0; i < grid.n[0]; ++i) {
      const double rho = U.get(grid.interior_index(i)).rho();
      err += std::abs(rho - plan.problem.exact(grid.center(0, i), 0.0, t)[0]);
    }
    ConvergenceRow row{n, err * grid.spacing(0), 0.0};
    if (!rows.empty())
      row.order = std::log(rows.back().l1 / row.l1) / std::log(static_cast<double>(n) / rows.back().n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mfluid
