// Command line driver for the multifluid solver.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <mfluid/mfluid.hpp>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverAbort = 3;

int finish(const mfluid::RunResult& r) {
  std::cout << "steps: " << r.steps << "  time: " << r.time
            << "  wall: " << r.wall_seconds << " s\n"
            << "manifest: " << r.manifest << "\n";
  if (r.aborted) {
    std::cerr << "solver abort: " << r.error << "\n";
    return kSolverAbort;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multifluid PCCU / LD PCCU / Ai-WENO solver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a configured simulation");
  std::string config_path, out_dir, scheme;
  int nx = 0, ny = 0;
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--scheme", scheme, "pccu, ldpccu or aiweno");
  auto* nx_opt = run->add_option("--nx", nx, "cells in x");
  run->add_option("--ny", ny, "cells in y")->needs(nx_opt);

  auto* list = app.add_subcommand("list-problems", "print the problem catalog");

  auto* ref = app.add_subcommand("reference", "fine-grid PCCU reference run");
  std::string ref_problem, ref_out = "out";
  ref->add_option("--problem", ref_problem)->required();
  ref->add_option("--out", ref_out);

  auto* conv = app.add_subcommand("convergence", "grid refinement study");
  std::string conv_problem = "smooth", conv_scheme = "ldpccu";
  int levels = 3, n0 = 0;
  conv->add_option("--problem", conv_problem);
  conv->add_option("--levels", levels)->check(CLI::Range(2, 12));
  conv->add_option("--scheme", conv_scheme);
  conv->add_option("--n0", n0, "coarsest resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*list) {
      for (const auto& name : mfluid::problem_names()) {
        const auto p = mfluid::build_problem(name);
        std::printf("%-4s %dD  t_final=%-8g N=%d%s  %s\n", name.c_str(), p.dim, p.t_final,
                    p.n[0], p.dim == 2 ? ("x" + std::to_string(p.n[1])).c_str() : "",
                    p.description.c_str());
      }
      return kOk;
    }
    if (*run) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read config " << config_path << "\n";
        return kConfigError;
      }
      std::stringstream text;
      text << in.rdbuf();
      auto cfg = mfluid::parse_config(text.str());
      if (!out_dir.empty()) cfg.out = out_dir;
      if (!scheme.empty()) {
        try {
          cfg.scheme = mfluid::parse_scheme(scheme);
        } catch (const std::invalid_argument& e) {
          throw mfluid::ConfigError(e.what());
        }
      }
      if (nx > 0) cfg.nx = nx;
      if (ny > 0) cfg.ny = ny;
      return finish(mfluid::run(cfg, std::cout));
    }
    if (*ref) {
      mfluid::RunConfig cfg;
      cfg.problem = ref_problem;
      cfg.reference = true;
      cfg.out = ref_out;
      return finish(mfluid::run(cfg, std::cout));
    }
    if (*conv) {
      const auto s = mfluid::parse_scheme(conv_scheme);
      const auto p = mfluid::build_problem(conv_problem);
      std::vector<int> ns{n0 > 0 ? n0 : p.n[0]};
      for (int k = 1; k < levels; ++k) ns.push_back(2 * ns.back());
      const auto rows = mfluid::convergence_study(conv_problem, s, ns, s == mfluid::Scheme::aiweno);
      std::printf("%8s %14s %8s\n", "N", "L1(rho)", "order");
      for (const auto& r : rows) std::printf("%8d %14.6e %8.3f\n", r.n, r.l1, r.order);
      return kOk;
    }
  } catch (const mfluid::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const mfluid::StateError& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return kSolverAbort;
  }
  return kOk;
}
