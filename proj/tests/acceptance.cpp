// acceptance checks; `acceptance N` runs one, no argument runs all
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <mfluid/mfluid.hpp>

using namespace mfluid;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SchemeConfig scheme_config(Scheme s, const std::vector<FluidSpec>& fluids) {
  SchemeConfig c;
  c.scheme = s;
  c.thresholds = InterfaceThresholds::from_fluids(fluids);
  return c;
}

Field<1> fill_1d(const Grid<1>& g, const std::function<Primitive<1>(double)>& f) {
  Field<1> U(g);
  for (int i = 0; i < g.n[0]; ++i)
    U.set(g.interior_index(i), conserved_from_primitive(f(g.center(0, i))));
  return U;
}

Primitive<1> wavy_air(double x) {
  const FluidSpec air{1.4, 0.0};
  return primitive_from_fluid<1>(1.0 + 0.5 * std::sin(2 * M_PI * x) + (x > 0.6 ? 0.8 : 0.0),
                                 {0.4 * std::cos(2 * M_PI * x) + (x < 0.3 ? 0.5 : 0.0)},
                                 1.0 + 0.3 * std::sin(4 * M_PI * x) + (x > 0.45 ? 1.2 : 0.0), air);
}

// single fluid: Gamma and Pi stay frozen
Outcome criterion1() {
  const auto g = make_grid(0.0, 1.0, 200, Boundary::free, Boundary::free);
  auto U = fill_1d(g, wavy_air);
  Solver<1> solver(g, scheme_config(Scheme::ldpccu, {{1.4, 0.0}}));
  double worst = 0.0;
  int evals = 0;
  solver.set_rhs_observer([&](const Field<1>&, const Field<1>& L) {
    ++evals;
    for (int i = 0; i < g.n[0]; ++i) {
      worst = std::max(worst, std::abs(L.component(kGamma<1>)[g.interior_index(i)]));
      worst = std::max(worst, std::abs(L.component(kPi<1>)[g.interior_index(i)]));
    }
  });
  double t = 0.0;
  for (int s = 0; s < 100; ++s) t += solver.step(U, t, 1e9);
  return {worst <= 1e-13 && evals == 300,
          fmt("max |dGamma/dt|,|dPi/dt| = %.3g", worst) + " over " + std::to_string(evals) +
              " rhs evaluations"};
}

// isolated material interface keeps u and p
Outcome criterion2() {
  const FluidSpec a{1.4, 0.0}, b{4.4, 1.0};
  double worst = 0.0;
  for (TimeStepper kind : {TimeStepper::forward_euler, TimeStepper::ssprk3}) {
    const auto g = make_grid(0.0, 1.0, 200, Boundary::free, Boundary::free);
    auto U = fill_1d(g, [&](double x) {
      return x < 0.3 ? primitive_from_fluid<1>(1.0, {0.5}, 1.0, a)
                     : primitive_from_fluid<1>(10.0, {0.5}, 1.0, b);
    });
    Solver<1> solver(g, scheme_config(Scheme::ldpccu, {a, b}));
    double t = 0.0;
    for (int s = 0; s < 200; ++s) t += solver.step(U, t, 1e9, kind);
    for (int i = 0; i < g.n[0]; ++i) {
      const auto V = primitive_from_conserved(U.get(g.interior_index(i)));
      worst = std::max({worst, std::abs(V.vel(0) - 0.5), std::abs(V.p() - 1.0)});
    }

    const auto g2 = make_grid(0.0, 1.0, 0.0, 0.05, 200, 10,
                              {Boundary::free, Boundary::free, Boundary::free, Boundary::free});
    Field<2> U2(g2);
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 200; ++i) {
        const double x = g2.center(0, i);
        U2.set(g2.interior_index(i, j),
               conserved_from_primitive(x < 0.3 ? primitive_from_fluid<2>(1.0, {0.5, 0.0}, 1.0, a)
                                                : primitive_from_fluid<2>(10.0, {0.5, 0.0}, 1.0, b)));
      }
    Solver<2> s2(g2, scheme_config(Scheme::ldpccu, {a, b}));
    t = 0.0;
    for (int s = 0; s < 200; ++s) t += s2.step(U2, t, 1e9, kind);
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 200; ++i) {
        const auto V = primitive_from_conserved(U2.get(g2.interior_index(i, j)));
        worst = std::max({worst, std::abs(V.vel(0) - 0.5), std::abs(V.vel(1)),
                          std::abs(V.p() - 1.0)});
      }
  }
  return {worst <= 1e-11, fmt("max |u-0.5|,|v|,|p-1| = %.3g (Euler, SSP-RK3, 1-D, 2-D)", worst)};
}

// component sums on a periodic domain
Outcome criterion3() {
  const auto g = make_grid(0.0, 1.0, 200, Boundary::periodic, Boundary::periodic);
  auto U = fill_1d(g, wavy_air);
  Solver<1> solver(g, scheme_config(Scheme::ldpccu, {{1.4, 0.0}}));
  auto sums = [&](std::array<double, 5>& s, std::array<double, 5>& scale) {
    for (int c = 0; c < 5; ++c) {
      s[c] = scale[c] = 0.0;
      for (int i = 0; i < g.n[0]; ++i) {
        const double v = U.component(c)[g.interior_index(i)];
        s[c] += v;
        scale[c] += std::abs(v);
      }
    }
  };
  std::array<double, 5> prev, now, scale;
  sums(prev, scale);
  double worst = 0.0, t = 0.0;
  for (int s = 0; s < 500; ++s) {
    t += solver.step(U, t, 1e9);
    sums(now, scale);
    for (int c = 0; c < 5; ++c) worst = std::max(worst, std::abs(now[c] - prev[c]) / scale[c]);
    prev = now;
  }
  return {worst <= 1e-12, fmt("max relative drift per step = %.3g", worst)};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  const auto ld = convergence_study("smooth", Scheme::ldpccu, {100, 200, 400}, false);
  const auto hw = convergence_study("smooth", Scheme::aiweno, {50, 100, 200}, true);
  const double secs = seconds_since(t0);
  const double o1 = std::min(ld[1].order, ld[2].order);
  const double o2 = std::min(hw[1].order, hw[2].order);
  std::string d = "LD PCCU orders " + fmt("%.3f", ld[1].order) + fmt(", %.3f", ld[2].order) +
                  "; Ai-WENO orders " + fmt("%.3f", hw[1].order) + fmt(", %.3f", hw[2].order) +
                  fmt("; %.1f s", secs);
  return {o1 >= 1.8 && o2 >= 4.5 && secs < 120.0, d};
}

template <int Dim>
Field<Dim> run_plan(const RunPlan& plan, int* steps = nullptr) {
  Progress prog;
  auto U = simulate<Dim>(plan, prog, nullptr);
  if (steps) *steps = prog.steps;
  return U;
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  RunConfig ref;
  ref.problem = "ex1";
  ref.reference = true;
  const auto ref_plan = plan_run(ref);
  const auto fine = make_snapshot(run_plan<1>(ref_plan), ref_plan.t_final);
  double err[3];
  const Scheme order[3] = {Scheme::aiweno, Scheme::ldpccu, Scheme::pccu};
  for (int k = 0; k < 3; ++k) {
    RunConfig c;
    c.problem = "ex1";
    c.scheme = order[k];
    const auto plan = plan_run(c);
    err[k] = l1_error(make_snapshot(run_plan<1>(plan), plan.t_final), fine).at("rho");
  }
  const double secs = seconds_since(t0);
  const bool ok = err[0] <= 0.95 * err[1] && err[1] <= 0.95 * err[2] && secs < 180.0;
  return {ok, fmt("L1(rho): aiweno %.5g", err[0]) + fmt(", ldpccu %.5g", err[1]) +
                  fmt(", pccu %.5g", err[2]) + fmt("; %.1f s", secs)};
}

Outcome criterion6() {
  double w_err = 0.0, quad = 0.0, norm = 0.0, range = 0.0;
  const double flat[5] = {2.0, 2.0, 2.0, 2.0, 2.0};
  const auto r = aiweno_left(flat);
  w_err = std::max({std::abs(r.weights[0] - 1.0 / 16.0), std::abs(r.weights[1] - 5.0 / 8.0),
                    std::abs(r.weights[2] - 5.0 / 16.0)});
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = 4 * u(rng) - 2, b = 4 * u(rng) - 2, c = 4 * u(rng) - 2, x0 = 10 * u(rng) - 5;
    std::array<double, 6> w;
    for (int m = 0; m < 6; ++m) {
      const double x = x0 + m;
      w[m] = a * x * x + b * x + c;
    }
    const double xi = x0 + 2.5, exact = a * xi * xi + b * xi + c;
    const auto q = aiweno_interpolate(std::span<const double, 6>(w));
    const double s = std::max(1.0, std::abs(exact));
    quad = std::max({quad, std::abs(q.minus - exact) / s, std::abs(q.plus - exact) / s});

    double v[5];
    for (double& x : v) x = 10 * u(rng) - 5;
    const auto wr = aiweno_left(v);
    norm = std::max(norm, std::abs(wr.weights[0] + wr.weights[1] + wr.weights[2] - 1.0));

    std::array<double, 6> mono;
    mono[0] = u(rng);
    for (int m = 1; m < 6; ++m) mono[m] = mono[m - 1] + std::pow(u(rng), 4.0);
    const auto mr = aiweno_interpolate(std::span<const double, 6>(mono));
    for (double val : {mr.minus, mr.plus})
      range = std::max({range, mono[0] - val, val - mono[5]});
  }
  const bool ok = w_err <= 1e-15 && quad <= 1e-12 && norm == 0.0 && range <= 1e-12;
  return {ok, fmt("weights %.2g", w_err) + fmt(", quadratic %.2g", quad) +
                  fmt(", normalization %.2g", norm) + fmt(", range excess %.2g", range)};
}

template <int Dim>
Primitive<Dim> random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> r(1e-3, 1e3), u(-10.0, 10.0), g(1.05, 7.5),
      lp(-2.0, 4.0), coin(0.0, 1.0);
  const double pinf = coin(rng) < 0.5 ? 0.0 : std::pow(10.0, lp(rng));
  const double p = std::pow(10.0, lp(rng)) - 0.5 * pinf;
  std::array<double, Dim> vel{};
  for (auto& x : vel) x = u(rng);
  return primitive_from_fluid<Dim>(r(rng), vel, p, {g(rng), pinf});
}

template <int Dim>
std::pair<double, double> lcd_family(int dir, unsigned seed) {
  constexpr std::size_t N = kNumVars<Dim>;
  std::mt19937 rng(seed);
  double wid = 0.0, wdiag = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto b = LcdBasis<Dim>::make(random_state<Dim>(rng), random_state<Dim>(rng), dir);
    if (!b) return {INFINITY, INFINITY};
    const auto R = b->R(), L = b->Rinv();
    typename LcdBasis<Dim>::Matrix A{};
    const int n = kVel + dir, P = kEnergy<Dim>;
    for (std::size_t i = 0; i < N; ++i) A[i][i] = b->u();
    A[kRho][n] = b->rho();
    A[n][P] = 1.0 / b->rho();
    A[P][n] = b->rho() * b->c() * b->c();
    const auto lam = b->eigenvalues();
    const double s = std::abs(b->u()) + b->c();
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        long double id = 0.0L, d = 0.0L;
        for (std::size_t m = 0; m < N; ++m) {
          id += static_cast<long double>(R[i][m]) * L[m][j];
          for (std::size_t q = 0; q < N; ++q) d += static_cast<long double>(L[i][m]) * A[m][q] * R[q][j];
        }
        wid = std::max(wid, static_cast<double>(std::abs(id - (i == j ? 1.0L : 0.0L))));
        wdiag = std::max(wdiag, static_cast<double>(std::abs(d - (i == j ? lam[i] : 0.0L))) / s);
      }
  }
  return {wid, wdiag};
}

Outcome criterion7() {
  const auto a = lcd_family<1>(0, 101);
  const auto b = lcd_family<2>(0, 102);
  const auto c = lcd_family<2>(1, 103);
  const double id = std::max({a.first, b.first, c.first});
  const double dg = std::max({a.second, b.second, c.second});
  return {id <= 1e-12 && dg <= 1e-12,
          fmt("max |R Rinv - I| = %.3g", id) + fmt(", max off-diagonal/(|u|+c) = %.3g", dg)};
}

// 2-D Ex1 constant in y against the 1-D run
Outcome criterion8() {
  const auto p = build_problem("ex1");
  RunConfig c;
  c.problem = "ex1";
  const auto plan = plan_run(c);
  const auto g1 = problem_grid<1>(p, p.n, 2);
  const auto g2 = make_grid(p.lo[0], p.hi[0], 0.0, 0.04, p.n[0], 4,
                            {p.bc[0], p.bc[1], Boundary::solid_wall, Boundary::solid_wall});
  auto U1 = initialize(p, g1);
  Field<2> U2(g2);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < p.n[0]; ++i) {
      const auto V = primitive_from_conserved(U1.get(g1.interior_index(i)));
      U2.set(g2.interior_index(i, j),
             conserved_from_primitive(make_primitive(V.rho(), V.vel(0), 0.0, V.p(), V.Gamma(), V.Pi())));
    }
  Solver<1> s1(g1, plan.scheme);
  Solver<2> s2(g2, plan.scheme);
  double t = 0.0;
  for (int s = 0; s < 50; ++s) {
    const double dt = s1.step(U1, t, 1e9);
    s2.step(U2, t, 1e9, TimeStepper::ssprk3, dt);
    t += dt;
  }
  const int map[5] = {0, 1, 3, 4, 5};
  double worst = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < p.n[0]; ++i) {
      for (int k = 0; k < 5; ++k) {
        const double a = U1.component(k)[g1.interior_index(i)];
        const double b = U2.component(map[k])[g2.interior_index(i, j)];
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
      }
      worst = std::max(worst, std::abs(U2.component(2)[g2.interior_index(i, j)]));
    }
  return {worst <= 1e-13, fmt("max row deviation = %.3g after 50 steps", worst)};
}

Outcome criterion9() {
  const auto t0 = Clock::now();
  RunConfig c;
  c.problem = "ex4";
  c.nx = 400;
  c.ny = 100;
  c.t_final = 0.5;
  const auto plan = plan_run(c);
  int steps = 0;
  const auto U = run_plan<2>(plan, &steps);
  const auto& g = U.grid();
  double worst = 0.0;
  for (int j = 0; j < g.n[1] / 2; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      const auto a = U.get(g.interior_index(i, j));
      const auto b = U.get(g.interior_index(i, g.n[1] - 1 - j));
      for (std::size_t k = 0; k < kNumVars<2>; ++k) {
        const double sb = k == static_cast<std::size_t>(kVel + 1) ? -b.v[k] : b.v[k];
        worst = std::max(worst, std::abs(a.v[k] - sb) / std::max(1.0, std::abs(a.v[k])));
      }
    }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 300.0,
          fmt("max asymmetry = %.3g", worst) + " after " + std::to_string(steps) +
              fmt(" steps; %.1f s", secs)};
}

Outcome criterion10() {
  bool ok = true;
  std::string d;
  for (const char* name : {"ex2", "ex3", "ex6", "ex7"}) {
    const auto t0 = Clock::now();
    RunConfig c;
    c.problem = name;
    c.scheme = Scheme::aiweno;
    const auto p = build_problem(name);
    c.nx = p.n[0] / 2;
    if (p.dim == 2) c.ny = p.n[1] / 2;
    const auto plan = plan_run(c);
    Progress prog;
    std::string status = "ok";
    try {
      if (p.dim == 1)
        simulate<1>(plan, prog, nullptr);
      else
        simulate<2>(plan, prog, nullptr);
    } catch (const StateError& e) {
      status = std::string("abort: ") + e.what();
    }
    const double secs = seconds_since(t0);
    const bool pass = status == "ok" && secs < 600.0;
    ok = ok && pass;
    if (!d.empty()) d += "; ";
    d += std::string(name) + " " + std::to_string(plan.n[0]) +
         (p.dim == 2 ? "x" + std::to_string(plan.n[1]) : "") +
         (plan.scheme.hybrid ? " hybrid" : "") + " " + status + " t=" +
         fmt("%.6g", prog.time) + " steps=" + std::to_string(prog.steps) + fmt(" %.1f s", secs);
    std::fflush(stdout);
  }
  return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Outcome()> checks[] = {criterion1, criterion2, criterion3, criterion4,
                                             criterion5, criterion6, criterion7, criterion8,
                                             criterion9, criterion10};
  int lo = 1, hi = 10;
  if (argc > 1) {
    lo = hi = std::atoi(argv[1]);
    if (lo < 1 || lo > 10) {
      std::fprintf(stderr, "usage: %s [1-10]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (int k = lo; k <= hi; ++k) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = checks[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s  [%.1f s]\n", k, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures ? 1 : 0;
}
