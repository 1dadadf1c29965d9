#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "recon.hpp"

namespace mfluid {

// rho, u, v, p
using RegionState = std::array<double, 4>;

struct Region {
  std::function<bool(double, double)> inside;
  std::function<RegionState(double, double)> state;
  int fluid = 0;
};

struct ProblemSpec {
  std::string name;
  std::string description;
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> n{1, 1};
  std::array<int, 2> n_ref{1, 1};
  // left, right, bottom, top
  std::array<Boundary, 4> bc{Boundary::free, Boundary::free, Boundary::free,
                             Boundary::free};
  std::vector<FluidSpec> fluids;
  // fluid pairs that can touch; empty means all pairs
  std::vector<std::pair<int, int>> contacts;
  // first region containing the cell center wins
  std::vector<Region> regions;
  double t_final = 0.0;
  std::vector<double> snapshots;
  bool hybrid_default = false;
  // closed-form solution (x, y, t), when one exists
  std::function<RegionState(double, double, double)> exact;

  InterfaceThresholds thresholds() const {
    return InterfaceThresholds::from_fluids(fluids, contacts);
  }
};

namespace detail {
inline Region constant(std::function<bool(double, double)> inside, RegionState s,
                       int fluid) {
  return {std::move(inside), [s](double, double) { return s; }, fluid};
}
inline bool everywhere(double, double) { return true; }

inline ProblemSpec bubble_2d(const std::string& name, const std::string& desc,
                             double rho_a, FluidSpec fluid_a) {
  ProblemSpec p;
  p.name = name;
  p.description = desc;
  p.dim = 2;
  p.lo = {-3.0, -0.5};
  p.hi = {1.0, 0.5};
  p.n = {2000, 500};
  p.n_ref = p.n;
  p.bc = {Boundary::free, Boundary::free, Boundary::solid_wall, Boundary::solid_wall};
  p.fluids = {fluid_a, {1.4, 0.0}};
  p.regions = {
      constant([](double x, double y) { return x * x + y * y < 0.0625; },
               {rho_a, 0.0, 0.0, 1.0}, 0),
      constant([](double x, double) { return x > 0.75; },
               {4.0 / 3.0, -0.3535, 0.0, 1.5}, 1),
      constant(everywhere, {1.0, 0.0, 0.0, 1.0}, 1)};
  p.t_final = 3.0;
  p.snapshots = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  return p;
}
}  // namespace detail

inline std::vector<std::string> problem_names() {
  return {"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7"};
}

inline ProblemSpec build_problem(const std::string& name) {
  using detail::constant;
  using detail::everywhere;
  ProblemSpec p;
  p.name = name;
  if (name == "ex1") {
    p.description = "1-D shock-bubble interaction";
    p.lo = {-1.0, 0.0};
    p.hi = {2.0, 0.0};
    p.n = {300, 1};
    p.n_ref = {6000, 1};
    p.bc = {Boundary::solid_wall, Boundary::solid_wall, Boundary::free, Boundary::free};
    p.fluids = {{5.0 / 3.0, 0.0}, {1.4, 0.0}};
    p.regions = {
        constant([](double x, double) { return std::abs(x) < 0.25; },
                 {13.1538, 0.0, 0.0, 1.0}, 0),
        constant([](double x, double) { return x > 0.75; },
                 {1.3333, -0.3535, 0.0, 1.5}, 1),
        constant(everywhere, {1.0, 0.0, 0.0, 1.0}, 1)};
    p.t_final = 3.0;
    p.snapshots = {3.0};
  } else if (name == "ex2") {
    p.description = "1-D gas-liquid system";
    p.lo = {0.0, 0.0};
    p.hi = {18.0, 0.0};
    p.n = {180, 1};
    p.n_ref = {7200, 1};
    p.fluids = {{1.4, 0.0}, {4.4, 6000.0}};
    p.regions = {
        constant([](double x, double) { return std::abs(x - 6.0) < 3.0; },
                 {0.05, 0.0, 0.0, 1.0}, 0),
        constant([](double x, double) { return x > 11.4; },
                 {1.325, -68.525, 0.0, 19153.0}, 1),
        constant(everywhere, {1.0, 0.0, 0.0, 1.0}, 1)};
    p.t_final = 0.045;
    p.snapshots = {0.045};
  } else if (name == "ex3") {
    p.description = "1-D water-air shock tube";
    p.lo = {0.0, 0.0};
    p.hi = {1.0, 0.0};
    p.n = {400, 1};
    p.n_ref = {6400, 1};
    p.fluids = {{4.4, 6e8}, {1.4, 0.0}};
    p.regions = {constant([](double x, double) { return x < 0.7; },
                          {1000.0, 0.0, 0.0, 1e9}, 0),
                 constant(everywhere, {50.0, 0.0, 0.0, 1e5}, 1)};
    p.t_final = 0.00025;
    p.snapshots = {0.00025};
  } else if (name == "ex4") {
    p = detail::bubble_2d(name, "2-D shock and light helium bubble", 4.0 / 29.0,
                          {5.0 / 3.0, 0.0});
  } else if (name == "ex5") {
    p = detail::bubble_2d(name, "2-D shock and heavy R22 bubble", 3.1538,
                          {1.249, 0.0});
  } else if (name == "ex6") {
    p.description = "2-D underwater explosion near a free surface";
    p.dim = 2;
    p.lo = {0.0, 0.0};
    p.hi = {10.0, 6.0};
    p.n = {800, 480};
    p.n_ref = p.n;
    p.bc = {Boundary::free, Boundary::free, Boundary::solid_wall, Boundary::free};
    // explosive products, air, water
    p.fluids = {{2.0, 0.0}, {1.4, 0.0}, {7.15, 3309.0}};
    p.contacts = {{0, 2}, {1, 2}};
    p.regions = {
        constant([](double x, double y) {
                   return (x - 5.0) * (x - 5.0) + (y - 2.0) * (y - 2.0) < 1.0;
                 },
                 {1.27, 0.0, 0.0, 8290.0}, 0),
        constant([](double, double y) { return y > 4.0; }, {0.02, 0.0, 0.0, 1.0}, 1),
        constant(everywhere, {1.0, 0.0, 0.0, 1.0}, 2)};
    p.t_final = 0.02;
    p.snapshots = {0.008, 0.014, 0.02};
    p.hybrid_default = true;
  } else if (name == "ex7") {
    p.description = "2-D shock in water hitting an air bubble";
    p.dim = 2;
    p.lo = {0.0, 0.0};
    p.hi = {12.0, 12.0};
    p.n = {800, 800};
    p.n_ref = p.n;
    p.bc = {Boundary::free, Boundary::free, Boundary::solid_wall, Boundary::solid_wall};
    p.fluids = {{1.4, 0.0}, {4.4, 6000.0}};
    p.regions = {
        constant([](double x, double y) {
                   return (x - 6.0) * (x - 6.0) + (y - 6.0) * (y - 6.0) < 9.0;
                 },
                 {0.0012, 0.0, 0.0, 1.0}, 0),
        constant([](double x, double) { return x > 11.4; },
                 {1.325, -68.525, 0.0, 19153.0}, 1),
        constant(everywhere, {1.0, 0.0, 0.0, 1.0}, 1)};
    p.t_final = 0.045;
    p.snapshots = {0.0204, 0.0305, 0.0368, 0.0405, 0.045};
    p.hybrid_default = true;
  } else if (name == "smooth") {
    p.description = "periodic density wave advected at unit speed";
    p.lo = {-1.0, 0.0};
    p.hi = {1.0, 0.0};
    p.n = {100, 1};
    p.n_ref = p.n;
    p.bc = {Boundary::periodic, Boundary::periodic, Boundary::free, Boundary::free};
    p.fluids = {{1.4, 0.0}};
    p.regions = {{everywhere,
                  [](double x, double) {
                    return RegionState{1.0 + 0.5 * std::sin(std::numbers::pi * x),
                                       1.0, 0.0, 1.0};
                  },
                  0}};
    p.t_final = 2.0;
    p.snapshots = {2.0};
    p.exact = [](double x, double, double t) {
      return RegionState{1.0 + 0.5 * std::sin(std::numbers::pi * (x - t)), 1.0, 0.0, 1.0};
    };
  } else {
    std::string list;
    for (const auto& n : problem_names()) list += " " + n;
    throw std::invalid_argument("unknown problem '" + name +
                                "'; available:" + list + " smooth");
  }
  return p;
}

template <int Dim>
Grid<Dim> problem_grid(const ProblemSpec& p, std::array<int, 2> n, int ghost) {
  if (p.dim != Dim)
    throw std::invalid_argument("problem " + p.name + " is " +
                                std::to_string(p.dim) + "-D");
  if constexpr (Dim == 1) {
    return make_grid(p.lo[0], p.hi[0], n[0], p.bc[0], p.bc[1], ghost);
  } else {
    return make_grid(p.lo[0], p.hi[0], p.lo[1], p.hi[1], n[0], n[1], p.bc, ghost);
  }
}

template <int Dim>
Primitive<Dim> sample_problem(const ProblemSpec& p, double x, double y) {
  for (const auto& r : p.regions) {
    if (!r.inside(x, y)) continue;
    const RegionState s = r.state(x, y);
    std::array<double, Dim> vel{};
    vel[0] = s[1];
    if constexpr (Dim == 2) vel[1] = s[2];
    return primitive_from_fluid<Dim>(s[0], vel, s[3], p.fluids.at(r.fluid));
  }
  throw std::logic_error("problem " + p.name + ": regions do not cover the domain");
}

// Point sampling of the region states at cell centers.
template <int Dim>
Field<Dim> initialize(const ProblemSpec& p, const Grid<Dim>& g) {
  Field<Dim> f(g);
  const int ny = Dim == 2 ? g.n[Dim - 1] : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.n[0]; ++i) {
      const double x = g.center(0, i);
      const double y = Dim == 2 ? g.center(Dim - 1, j) : 0.0;
      f.set(g.interior_index(i, j), conserved_from_primitive(sample_problem<Dim>(p, x, y)));
    }
  }
  return f;
}

}  // namespace mfluid
