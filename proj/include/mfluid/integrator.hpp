#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "sweep.hpp"

namespace mfluid {

namespace detail {

// Fill one ghost strip along direction d; `at(i)` maps a padded coordinate
// along d to a linear index for the line being filled.
template <int Dim, class At>
void fill_line(Field<Dim>& f, int d, At at) {
  const auto& g = f.grid();
  const int G = g.ghost, N = g.n[d];
  const std::size_t normal = static_cast<std::size_t>(kVel + d);
  for (int side = 0; side < 2; ++side) {
    const Boundary bc = g.bc[d][side];
    for (int m = 0; m < G; ++m) {
      const int x = side == 0 ? -1 - m : N + m;
      int src = 0;
      bool flip = false;
      switch (bc) {
        case Boundary::free: src = std::clamp(x, 0, N - 1); break;
        case Boundary::periodic: src = ((x % N) + N) % N; break;
        case Boundary::solid_wall: {
          // repeated reflection when the line is shorter than the ghost layer
          const int y = ((x % (2 * N)) + 2 * N) % (2 * N);
          flip = y >= N;
          src = flip ? 2 * N - 1 - y : y;
          break;
        }
      }
      const std::size_t gi = at(x + G), si = at(src + G);
      for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
        double v = f.component(c)[si];
        if (flip && c == normal) v = -v;
        f.component(c)[gi] = v;
      }
    }
  }
}

}  // namespace detail

template <int Dim>
void apply_boundary(Field<Dim>& f) {
  const auto& g = f.grid();
  if constexpr (Dim == 1) {
    detail::fill_line<1>(f, 0, [&](int i) { return g.index(i); });
  } else {
    for (int i = g.ghost; i < g.ghost + g.n[0]; ++i)
      detail::fill_line<2>(f, 1, [&](int j) { return g.index(i, j); });
    for (int j = 0; j < g.padded(1); ++j)
      detail::fill_line<2>(f, 0, [&](int i) { return g.index(i, j); });
  }
}

struct SpeedBound {
  std::array<double, 2> max{0.0, 0.0};
};

template <int Dim>
double cfl_timestep(const SpeedBound& s, const Grid<Dim>& g, double cfl,
                    double remaining) {
  double rate = 0.0;
  for (int d = 0; d < Dim; ++d) rate += s.max[d] / g.spacing(d);
  if (!(rate > 0.0)) return remaining;
  return std::min(cfl / rate, remaining);
}

enum class TimeStepper { forward_euler, ssprk3 };

// Stage k: U_k = a*U_0 + b*(U_{k-1} + c*dt*L(U_{k-1}))
struct RkStage {
  double a, b, c;
};
inline constexpr std::array<RkStage, 3> kSsprk3{{{0.0, 1.0, 1.0},
                                                 {0.75, 0.25, 1.0},
                                                 {1.0 / 3.0, 2.0 / 3.0, 1.0}}};

// Same stages on any vector-like state.
template <class State, class Rhs>
State ssprk3_step(const State& u0, double dt, Rhs&& rhs) {
  State u = u0;
  for (const auto& s : kSsprk3) u = s.a * u0 + s.b * (u + s.c * dt * rhs(u));
  return u;
}

template <int Dim>
class Solver {
 public:
  Solver(const Grid<Dim>& grid, const SchemeConfig& cfg)
      : grid_(grid), cfg_(cfg), sweep_(cfg) {
    cfg_.validate();
    if (grid_.ghost < ghost_width(cfg_.scheme)) {
      std::ostringstream msg;
      msg << "scheme " << to_string(cfg_.scheme) << " needs ghost width "
          << ghost_width(cfg_.scheme) << ", grid has " << grid_.ghost;
      throw std::invalid_argument(msg.str());
    }
    prim_.resize(grid_.total());
    forced_.assign(grid_.total(), 0);
    forced_age_.assign(grid_.total(), 0);
    int longest = 0;
    for (int d = 0; d < Dim; ++d) longest = std::max(longest, grid_.padded(d));
    column_.resize(longest);
    forced_column_.resize(longest);
    div_.resize(longest);
    if constexpr (Dim == 2) {
      xdiv_.resize(grid_.total());
      ydiv_.resize(grid_.total());
    }
    dirty_row_.assign(Dim == 2 ? grid_.n[1] : 1, 0);
    dirty_col_.assign(grid_.n[0], 0);
  }

  const Grid<Dim>& grid() const { return grid_; }
  const SchemeConfig& config() const { return cfg_; }

  // multiplies every CFL step
  void set_dt_factor(double f) { dt_factor_ = f; }
  // called with the state and its derivative after every rhs evaluation
  void set_rhs_observer(std::function<void(const Field<Dim>&, const Field<Dim>&)> f) {
    observer_ = std::move(f);
  }

  // dU/dt for the interior cells; ghosts of U are refreshed first
  SpeedBound rhs(Field<Dim>& U, Field<Dim>& out) {
    apply_boundary(U);
    const auto& g = grid_;
    const int G = g.ghost;
    for (std::size_t idx = 0; idx < g.total(); ++idx) {
      std::array<int, 2> cell{-1, -1};
      if constexpr (Dim == 1) {
        cell[0] = static_cast<int>(idx) - G;
      } else {
        cell[0] = static_cast<int>(idx % g.padded(0)) - G;
        cell[1] = static_cast<int>(idx / g.padded(0)) - G;
      }
      prim_[idx] = primitive_from_conserved(U.get(idx), cell);
    }
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c)
      std::fill(out.component(c).begin(), out.component(c).end(), 0.0);

    SpeedBound sb;
    if constexpr (Dim == 1) {
      sb.max[0] = sweep_.run(prim_, G, 0, g.spacing(0),
                             std::span(div_.data(), g.n[0]), -1, forced_view(0, g.padded(0)));
      for (int i = 0; i < g.n[0]; ++i)
        for (std::size_t c = 0; c < kNumVars<1>; ++c)
          out.component(c)[i + G] -= div_[i][c];
    } else {
      for (int j = 0; j < g.n[1]; ++j) sb.max[0] = std::max(sb.max[0], sweep_row(j));
      for (int i = 0; i < g.n[0]; ++i) sb.max[1] = std::max(sb.max[1], sweep_column(i));
      assemble(out);
    }
    std::fill(dirty_row_.begin(), dirty_row_.end(), 0);
    std::fill(dirty_col_.begin(), dirty_col_.end(), 0);
    if (observer_) observer_(U, out);
    return sb;
  }

  // Same as rhs(U, out) right after rhs(U, out), redoing only the grid lines
  // whose fallback tags changed since.
  void refresh_rhs(Field<Dim>& U, Field<Dim>& out) {
    if constexpr (Dim == 1) {
      rhs(U, out);
    } else {
      const auto& g = grid_;
      for (int j = 0; j < g.n[1]; ++j)
        if (dirty_row_[j]) sweep_row(j);
      for (int i = 0; i < g.n[0]; ++i)
        if (dirty_col_[i]) sweep_column(i);
      assemble(out);
      if (observer_) observer_(U, out);
    }
    std::fill(dirty_row_.begin(), dirty_row_.end(), 0);
    std::fill(dirty_col_.begin(), dirty_col_.end(), 0);
  }

  // Advances U by one step no longer than t_stop - t and returns the step.
  double step(Field<Dim>& U, double t, double t_stop,
              TimeStepper kind = TimeStepper::ssprk3,
              std::optional<double> fixed_dt = std::nullopt) {
    ensure_buffers();
    age_forced();
    const SpeedBound sb = rhs(U, k_);
    double dt = fixed_dt ? *fixed_dt
                         : cfl_timestep(sb, grid_, cfg_.cfl * dt_factor_, t_stop - t);
    if (!fixed_dt && t + dt > t_stop) dt = t_stop - t;
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      std::ostringstream msg;
      msg << "non-positive time step " << dt << " at t=" << t;
      throw StateError(msg.str(), {-1, -1});
    }
    // a stage that leaves inadmissible cells is redone with the fifth-order
    // path switched off around them; false when that ran out of options
    Field<Dim>* bad = nullptr;
    auto stage = [&](Field<Dim>& src, double a, double b, double dtl, Field<Dim>& out) {
      for (int pass = 0;; ++pass) {
        combine(U, a, src, b, dtl, k_, out);
        const Retag r = force_around_bad_cells(out);
        if (r == Retag::clean) return true;
        if (r == Retag::stuck || pass == kMaxRedo) {
          bad = &out;
          return false;
        }
        refresh_rhs(src, k_);
      }
    };
    for (int attempt = 0;; ++attempt) {
      bool ok = true;
      if (kind == TimeStepper::forward_euler) {
        ok = stage(U, 0.0, 1.0, dt, u1_);
      } else {
        const auto& s = kSsprk3;
        ok = stage(U, s[0].a, s[0].b, s[0].b * s[0].c * dt, u1_);
        if (ok) {
          rhs(u1_, k_);
          ok = stage(u1_, s[1].a, s[1].b, s[1].b * s[1].c * dt, u2_);
        }
        if (ok) {
          rhs(u2_, k_);
          ok = stage(u2_, s[2].a, s[2].b, s[2].b * s[2].c * dt, u1_);
        }
      }
      if (ok || fixed_dt || attempt == kMaxHalvings) break;
      dt *= 0.5;
      bad = nullptr;
      rhs(U, k_);
    }
    // leaves U at the last admissible state
    if (bad) check_interior(*bad, t + dt);
    std::swap(U, u1_);
    check_interior(U, t + dt);
    return dt;
  }

 private:
  double sweep_row(int j) requires(Dim == 2) {
    const auto& g = grid_;
    const int G = g.ghost, nxp = g.padded(0);
    const std::span<const Primitive<2>> row(prim_.data() + g.index(0, j + G), nxp);
    return sweep_.run(row, G, 0, g.spacing(0),
                      std::span(xdiv_.data() + static_cast<std::size_t>(j) * g.n[0], g.n[0]),
                      j, forced_view(g.index(0, j + G), nxp));
  }

  double sweep_column(int i) requires(Dim == 2) {
    const auto& g = grid_;
    const int G = g.ghost, nyp = g.padded(1);
    for (int j = 0; j < nyp; ++j) column_[j] = prim_[g.index(i + G, j)];
    std::span<const std::uint8_t> fc;
    if (any_forced_) {
      for (int j = 0; j < nyp; ++j) forced_column_[j] = forced_[g.index(i + G, j)];
      fc = std::span<const std::uint8_t>(forced_column_.data(), nyp);
    }
    return sweep_.run(std::span<const Primitive<2>>(column_.data(), nyp), G, 1,
                      g.spacing(1),
                      std::span(ydiv_.data() + static_cast<std::size_t>(i) * g.n[1], g.n[1]),
                      i, fc);
  }

  // out = -(x part) - (y part) on the interior
  void assemble(Field<Dim>& out) requires(Dim == 2) {
    const auto& g = grid_;
    const int G = g.ghost;
    for (std::size_t c = 0; c < kNumVars<2>; ++c) {
      auto& o = out.component(c);
      for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i)
          o[g.index(i + G, j + G)] =
              (0.0 - xdiv_[static_cast<std::size_t>(j) * g.n[0] + i][c]) -
              ydiv_[static_cast<std::size_t>(i) * g.n[1] + j][c];
    }
  }

  void ensure_buffers() {
    if (k_.size() != grid_.total()) {
      k_ = Field<Dim>(grid_);
      u1_ = Field<Dim>(grid_);
      u2_ = Field<Dim>(grid_);
    }
  }

  // out = a*A + b*(B + dt*L) on interior cells; ghosts are refilled later
  void combine(const Field<Dim>& A, double a, const Field<Dim>& B, double b,
               double dtl, const Field<Dim>& L, Field<Dim>& out) {
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
      const double* pa = A.component(c).data();
      const double* pb = B.component(c).data();
      const double* pl = L.component(c).data();
      double* po = out.component(c).data();
      const std::size_t n = A.size();
      if (b == 0.0) {
        for (std::size_t i = 0; i < n; ++i) po[i] = a * pa[i] + dtl * pl[i];
      } else {
        for (std::size_t i = 0; i < n; ++i)
          po[i] = a * pa[i] + (b * pb[i] + dtl * pl[i]);
      }
    }
  }

  std::span<const std::uint8_t> forced_view(std::size_t start, int len) const {
    if (!any_forced_) return {};
    return std::span<const std::uint8_t>(forced_.data() + start, len);
  }

  // tags survive kHoldSteps steps after they last fired
  void age_forced() {
    if (!any_forced_) return;
    bool left = false;
    for (std::size_t q = 0; q < forced_.size(); ++q) {
      if (!forced_[q]) continue;
      if (forced_age_[q] > 0) {
        --forced_age_[q];
        left = true;
      } else {
        forced_[q] = 0;
      }
    }
    any_forced_ = left;
  }

  static bool admissible(const Conserved<Dim>& U) {
    if (!(U.rho() > 0.0) || !(U.Gamma() > 0.0)) return false;
    double m2 = 0.0;
    for (int d = 0; d < Dim; ++d) m2 += U.mom(d) * U.mom(d);
    const double gp = U.energy() - 0.5 * m2 / U.rho() - U.Pi();  // Gamma p
    return std::isfinite(gp) && gp + gp / U.Gamma() + U.Pi() > 0.0;
  }

  // Raises the fallback level (1 second order, 2 first order) around every
  // inadmissible interior cell. True when something changed.
  enum class Retag { clean, retagged, stuck };

  Retag force_around_bad_cells(const Field<Dim>& V) {
    if (cfg_.scheme != Scheme::aiweno) return Retag::clean;
    const auto& g = grid_;
    const int G = g.ghost, r = 4;
    const int ny = Dim == 2 ? g.n[Dim - 1] : 1;
    bool added = false, stuck = false;
    // levels are read before any block is written
    bad_.clear();
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < g.n[0]; ++i) {
        if (admissible(V.get(g.interior_index(i, j)))) continue;
        const int level = forced_[g.interior_index(i, j)] + 1;
        if (level > 2) {
          stuck = true;
          continue;
        }
        bad_.push_back({i, j, level});
      }
    }
    for (const auto [i, j, level] : bad_) {
      const int j0 = Dim == 2 ? std::max(0, j + G - r) : 0;
      const int j1 = Dim == 2 ? std::min(g.padded(Dim - 1) - 1, j + G + r) : 0;
      for (int jj = j0; jj <= j1; ++jj) {
        for (int ii = std::max(0, i + G - r); ii <= std::min(g.padded(0) - 1, i + G + r); ++ii) {
          const std::size_t q = g.index(ii, jj);
          forced_age_[q] = kHoldSteps;
          auto& f = forced_[q];
          if (f < level) {
            f = static_cast<std::uint8_t>(level);
            added = true;
            if (jj >= G && jj < G + ny) dirty_row_[jj - G] = 1;
            if (ii >= G && ii < G + g.n[0]) dirty_col_[ii - G] = 1;
          }
        }
      }
    }
    any_forced_ = any_forced_ || added;
    if (added) return Retag::retagged;
    return stuck ? Retag::stuck : Retag::clean;
  }

  void check_interior(const Field<Dim>& U, double t) const {
    const auto& g = grid_;
    const int ny = Dim == 2 ? g.n[Dim - 1] : 1;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < g.n[0]; ++i) {
        const std::array<int, 2> cell{i, Dim == 2 ? j : -1};
        const auto V = primitive_from_conserved(U.get(g.interior_index(i, j)), cell);
        if (!is_admissible(V)) {
          std::ostringstream msg;
          msg << "inadmissible state at cell " << detail::cell_string(cell)
              << " after step to t=" << t << ": rho=" << V.rho()
              << " p=" << V.p() << " Gamma=" << V.Gamma() << " Pi=" << V.Pi();
          throw StateError(msg.str(), cell);
        }
      }
    }
  }

  Grid<Dim> grid_;
  SchemeConfig cfg_;
  LineSweep<Dim> sweep_;
  double dt_factor_ = 1.0;
  static constexpr int kMaxHalvings = 4;
  static constexpr int kMaxRedo = 4;
  static constexpr std::uint16_t kHoldSteps = 20;
  std::function<void(const Field<Dim>&, const Field<Dim>&)> observer_;
  std::vector<Primitive<Dim>> prim_, column_;
  std::vector<std::uint8_t> forced_, forced_column_;
  std::vector<std::uint16_t> forced_age_;
  std::vector<Vector<Dim>> xdiv_, ydiv_;
  std::vector<std::uint8_t> dirty_row_, dirty_col_;
  std::vector<std::array<int, 3>> bad_;
  bool any_forced_ = false;
  std::vector<Vector<Dim>> div_;
  Field<Dim> k_, u1_, u2_;
};

}  // namespace mfluid
