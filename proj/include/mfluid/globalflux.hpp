#pragma once

#include <algorithm>
#include <span>

#include "core.hpp"

namespace mfluid {

// Physical flux in direction dir.
template <int Dim>
Vector<Dim> physical_flux(const Primitive<Dim>& V, const Conserved<Dim>& U,
                          int dir) {
  const double un = V.vel(dir);
  Vector<Dim> F;
  F[kRho] = U.rho() * un;
  for (int d = 0; d < Dim; ++d) F[kVel + d] = U.mom(d) * un;
  F[kVel + dir] += V.p();
  F[kEnergy<Dim>] = un * (U.energy() + V.p());
  F[kGamma<Dim>] = un * V.Gamma();
  F[kPi<Dim>] = un * V.Pi();
  return F;
}

template <int Dim>
Vector<Dim> physical_flux(const Conserved<Dim>& U, int dir) {
  return physical_flux(primitive_from_conserved(U), U, dir);
}

// Nonconservative source over the cell between two interfaces. Arguments
// are the values on the cell side of its right (j+1/2, minus) and left
// (j-1/2, plus) interfaces.
template <int Dim>
Vector<Dim> cell_source(double u_right_minus, double u_left_plus,
                        double G_right_minus, double G_left_plus,
                        double P_right_minus, double P_left_plus) {
  Vector<Dim> B;
  const double du = u_right_minus - u_left_plus;
  B[kGamma<Dim>] = 0.5 * (G_right_minus + G_left_plus) * du;
  B[kPi<Dim>] = 0.5 * (P_right_minus + P_left_plus) * du;
  return B;
}

// Source concentrated at the interface jump along a straight path.
template <int Dim>
Vector<Dim> path_source(const Primitive<Dim>& Vm, const Primitive<Dim>& Vp,
                        int dir) {
  Vector<Dim> B;
  const double du = Vp.vel(dir) - Vm.vel(dir);
  B[kGamma<Dim>] = 0.5 * (Vp.Gamma() + Vm.Gamma()) * du;
  B[kPi<Dim>] = 0.5 * (Vp.Pi() + Vm.Pi()) * du;
  return B;
}

// K = F - R with R accumulated from the first interface of the line.
// b_cell[k] is the source of the cell between interfaces k and k+1.
template <int Dim>
void accumulate_global_flux(std::span<const Vector<Dim>> f_minus,
                            std::span<const Vector<Dim>> f_plus,
                            std::span<const Vector<Dim>> b_cell,
                            std::span<const Vector<Dim>> b_path,
                            std::span<Vector<Dim>> k_minus,
                            std::span<Vector<Dim>> k_plus) {
  const std::size_t m = f_minus.size();
  if (m == 0) return;
  Vector<Dim> r_minus{};
  Vector<Dim> r_plus = b_path[0];
  k_minus[0] = f_minus[0] - r_minus;
  k_plus[0] = f_plus[0] - r_plus;
  for (std::size_t k = 1; k < m; ++k) {
    r_minus = r_plus + b_cell[k - 1];
    r_plus = r_minus + b_path[k];
    k_minus[k] = f_minus[k] - r_minus;
    k_plus[k] = f_plus[k] - r_plus;
  }
}

// Same quantity accumulated directly on K. Each increment of the Gamma and
// Pi components is written in product form, so a line with uniform Gamma
// and Pi gets identical K values at every interface.
template <int Dim>
void global_fluxes(std::span<const Primitive<Dim>> v_minus,
                   std::span<const Primitive<Dim>> v_plus,
                   std::span<const Vector<Dim>> f_minus,
                   std::span<const Vector<Dim>> f_plus, int dir,
                   std::span<Vector<Dim>> k_minus,
                   std::span<Vector<Dim>> k_plus) {
  constexpr int iG = kGamma<Dim>, iP = kPi<Dim>;
  const std::size_t m = f_minus.size();
  for (std::size_t k = 0; k < m; ++k) {
    k_minus[k] = f_minus[k];
    k_plus[k] = f_plus[k];
  }
  if (m == 0) return;
  auto path = [&](std::size_t k) {
    const double us = v_plus[k].vel(dir) + v_minus[k].vel(dir);
    k_plus[k][iG] =
        k_minus[k][iG] + 0.5 * (v_plus[k].Gamma() - v_minus[k].Gamma()) * us;
    k_plus[k][iP] = k_minus[k][iP] + 0.5 * (v_plus[k].Pi() - v_minus[k].Pi()) * us;
  };
  path(0);
  for (std::size_t k = 1; k < m; ++k) {
    const double us = v_minus[k].vel(dir) + v_plus[k - 1].vel(dir);
    k_minus[k][iG] = k_plus[k - 1][iG] +
                     0.5 * (v_minus[k].Gamma() - v_plus[k - 1].Gamma()) * us;
    k_minus[k][iP] =
        k_plus[k - 1][iP] + 0.5 * (v_minus[k].Pi() - v_plus[k - 1].Pi()) * us;
    path(k);
  }
}

struct Speeds {
  double minus;
  double plus;
};

template <int Dim>
Speeds local_speeds(const Primitive<Dim>& Vm, const Primitive<Dim>& Vp, int dir) {
  const double cm = sound_speed(Vm), cp = sound_speed(Vp);
  const double um = Vm.vel(dir), up = Vp.vel(dir);
  return {std::min({um - cm, up - cp, 0.0}), std::max({um + cm, up + cp, 0.0})};
}

}  // namespace mfluid
