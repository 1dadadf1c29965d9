#pragma once

#include <optional>

#include "core.hpp"
#include "recon.hpp"

namespace mfluid {

template <int Dim>
struct InterfaceFluxInput {
  Conserved<Dim> Um, Up;
  Primitive<Dim> Vm, Vp;
  Vector<Dim> Km, Kp;
  double am = 0.0;  // a^- <= 0
  double ap = 0.0;  // a^+ >= 0
};

// Central-upwind flux without anti-diffusion.
template <int Dim>
Vector<Dim> cu_flux(const InterfaceFluxInput<Dim>& in) {
  const double d = in.ap - in.am;
  Vector<Dim> F;
  for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
    F[c] = 0.5 * (in.Km[c] + in.Kp[c]) +
           (in.ap + in.am) / (2.0 * d) * (in.Km[c] - in.Kp[c]) +
           in.ap * in.am / d * (in.Up.v[c] - in.Um.v[c]);
  }
  return F;
}

template <int Dim>
struct IntermediateState {
  Vector<Dim> U{};
  double normal_velocity = 0.0;
  bool valid = false;
};

template <int Dim>
IntermediateState<Dim> intermediate_state(const InterfaceFluxInput<Dim>& in,
                                          int dir) {
  IntermediateState<Dim> s;
  const double inv = 1.0 / (in.ap - in.am);
  for (std::size_t c = 0; c < kNumVars<Dim>; ++c)
    s.U[c] = (in.ap * in.Up.v[c] - in.am * in.Um.v[c] - (in.Kp[c] - in.Km[c])) * inv;
  s.valid = s.U[kRho] > 0.0 && s.U[kGamma<Dim>] > 0.0 &&
            std::isfinite(s.U[kEnergy<Dim>]);
  s.normal_velocity = s.valid ? s.U[kVel + dir] / s.U[kRho] : 0.0;
  return s;
}

namespace detail {
template <int Dim>
double ld_component(const InterfaceFluxInput<Dim>& in,
                    const IntermediateState<Dim>& s, int c) {
  return minmod(-in.am * (s.U[c] - in.Um.v[c]), in.ap * (in.Up.v[c] - s.U[c]));
}

// E* - (rho u_n)*^2/(2 rho*) - Pi*
template <int Dim>
double star_internal(const IntermediateState<Dim>& s, int dir) {
  const double m = s.U[kVel + dir];
  return s.U[kEnergy<Dim>] - 0.5 * m * m / s.U[kRho] - s.U[kPi<Dim>];
}
}  // namespace detail

inline Vector<1> ld_antidiffusion_1d(const InterfaceFluxInput<1>& in,
                                     const IntermediateState<1>& s) {
  Vector<1> q{};
  if (!s.valid) return q;
  const double qr = detail::ld_component(in, s, kRho);
  const double qg = detail::ld_component(in, s, kGamma<1>);
  const double qp = detail::ld_component(in, s, kPi<1>);
  const double u = s.normal_velocity;
  q[kRho] = qr;
  q[kVel] = u * qr;
  q[kEnergy<1>] = 0.5 * u * u * qr +
                  qg * detail::star_internal(s, 0) / s.U[kGamma<1>] + qp;
  q[kGamma<1>] = qg;
  q[kPi<1>] = qp;
  return q;
}

// Energy term is only formed when both speeds are away from zero; otherwise
// it is left at zero and the energy flux is replaced by the caller.
inline Vector<2> ld_antidiffusion_2d(const InterfaceFluxInput<2>& in,
                                     const IntermediateState<2>& s, int dir,
                                     double eps0 = 1e-12) {
  Vector<2> q{};
  if (!s.valid) return q;
  const int n = kVel + dir, t = kVel + (1 - dir);
  const double qr = detail::ld_component(in, s, kRho);
  const double qt = detail::ld_component(in, s, t);
  const double qg = detail::ld_component(in, s, kGamma<2>);
  const double qp = detail::ld_component(in, s, kPi<2>);
  const double u = s.normal_velocity;
  q[kRho] = qr;
  q[n] = u * qr;
  q[t] = qt;
  q[kGamma<2>] = qg;
  q[kPi<2>] = qp;
  if (in.ap >= eps0 && in.am <= -eps0) {
    const double rs = s.U[kRho], ts = s.U[t], gs = s.U[kGamma<2>];
    const double rl = rs + qr / in.am, rr = rs + qr / in.ap;
    if (!(rl > 0.0) || !(rr > 0.0)) return Vector<2>{};
    const double ml = ts + qt / in.am, mr = ts + qt / in.ap;
    const double tl = ml * ml / (2.0 * rl), tr = mr * mr / (2.0 * rr);
    const double coef = in.ap * in.am / (in.ap - in.am);
    q[kEnergy<2>] =
        coef * ((1.0 + qg / (in.ap * gs)) * tl - (1.0 + qg / (in.am * gs)) * tr) +
        0.5 * u * u * qr + qg / gs * detail::star_internal(s, dir) + qp;
  }
  return q;
}

template <int Dim>
Vector<Dim> kl_antidiffusion(const InterfaceFluxInput<Dim>& in,
                             const IntermediateState<Dim>& s) {
  Vector<Dim> q{};
  if (!s.valid) return q;
  const double coef = -in.ap * in.am / (in.ap - in.am);
  for (std::size_t c = 0; c < kNumVars<Dim>; ++c)
    q[c] = coef * minmod(s.U[c] - in.Um.v[c], in.Up.v[c] - s.U[c]);
  return q;
}

template <int Dim>
Vector<Dim> ld_flux(const InterfaceFluxInput<Dim>& in, const Vector<Dim>& q) {
  return cu_flux(in) + q;
}

// Flux when both one-sided speeds vanish.
template <int Dim>
std::optional<Vector<Dim>> desingularize(const InterfaceFluxInput<Dim>& in,
                                         double eps0 = 1e-12) {
  if (in.ap < eps0 && in.am > -eps0) return 0.5 * (in.Km + in.Kp);
  return std::nullopt;
}

enum class Correction { kl, ld };

template <int Dim>
Vector<Dim> numerical_flux(const InterfaceFluxInput<Dim>& in, Correction kind,
                           int dir, double eps0 = 1e-12) {
  if (auto f = desingularize(in, eps0)) return *f;
  Vector<Dim> F = cu_flux(in);
  const auto s = intermediate_state(in, dir);
  if (kind == Correction::kl) {
    F += kl_antidiffusion(in, s);
    return F;
  }
  if constexpr (Dim == 1) {
    F += ld_antidiffusion_1d(in, s);
  } else {
    F += ld_antidiffusion_2d(in, s, dir, eps0);
    constexpr int iE = kEnergy<2>;
    if (in.ap < eps0)
      F[iE] = in.Vm.vel(dir) * (in.Um.energy() + in.Vm.p());
    else if (in.am > -eps0)
      F[iE] = in.Vp.vel(dir) * (in.Up.energy() + in.Vp.p());
  }
  return F;
}

}  // namespace mfluid
