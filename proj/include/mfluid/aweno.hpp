#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "core.hpp"
#include "recon.hpp"

namespace mfluid {

struct WenoParams {
  double eps = 1e-12;
  int r = 2;
};

struct WenoResult {
  double value;
  std::array<double, 3> weights;
};

// Point value at x_{j+1/2} from the point values W_{j-2..j+2} (left-biased).
inline WenoResult aiweno_left(const double* w, WenoParams wp = {}) {
  constexpr double d0 = 1.0 / 16.0, d1 = 5.0 / 8.0, d2 = 5.0 / 16.0;
  const double p0 = (3.0 * w[0] - 10.0 * w[1] + 15.0 * w[2]) / 8.0;
  const double p1 = (-w[1] + 6.0 * w[2] + 3.0 * w[3]) / 8.0;
  const double p2 = (3.0 * w[2] + 6.0 * w[3] - w[4]) / 8.0;
  const double a0 = w[0] - 2.0 * w[1] + w[2], b0 = w[0] - 4.0 * w[1] + 3.0 * w[2];
  const double a1 = w[1] - 2.0 * w[2] + w[3], b1 = w[1] - w[3];
  const double a2 = w[2] - 2.0 * w[3] + w[4], b2 = 3.0 * w[2] - 4.0 * w[3] + w[4];
  const double beta0 = 13.0 / 12.0 * a0 * a0 + 0.25 * b0 * b0;
  const double beta1 = 13.0 / 12.0 * a1 * a1 + 0.25 * b1 * b1;
  const double beta2 = 13.0 / 12.0 * a2 * a2 + 0.25 * b2 * b2;
  const double tau = std::abs(beta2 - beta0);
  const double mean = (w[0] + w[1] + w[2] + w[3] + w[4]) / 5.0;
  const double mu = (std::abs(w[0] - mean) + std::abs(w[1] - mean) +
                     std::abs(w[2] - mean) + std::abs(w[3] - mean) +
                     std::abs(w[4] - mean)) / 5.0 + 1e-40;
  const double em = wp.eps * mu * mu;
  auto boost = [&](double beta) {
    const double x = tau / (beta + em);
    if (wp.r == 2) return 1.0 + x * x;
    return 1.0 + std::pow(x, wp.r);
  };
  const double al0 = d0 * boost(beta0), al1 = d1 * boost(beta1),
               al2 = d2 * boost(beta2);
  const double s = al0 + al1 + al2;
  const double om0 = al0 / s, om1 = al1 / s;
  // (om0 + om1) + om2 == 1 exactly
  const std::array<double, 3> om{om0, om1, 1.0 - (om0 + om1)};
  return {om[0] * p0 + om[1] * p1 + om[2] * p2, om};
}

// aiweno_left applied lane by lane; w[k][l] is point k of lane l.
template <std::size_t L>
void aiweno_left_lanes(const std::array<std::array<double, L>, 5>& w,
                       std::array<double, L>& out, WenoParams wp = {}) {
  constexpr double d0 = 1.0 / 16.0, d1 = 5.0 / 8.0, d2 = 5.0 / 16.0;
  std::array<double, L> p0, p1, p2, beta0, beta1, beta2, em;
  for (std::size_t l = 0; l < L; ++l) {
    const double w0 = w[0][l], w1 = w[1][l], w2 = w[2][l], w3 = w[3][l], w4 = w[4][l];
    p0[l] = (3.0 * w0 - 10.0 * w1 + 15.0 * w2) / 8.0;
    p1[l] = (-w1 + 6.0 * w2 + 3.0 * w3) / 8.0;
    p2[l] = (3.0 * w2 + 6.0 * w3 - w4) / 8.0;
    const double a0 = w0 - 2.0 * w1 + w2, b0 = w0 - 4.0 * w1 + 3.0 * w2;
    const double a1 = w1 - 2.0 * w2 + w3, b1 = w1 - w3;
    const double a2 = w2 - 2.0 * w3 + w4, b2 = 3.0 * w2 - 4.0 * w3 + w4;
    beta0[l] = 13.0 / 12.0 * a0 * a0 + 0.25 * b0 * b0;
    beta1[l] = 13.0 / 12.0 * a1 * a1 + 0.25 * b1 * b1;
    beta2[l] = 13.0 / 12.0 * a2 * a2 + 0.25 * b2 * b2;
    const double mean = (w0 + w1 + w2 + w3 + w4) / 5.0;
    const double mu = (std::abs(w0 - mean) + std::abs(w1 - mean) +
                       std::abs(w2 - mean) + std::abs(w3 - mean) +
                       std::abs(w4 - mean)) / 5.0 + 1e-40;
    em[l] = wp.eps * mu * mu;
  }
  std::array<double, L> x0, x1, x2;
  for (std::size_t l = 0; l < L; ++l) {
    const double tau = std::abs(beta2[l] - beta0[l]);
    x0[l] = tau / (beta0[l] + em[l]);
    x1[l] = tau / (beta1[l] + em[l]);
    x2[l] = tau / (beta2[l] + em[l]);
  }
  if (wp.r == 2) {
    for (std::size_t l = 0; l < L; ++l) {
      x0[l] = 1.0 + x0[l] * x0[l];
      x1[l] = 1.0 + x1[l] * x1[l];
      x2[l] = 1.0 + x2[l] * x2[l];
    }
  } else {
    for (std::size_t l = 0; l < L; ++l) {
      x0[l] = 1.0 + std::pow(x0[l], wp.r);
      x1[l] = 1.0 + std::pow(x1[l], wp.r);
      x2[l] = 1.0 + std::pow(x2[l], wp.r);
    }
  }
  for (std::size_t l = 0; l < L; ++l) {
    const double al0 = d0 * x0[l], al1 = d1 * x1[l], al2 = d2 * x2[l];
    const double s = al0 + al1 + al2;
    const double om0 = al0 / s, om1 = al1 / s;
    out[l] = om0 * p0[l] + om1 * p1[l] + (1.0 - (om0 + om1)) * p2[l];
  }
}

struct InterfacePair {
  double minus;
  double plus;
};

// Both one-sided values at x_{j+1/2} from W_{j-2..j+3}.
inline InterfacePair aiweno_interpolate(std::span<const double, 6> w,
                                        WenoParams wp = {}) {
  const double mirrored[5] = {w[5], w[4], w[3], w[2], w[1]};
  return {aiweno_left(w.data(), wp).value, aiweno_left(mirrored, wp).value};
}

// Local characteristic basis built from averages of two neighbouring states.
template <int Dim>
class LcdBasis {
 public:
  static constexpr std::size_t N = kNumVars<Dim>;

  static std::optional<LcdBasis> make(const Primitive<Dim>& l,
                                      const Primitive<Dim>& r, int dir) {
    if (!(l.rho() > 0.0) || !(r.rho() > 0.0)) return std::nullopt;
    LcdBasis b;
    b.dir_ = dir;
    const double sl = std::sqrt(l.rho()), sr = std::sqrt(r.rho());
    const double wl = sl / (sl + sr), wr = sr / (sl + sr);
    b.rho_ = sl * sr;
    b.u_ = wl * l.vel(dir) + wr * r.vel(dir);
    b.p_ = wl * l.p() + wr * r.p();
    b.gamma_ = wl * (1.0 + 1.0 / l.Gamma()) + wr * (1.0 + 1.0 / r.Gamma());
    b.pinf_ = wl * l.Pi() / (1.0 + l.Gamma()) + wr * r.Pi() / (1.0 + r.Gamma());
    const double c2 = b.gamma_ * (b.p_ + b.pinf_) / b.rho_;
    if (!(c2 > 0.0) || !std::isfinite(c2)) return std::nullopt;
    b.c_ = std::sqrt(c2);
    b.c2inv_ = 1.0 / c2;
    b.rc_ = b.rho_ * b.c_;
    return b;
  }

  double rho() const { return rho_; }
  double u() const { return u_; }
  double p() const { return p_; }
  double gamma() const { return gamma_; }
  double pi_inf() const { return pinf_; }
  double c() const { return c_; }
  int dir() const { return dir_; }

  // W = R^{-1} V
  Vector<Dim> to_characteristic(const Vector<Dim>& V) const {
    const int n = kVel + dir_;
    constexpr int P = kEnergy<Dim>;
    Vector<Dim> W;
    W[0] = -0.5 * rc_ * V[n] + 0.5 * V[P];
    W[1] = V[kPi<Dim>];
    W[2] = V[kGamma<Dim>];
    if constexpr (Dim == 2) W[3] = V[kVel + (1 - dir_)];
    W[N - 2] = V[kRho] - V[P] * c2inv_;
    W[N - 1] = 0.5 * rc_ * V[n] + 0.5 * V[P];
    return W;
  }

  // V = R W
  Vector<Dim> from_characteristic(const Vector<Dim>& W) const {
    const int n = kVel + dir_;
    constexpr int P = kEnergy<Dim>;
    Vector<Dim> V;
    V[kRho] = (W[0] + W[N - 1]) * c2inv_ + W[N - 2];
    V[n] = (W[N - 1] - W[0]) / rc_;
    if constexpr (Dim == 2) V[kVel + (1 - dir_)] = W[3];
    V[P] = W[0] + W[N - 1];
    V[kGamma<Dim>] = W[2];
    V[kPi<Dim>] = W[1];
    return V;
  }

  using Matrix = std::array<std::array<double, N>, N>;

  Matrix R() const { return dense(false); }
  Matrix Rinv() const { return dense(true); }

  Vector<Dim> eigenvalues() const {
    Vector<Dim> e;
    for (std::size_t i = 0; i < N; ++i) e[i] = u_;
    e[0] = u_ - c_;
    e[N - 1] = u_ + c_;
    return e;
  }

 private:
  Matrix dense(bool inverse) const {
    Matrix m{};
    for (std::size_t j = 0; j < N; ++j) {
      Vector<Dim> e{};
      e[j] = 1.0;
      const auto col = inverse ? to_characteristic(e) : from_characteristic(e);
      for (std::size_t i = 0; i < N; ++i) m[i][j] = col[i];
    }
    return m;
  }

  int dir_ = 0;
  double rho_ = 0, u_ = 0, p_ = 0, gamma_ = 0, pinf_ = 0, c_ = 0, c2inv_ = 0,
         rc_ = 0;
};

inline std::optional<LcdBasis<1>> lcd_basis_1d(const Primitive<1>& l,
                                                const Primitive<1>& r) {
  return LcdBasis<1>::make(l, r, 0);
}
inline std::optional<LcdBasis<2>> lcd_basis_2d_x(const Primitive<2>& l,
                                                  const Primitive<2>& r) {
  return LcdBasis<2>::make(l, r, 0);
}
inline std::optional<LcdBasis<2>> lcd_basis_2d_y(const Primitive<2>& l,
                                                  const Primitive<2>& r) {
  return LcdBasis<2>::make(l, r, 1);
}

// One-sided primitive values at the interface between window[2] and
// window[3], interpolated in characteristic variables when a basis exists.
template <int Dim>
std::pair<Primitive<Dim>, Primitive<Dim>> characteristic_interface_values(
    std::span<const Primitive<Dim>, 6> window, int dir, WenoParams wp = {}) {
  constexpr std::size_t N = kNumVars<Dim>;
  const auto basis = LcdBasis<Dim>::make(window[2], window[3], dir);
  std::array<Vector<Dim>, 6> W;
  for (int k = 0; k < 6; ++k)
    W[k] = basis ? basis->to_characteristic(window[k].v) : window[k].v;
  // lanes 0..N-1 give the left value, N..2N-1 the mirrored right one
  std::array<std::array<double, 2 * N>, 5> lanes;
  for (int k = 0; k < 5; ++k)
    for (std::size_t c = 0; c < N; ++c) {
      lanes[k][c] = W[k][c];
      lanes[k][N + c] = W[5 - k][c];
    }
  std::array<double, 2 * N> out;
  aiweno_left_lanes<2 * N>(lanes, out, wp);
  Vector<Dim> wm, wpl;
  for (std::size_t c = 0; c < N; ++c) {
    wm[c] = out[c];
    wpl[c] = out[N + c];
  }
  if (basis) return {{basis->from_characteristic(wm)}, {basis->from_characteristic(wpl)}};
  return {{wm}, {wpl}};
}

// Second and fourth derivative estimates of the numerical flux at the
// middle of five consecutive interfaces.
template <class V>
std::pair<V, V> ho_corrections(std::span<const V, 5> k, double h) {
  V kxx = (1.0 / (12.0 * h * h)) *
          (-1.0 * k[0] + 16.0 * k[1] - 30.0 * k[2] + 16.0 * k[3] - 1.0 * k[4]);
  V kxxxx = (1.0 / (h * h * h * h)) *
            (k[0] - 4.0 * k[1] + 6.0 * k[2] - 4.0 * k[3] + k[4]);
  return {kxx, kxxxx};
}

template <class V>
V aweno_flux(std::span<const V, 5> k, double /*h*/) {
  // same as k2 - h^2/24 kxx + 7h^4/5760 kxxxx with both stencils folded
  constexpr double a = 27.0 / 5760.0, b = -348.0 / 5760.0;
  return k[2] + a * (k[0] + k[4] - 2.0 * k[2]) + b * (k[1] + k[3] - 2.0 * k[2]);
}

// Cells handled by the second-order fallback: j-3 .. j+4 around a crossing.
inline InterfaceMask hybrid_interface_switch(
    std::span<const std::uint8_t> crossing, std::size_t ncells) {
  return expand_crossings(crossing, ncells, 3, 3);
}

}  // namespace mfluid
