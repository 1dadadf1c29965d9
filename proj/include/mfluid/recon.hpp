#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "core.hpp"

namespace mfluid {

struct LimiterParams {
  double theta = 1.3;
  double tau = 0.5;
};

inline constexpr LimiterParams kOvercompressive{1.3, -0.5};
inline constexpr LimiterParams kDissipative{1.3, 0.5};

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

inline double minmod(std::initializer_list<double> args) {
  bool pos = true, neg = true;
  for (double a : args) {
    pos = pos && a > 0.0;
    neg = neg && a < 0.0;
  }
  if (pos) return std::min(args);
  if (neg) return std::max(args);
  return 0.0;
}

inline double sbm_phi(double r, LimiterParams lp) {
  if (!(r > 0.0)) return 0.0;
  if (r <= 1.0) return std::min(r * lp.theta, 1.0 + lp.tau * (r - 1.0));
  const double s = 1.0 / r;
  return r * std::min(s * lp.theta, 1.0 + lp.tau * (s - 1.0));
}

// Limited undivided slope from the backward and forward differences.
// Equals phi(fwd/back)*back, evaluated without division so that it is exactly
// symmetric under exchange of the two arguments.
inline double limited_increment(double back, double fwd, LimiterParams lp) {
  if (!(back * fwd > 0.0)) return 0.0;
  const double a = std::abs(back), b = std::abs(fwd);
  const double small = std::min(a, b), large = std::max(a, b);
  const double mag = std::min(lp.theta * small, large + lp.tau * (small - large));
  return back > 0.0 ? mag : -mag;
}

// Gamma-threshold values for material interface detection.
struct InterfaceThresholds {
  std::vector<double> values;

  // pairs index into fluids; empty means every unordered pair
  static InterfaceThresholds from_fluids(
      const std::vector<FluidSpec>& fluids,
      const std::vector<std::pair<int, int>>& pairs = {}) {
    InterfaceThresholds t;
    auto add = [&](int a, int b) {
      const double ga = eos_coefficients(fluids.at(a)).Gamma;
      const double gb = eos_coefficients(fluids.at(b)).Gamma;
      if (ga != gb) t.values.push_back(0.5 * (ga + gb));
    };
    if (pairs.empty()) {
      for (std::size_t a = 0; a < fluids.size(); ++a)
        for (std::size_t b = a + 1; b < fluids.size(); ++b)
          add(static_cast<int>(a), static_cast<int>(b));
    } else {
      for (auto [a, b] : pairs) add(a, b);
    }
    return t;
  }
};

using InterfaceMask = std::vector<std::uint8_t>;

// crossing[j] != 0 when Gamma changes sides of a threshold between j and j+1
inline std::vector<std::uint8_t> find_crossings(std::span<const double> gamma,
                                                const InterfaceThresholds& th) {
  std::vector<std::uint8_t> out(gamma.size() > 0 ? gamma.size() - 1 : 0, 0);
  for (std::size_t j = 0; j + 1 < gamma.size(); ++j) {
    for (double t : th.values) {
      if ((gamma[j] - t) * (gamma[j + 1] - t) < 0.0) {
        out[j] = 1;
        break;
      }
    }
  }
  return out;
}

// Flags cells j-before .. j+1+after for every crossing between j and j+1.
inline InterfaceMask expand_crossings(std::span<const std::uint8_t> crossing,
                                      std::size_t ncells, int before,
                                      int after) {
  InterfaceMask mask(ncells, 0);
  const long n = static_cast<long>(ncells);
  for (std::size_t j = 0; j < crossing.size(); ++j) {
    if (!crossing[j]) continue;
    const long lo = std::max<long>(0, static_cast<long>(j) - before);
    const long hi = std::min<long>(n - 1, static_cast<long>(j) + 1 + after);
    for (long k = lo; k <= hi; ++k) mask[k] = 1;
  }
  return mask;
}

inline InterfaceMask detect_interfaces(std::span<const double> gamma,
                                       const InterfaceThresholds& th) {
  const auto c = find_crossings(gamma, th);
  return expand_crossings(c, gamma.size(), 1, 1);
}

namespace detail {

// Face values of one cell from its undivided increments, shrunk towards the
// cell value until both faces are admissible.
template <int Dim>
bool admissible_faces(const Primitive<Dim>& V, const Vector<Dim>& inc,
                      double scale) {
  Primitive<Dim> lo = V, hi = V;
  for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
    lo.v[c] -= 0.5 * scale * inc[c];
    hi.v[c] += 0.5 * scale * inc[c];
  }
  return is_admissible(lo) && is_admissible(hi);
}

}  // namespace detail

// Undivided limited increments for cells 1..n-2 (ends left at zero).
template <int Dim>
void limited_increments(std::span<const Primitive<Dim>> cells,
                        std::span<const std::uint8_t> mask,
                        LimiterParams sharp, LimiterParams smooth,
                        std::span<Vector<Dim>> inc, std::size_t first,
                        std::size_t last) {
  for (std::size_t j = first; j <= last; ++j) {
    const LimiterParams lp = mask[j] ? sharp : smooth;
    Vector<Dim> s;
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
      const double back = cells[j].v[c] - cells[j - 1].v[c];
      const double fwd = cells[j + 1].v[c] - cells[j].v[c];
      s[c] = limited_increment(back, fwd, lp);
    }
    if (!detail::admissible_faces(cells[j], s, 1.0)) {
      double scale = 0.0;
      for (double trial : {0.5, 0.25}) {
        if (detail::admissible_faces(cells[j], s, trial)) {
          scale = trial;
          break;
        }
      }
      s *= scale;
    }
    inc[j] = s;
  }
}

// Slopes (per unit length) for every cell of a line; end cells get zero.
template <int Dim>
std::vector<Vector<Dim>> slopes(std::span<const Primitive<Dim>> cells,
                                std::span<const std::uint8_t> mask, double h,
                                LimiterParams sharp = kOvercompressive,
                                LimiterParams smooth = kDissipative) {
  std::vector<Vector<Dim>> inc(cells.size());
  if (cells.size() >= 3)
    limited_increments<Dim>(cells, mask, sharp, smooth, inc, 1,
                            cells.size() - 2);
  for (auto& s : inc) s *= 1.0 / h;
  return inc;
}

// One-sided values at the n-1 interior interfaces j+1/2 of a line.
template <int Dim>
std::pair<std::vector<Primitive<Dim>>, std::vector<Primitive<Dim>>>
interface_values(std::span<const Primitive<Dim>> cells,
                 std::span<const Vector<Dim>> slope, double h) {
  const std::size_t m = cells.empty() ? 0 : cells.size() - 1;
  std::vector<Primitive<Dim>> minus(m), plus(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
      minus[j].v[c] = cells[j].v[c] + 0.5 * h * slope[j][c];
      plus[j].v[c] = cells[j + 1].v[c] - 0.5 * h * slope[j + 1][c];
    }
  }
  return {std::move(minus), std::move(plus)};
}

}  // namespace mfluid
