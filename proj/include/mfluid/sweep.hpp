#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aweno.hpp"
#include "core.hpp"
#include "globalflux.hpp"
#include "ldflux.hpp"
#include "recon.hpp"

namespace mfluid {

enum class Scheme { pccu, ldpccu, aiweno };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::pccu: return "pccu";
    case Scheme::ldpccu: return "ldpccu";
    case Scheme::aiweno: return "aiweno";
  }
  return "?";
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "pccu") return Scheme::pccu;
  if (s == "ldpccu") return Scheme::ldpccu;
  if (s == "aiweno") return Scheme::aiweno;
  throw std::invalid_argument("unknown scheme '" + s +
                              "' (expected pccu, ldpccu or aiweno)");
}

inline int ghost_width(Scheme s) { return s == Scheme::aiweno ? 5 : 2; }

struct SchemeConfig {
  Scheme scheme = Scheme::ldpccu;
  double cfl = 0.45;
  double eps0 = 1e-12;
  LimiterParams sharp = kOvercompressive;
  LimiterParams smooth = kDissipative;
  bool hybrid = false;
  InterfaceThresholds thresholds;
  WenoParams weno;

  void validate() const {
    if (!(cfl > 0.0 && cfl < 1.0))
      throw std::invalid_argument("cfl must lie in (0, 1)");
    if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
  }
};

// Flux differences along one grid line. The line holds the primitive cell
// values including ghost layers on both ends.
template <int Dim>
class LineSweep {
 public:
  explicit LineSweep(const SchemeConfig& cfg) : cfg_(cfg) {}

  // Writes (H_{j+1/2} - H_{j-1/2})/h for every interior cell into div and
  // returns the largest one-sided speed over the interior interfaces.
  double run(std::span<const Primitive<Dim>> cells, int ghost, int dir,
             double h, std::span<Vector<Dim>> div, int line = -1,
             std::span<const std::uint8_t> forced = {}) {
    const int n = static_cast<int>(cells.size());
    const int N = n - 2 * ghost;
    const bool weno = cfg_.scheme == Scheme::aiweno;
    const int lo = weno ? ghost - 3 : ghost - 1;
    const int hi = weno ? ghost + N + 1 : ghost + N - 1;
    const int m = hi - lo + 1;
    resize(n, m);

    for (int i = 0; i < n; ++i) gamma_[i] = cells[i].Gamma();
    const auto crossing = find_crossings(gamma_, cfg_.thresholds);

    if (weno) {
      if (cfg_.hybrid) {
        tags_ = hybrid_interface_switch(crossing, n);
      } else {
        std::fill(tags_.begin(), tags_.end(), 0);
      }
      if (!forced.empty())
        for (int i = 0; i < n; ++i) tags_[i] = std::max(tags_[i], forced[i]);
      std::fill(mask_.begin(), mask_.end(), 1);
      for (int k = 0; k < m; ++k) {
        const int i = lo + k;
        low_[k] = tags_[i] || tags_[i + 1];
        if (low_[k]) continue;
        const std::span<const Primitive<Dim>, 6> w(cells.data() + i - 2, 6);
        auto [vm, vp] = characteristic_interface_values<Dim>(w, dir, cfg_.weno);
        vm_[k] = vm;
        vp_[k] = vp;
        // inadmissible fifth-order values drop this interface to second order
        if (!is_admissible(vm) || !is_admissible(vp)) low_[k] = 1;
      }
      bool any_low = false;
      for (int k = 0; k < m; ++k) any_low = any_low || low_[k];
      if (any_low) {
        for (int k = 0; k < m; ++k) {
          if (!low_[k]) continue;
          const int i = lo + k;
          limited_increments<Dim>(cells, mask_, cfg_.sharp, cfg_.sharp, inc_,
                                  i, i + 1);
          // level 2: first order with the plain central-upwind correction
          if (tags_[i] >= 2) inc_[i] = {};
          if (tags_[i + 1] >= 2) inc_[i + 1] = {};
          face_values(cells, i, k);
        }
      }
    } else {
      mask_ = expand_crossings(crossing, n, 1, 1);
      limited_increments<Dim>(cells, mask_, cfg_.sharp, cfg_.smooth, inc_,
                              lo, hi + 1);
      for (int k = 0; k < m; ++k) face_values(cells, lo + k, k);
    }

    for (int k = 0; k < m; ++k) {
      check(vm_[k], lo + k - ghost, dir, line);
      check(vp_[k], lo + k + 1 - ghost, dir, line);
      um_[k] = conserved_from_primitive(vm_[k]);
      up_[k] = conserved_from_primitive(vp_[k]);
      fm_[k] = physical_flux(vm_[k], um_[k], dir);
      fp_[k] = physical_flux(vp_[k], up_[k], dir);
    }
    global_fluxes<Dim>(vm_, vp_, fm_, fp_, dir, km_, kp_);

    const Correction kind =
        cfg_.scheme == Scheme::pccu ? Correction::kl : Correction::ld;
    double smax = 0.0;
    for (int k = 0; k < m; ++k) {
      const int i = lo + k;
      const Speeds s = local_speeds(vm_[k], vp_[k], dir);
      if (i >= ghost - 1 && i <= ghost + N - 1)
        smax = std::max({smax, s.plus, -s.minus});
      InterfaceFluxInput<Dim> in{um_[k], up_[k], vm_[k], vp_[k],
                                 km_[k], kp_[k], s.minus, s.plus};
      const bool first_order = weno && std::max(tags_[i], tags_[i + 1]) >= 2;
      flux_[k] = numerical_flux(in, first_order ? Correction::kl : kind, dir,
                                cfg_.eps0);
    }

    // H at interfaces ghost-1 .. ghost+N-1
    const int off = (ghost - 1) - lo;
    for (int k = 0; k <= N; ++k) {
      const int kk = k + off;
      if (!weno || low_[kk]) {
        h_[k] = flux_[kk];
      } else {
        h_[k] = aweno_flux<Vector<Dim>>(
            std::span<const Vector<Dim>, 5>(flux_.data() + kk - 2, 5), h);
      }
    }
    const double inv = 1.0 / h;
    for (int j = 0; j < N; ++j) div[j] = (h_[j + 1] - h_[j]) * inv;
    return smax;
  }

 private:
  void resize(int n, int m) {
    if (static_cast<int>(gamma_.size()) != n) {
      gamma_.assign(n, 0.0);
      inc_.assign(n, Vector<Dim>{});
      mask_.assign(n, 0);
      tags_.assign(n, 0);
    }
    if (static_cast<int>(vm_.size()) != m) {
      vm_.assign(m, {});
      vp_.assign(m, {});
      um_.assign(m, {});
      up_.assign(m, {});
      fm_.assign(m, {});
      fp_.assign(m, {});
      km_.assign(m, {});
      kp_.assign(m, {});
      flux_.assign(m, {});
      h_.assign(m, {});
      low_.assign(m, 0);
    }
  }

  void face_values(std::span<const Primitive<Dim>> cells, int i, int k) {
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c) {
      vm_[k].v[c] = cells[i].v[c] + 0.5 * inc_[i][c];
      vp_[k].v[c] = cells[i + 1].v[c] - 0.5 * inc_[i + 1][c];
    }
  }

  static void check(const Primitive<Dim>& V, int cell, int dir, int line) {
    if (is_admissible(V)) return;
    std::array<int, 2> where{cell, -1};
    if constexpr (Dim == 2) where = dir == 0 ? std::array{cell, line} : std::array{line, cell};
    std::ostringstream msg;
    msg << "inadmissible reconstructed state next to cell "
        << detail::cell_string(where) << ": rho=" << V.rho() << " p=" << V.p()
        << " Gamma=" << V.Gamma() << " Pi=" << V.Pi();
    throw StateError(msg.str(), where);
  }

  SchemeConfig cfg_;
  std::vector<double> gamma_;
  std::vector<Vector<Dim>> inc_;
  InterfaceMask mask_, tags_;
  std::vector<std::uint8_t> low_;
  std::vector<Primitive<Dim>> vm_, vp_;
  std::vector<Conserved<Dim>> um_, up_;
  std::vector<Vector<Dim>> fm_, fp_, km_, kp_, flux_, h_;
};

}  // namespace mfluid
