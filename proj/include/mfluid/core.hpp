#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfluid {

// Fixed-size vector of doubles with componentwise arithmetic.
template <std::size_t N>
struct Vec {
  std::array<double, N> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }
  static constexpr std::size_t size() { return N; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (std::size_t i = 0; i < N; ++i) c[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend bool operator==(const Vec&, const Vec&) = default;
};

template <int Dim>
inline constexpr std::size_t kNumVars = static_cast<std::size_t>(Dim) + 4;

template <int Dim>
using Vector = Vec<kNumVars<Dim>>;

// Component positions, identical for conserved and primitive vectors:
// 0 density, 1..Dim momentum/velocity, Dim+1 energy/pressure, Dim+2 Gamma,
// Dim+3 Pi.
inline constexpr int kRho = 0;
inline constexpr int kVel = 1;
template <int Dim>
inline constexpr int kEnergy = Dim + 1;
template <int Dim>
inline constexpr int kGamma = Dim + 2;
template <int Dim>
inline constexpr int kPi = Dim + 3;

struct FluidSpec {
  double gamma = 1.4;
  double pi_inf = 0.0;
};

// Gamma = 1/(gamma-1), Pi = gamma*pi_inf/(gamma-1)
struct EosCoefficients {
  double Gamma;
  double Pi;
};

inline EosCoefficients eos_coefficients(const FluidSpec& f) {
  if (!(f.gamma > 1.0) || !std::isfinite(f.gamma) || !(f.pi_inf >= 0.0) ||
      !std::isfinite(f.pi_inf)) {
    std::ostringstream msg;
    msg << "invalid fluid: gamma=" << f.gamma << " pi_inf=" << f.pi_inf;
    throw std::invalid_argument(msg.str());
  }
  return {1.0 / (f.gamma - 1.0), f.gamma * f.pi_inf / (f.gamma - 1.0)};
}

inline FluidSpec fluid_from_coefficients(double Gamma, double Pi) {
  return {1.0 + 1.0 / Gamma, Pi / (1.0 + Gamma)};
}

// Raised when a state leaves the admissible set. Cell indices are interior
// based (ghosts are negative or >= n); unused directions hold -1.
class StateError : public std::runtime_error {
 public:
  StateError(const std::string& what, std::array<int, 2> cell)
      : std::runtime_error(what), cell_(cell) {}
  std::array<int, 2> cell() const { return cell_; }

 private:
  std::array<int, 2> cell_;
};

template <int Dim>
struct Conserved {
  Vector<Dim> v{};

  double rho() const { return v[kRho]; }
  double mom(int d) const { return v[kVel + d]; }
  double energy() const { return v[kEnergy<Dim>]; }
  double Gamma() const { return v[kGamma<Dim>]; }
  double Pi() const { return v[kPi<Dim>]; }
  friend bool operator==(const Conserved&, const Conserved&) = default;
};

template <int Dim>
struct Primitive {
  Vector<Dim> v{};

  double rho() const { return v[kRho]; }
  double vel(int d) const { return v[kVel + d]; }
  double p() const { return v[kEnergy<Dim>]; }
  double Gamma() const { return v[kGamma<Dim>]; }
  double Pi() const { return v[kPi<Dim>]; }
  friend bool operator==(const Primitive&, const Primitive&) = default;
};

inline Primitive<1> make_primitive(double rho, double u, double p, double Gamma,
                                   double Pi) {
  return {Vector<1>{{rho, u, p, Gamma, Pi}}};
}

inline Primitive<2> make_primitive(double rho, double u, double v, double p,
                                   double Gamma, double Pi) {
  return {Vector<2>{{rho, u, v, p, Gamma, Pi}}};
}

template <int Dim>
Primitive<Dim> primitive_from_fluid(double rho, const std::array<double, Dim>& vel,
                                    double p, const FluidSpec& f) {
  const auto eos = eos_coefficients(f);
  Primitive<Dim> V;
  V.v[kRho] = rho;
  for (int d = 0; d < Dim; ++d) V.v[kVel + d] = vel[d];
  V.v[kEnergy<Dim>] = p;
  V.v[kGamma<Dim>] = eos.Gamma;
  V.v[kPi<Dim>] = eos.Pi;
  return V;
}

template <int Dim>
double kinetic_energy(const Primitive<Dim>& V) {
  double s = 0.0;
  for (int d = 0; d < Dim; ++d) s += V.vel(d) * V.vel(d);
  return 0.5 * V.rho() * s;
}

// rho > 0, Gamma > 0, (1+Gamma)p + Pi > 0, everything finite.
template <int Dim>
bool is_admissible(const Primitive<Dim>& V) {
  for (std::size_t i = 0; i < kNumVars<Dim>; ++i)
    if (!std::isfinite(V.v[i])) return false;
  return V.rho() > 0.0 && V.Gamma() > 0.0 &&
         (1.0 + V.Gamma()) * V.p() + V.Pi() > 0.0;
}

namespace detail {
inline std::string cell_string(std::array<int, 2> cell) {
  std::ostringstream s;
  s << "(" << cell[0];
  if (cell[1] != -1) s << ", " << cell[1];
  s << ")";
  return s.str();
}
}  // namespace detail

template <int Dim>
Conserved<Dim> conserved_from_primitive(const Primitive<Dim>& V) {
  Conserved<Dim> U;
  U.v[kRho] = V.rho();
  for (int d = 0; d < Dim; ++d) U.v[kVel + d] = V.rho() * V.vel(d);
  U.v[kEnergy<Dim>] = V.Gamma() * V.p() + kinetic_energy(V) + V.Pi();
  U.v[kGamma<Dim>] = V.Gamma();
  U.v[kPi<Dim>] = V.Pi();
  return U;
}

template <int Dim>
Primitive<Dim> primitive_from_conserved(const Conserved<Dim>& U,
                                        std::array<int, 2> cell = {-1, -1}) {
  const double rho = U.rho();
  const double G = U.Gamma();
  if (!(rho > 0.0) || !(G > 0.0) || !std::isfinite(U.energy())) {
    std::ostringstream msg;
    msg << "inadmissible state at cell " << detail::cell_string(cell)
        << ": rho=" << rho << " Gamma=" << G << " E=" << U.energy();
    throw StateError(msg.str(), cell);
  }
  Primitive<Dim> V;
  V.v[kRho] = rho;
  double m2 = 0.0;
  for (int d = 0; d < Dim; ++d) {
    V.v[kVel + d] = U.mom(d) / rho;
    m2 += U.mom(d) * U.mom(d);
  }
  V.v[kEnergy<Dim>] = (U.energy() - 0.5 * m2 / rho - U.Pi()) / G;
  V.v[kGamma<Dim>] = G;
  V.v[kPi<Dim>] = U.Pi();
  return V;
}

template <int Dim>
double sound_speed(const Primitive<Dim>& V, std::array<int, 2> cell = {-1, -1}) {
  const double num = (1.0 + V.Gamma()) * V.p() + V.Pi();
  const double den = V.Gamma() * V.rho();
  if (!(num > 0.0) || !(den > 0.0) || !std::isfinite(num)) {
    std::ostringstream msg;
    msg << "no real sound speed at cell " << detail::cell_string(cell)
        << ": rho=" << V.rho() << " p=" << V.p() << " Gamma=" << V.Gamma()
        << " Pi=" << V.Pi();
    throw StateError(msg.str(), cell);
  }
  return std::sqrt(num / den);
}

enum class Boundary { solid_wall, free, periodic };

template <int Dim>
struct Grid {
  std::array<double, Dim> lo{};
  std::array<double, Dim> hi{};
  std::array<int, Dim> n{};
  int ghost = 2;
  // bc[d][0] low side, bc[d][1] high side
  std::array<std::array<Boundary, 2>, Dim> bc{};

  double spacing(int d) const { return (hi[d] - lo[d]) / n[d]; }
  int padded(int d) const { return n[d] + 2 * ghost; }
  // center of interior cell i (0-based, may be negative for ghosts)
  double center(int d, int i) const { return lo[d] + (i + 0.5) * spacing(d); }

  std::size_t total() const {
    std::size_t t = 1;
    for (int d = 0; d < Dim; ++d) t *= static_cast<std::size_t>(padded(d));
    return t;
  }
  // padded index from padded coordinates
  std::size_t index(int i, int j = 0) const {
    if constexpr (Dim == 1) {
      return static_cast<std::size_t>(i);
    } else {
      return static_cast<std::size_t>(i) +
             static_cast<std::size_t>(padded(0)) * static_cast<std::size_t>(j);
    }
  }
  std::size_t interior_index(int i, int j = 0) const {
    if constexpr (Dim == 1) {
      return index(i + ghost);
    } else {
      return index(i + ghost, j + ghost);
    }
  }

  void validate() const {
    for (int d = 0; d < Dim; ++d) {
      if (n[d] < 1 || !(hi[d] > lo[d]))
        throw std::invalid_argument("grid: need n >= 1 and hi > lo");
      bool p0 = bc[d][0] == Boundary::periodic;
      bool p1 = bc[d][1] == Boundary::periodic;
      if (p0 != p1)
        throw std::invalid_argument("grid: periodic boundaries must be paired");
    }
    if (ghost < 2) throw std::invalid_argument("grid: ghost width must be >= 2");
  }
};

using Grid1D = Grid<1>;
using Grid2D = Grid<2>;

inline Grid1D make_grid(double x0, double x1, int nx, Boundary left,
                        Boundary right, int ghost = 2) {
  Grid1D g;
  g.lo = {x0};
  g.hi = {x1};
  g.n = {nx};
  g.ghost = ghost;
  g.bc = {{{left, right}}};
  g.validate();
  return g;
}

inline Grid2D make_grid(double x0, double x1, double y0, double y1, int nx,
                        int ny, std::array<Boundary, 4> bc, int ghost = 2) {
  // bc order: left, right, bottom, top
  Grid2D g;
  g.lo = {x0, y0};
  g.hi = {x1, y1};
  g.n = {nx, ny};
  g.ghost = ghost;
  g.bc = {{{bc[0], bc[1]}, {bc[2], bc[3]}}};
  g.validate();
  return g;
}

// Conserved variables stored component by component over the padded grid.
template <int Dim>
class Field {
 public:
  Field() = default;
  explicit Field(const Grid<Dim>& grid) : grid_(grid) {
    for (auto& c : data_) c.assign(grid_.total(), 0.0);
  }

  const Grid<Dim>& grid() const { return grid_; }
  std::size_t size() const { return grid_.total(); }

  Conserved<Dim> get(std::size_t idx) const {
    Conserved<Dim> U;
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c) U.v[c] = data_[c][idx];
    return U;
  }
  void set(std::size_t idx, const Conserved<Dim>& U) {
    for (std::size_t c = 0; c < kNumVars<Dim>; ++c) data_[c][idx] = U.v[c];
  }

  std::vector<double>& component(std::size_t c) { return data_[c]; }
  const std::vector<double>& component(std::size_t c) const { return data_[c]; }

 private:
  Grid<Dim> grid_{};
  std::array<std::vector<double>, kNumVars<Dim>> data_{};
};

}  // namespace mfluid
