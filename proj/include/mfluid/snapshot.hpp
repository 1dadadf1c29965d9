#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace mfluid {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Primitive variables on the interior cells of a grid at one instant.
struct Snapshot {
  double time = 0.0;
  int dim = 1;
  int nx = 0, ny = 1;
  double x0 = 0.0, y0 = 0.0;  // lower domain corner
  double dx = 1.0, dy = 1.0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;
  std::map<std::string, std::string> meta;

  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }

  const std::vector<double>& field(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return data[k];
    throw std::out_of_range("snapshot has no field '" + name + "'");
  }
  bool has(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
  }
  void add(const std::string& name, std::vector<double> values) {
    if (values.size() != cells())
      throw std::invalid_argument("field '" + name + "' has wrong size");
    names.push_back(name);
    data.push_back(std::move(values));
  }
};

// exp(-80 |grad rho| / max |grad rho|), x fastest
inline std::vector<double> schlieren_field(const std::vector<double>& rho, int nx,
                                           int ny, double dx, double dy) {
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  std::vector<double> grad(n, 0.0);
  auto at = [&](int i, int j) { return rho[static_cast<std::size_t>(j) * nx + i]; };
  auto deriv = [](double lo, double hi, double span) { return (hi - lo) / span; };
  double gmax = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double gx = 0.0, gy = 0.0;
      if (nx > 1) {
        if (i == 0) gx = deriv(at(0, j), at(1, j), dx);
        else if (i == nx - 1) gx = deriv(at(nx - 2, j), at(nx - 1, j), dx);
        else gx = deriv(at(i - 1, j), at(i + 1, j), 2.0 * dx);
      }
      if (ny > 1) {
        if (j == 0) gy = deriv(at(i, 0), at(i, 1), dy);
        else if (j == ny - 1) gy = deriv(at(i, ny - 2), at(i, ny - 1), dy);
        else gy = deriv(at(i, j - 1), at(i, j + 1), 2.0 * dy);
      }
      const double g = std::sqrt(gx * gx + gy * gy);
      grad[static_cast<std::size_t>(j) * nx + i] = g;
      gmax = std::max(gmax, g);
    }
  }
  std::vector<double> out(n, 1.0);
  if (!(gmax > 0.0)) return out;
  for (std::size_t k = 0; k < n; ++k) out[k] = std::exp(-80.0 * grad[k] / gmax);
  return out;
}

template <int Dim>
Snapshot make_snapshot(const Field<Dim>& f, double time, bool with_schlieren = true) {
  const auto& g = f.grid();
  Snapshot s;
  s.time = time;
  s.dim = Dim;
  s.nx = g.n[0];
  s.ny = Dim == 2 ? g.n[Dim - 1] : 1;
  s.x0 = g.lo[0];
  s.dx = g.spacing(0);
  if constexpr (Dim == 2) {
    s.y0 = g.lo[1];
    s.dy = g.spacing(1);
  }
  const std::vector<std::string> names =
      Dim == 1 ? std::vector<std::string>{"rho", "u", "p", "Gamma", "Pi"}
               : std::vector<std::string>{"rho", "u", "v", "p", "Gamma", "Pi"};
  std::vector<std::vector<double>> cols(kNumVars<Dim>, std::vector<double>(s.cells()));
  for (int j = 0; j < s.ny; ++j) {
    for (int i = 0; i < s.nx; ++i) {
      const auto V = primitive_from_conserved(f.get(g.interior_index(i, j)));
      for (std::size_t c = 0; c < kNumVars<Dim>; ++c)
        cols[c][static_cast<std::size_t>(j) * s.nx + i] = V.v[c];
    }
  }
  for (std::size_t c = 0; c < kNumVars<Dim>; ++c) s.add(names[c], std::move(cols[c]));
  if (Dim == 2 && with_schlieren)
    s.add("schlieren", schlieren_field(s.field("rho"), s.nx, s.ny, s.dx, s.dy));
  return s;
}

namespace detail {

inline std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw IoError(path + ": cannot parse number '" + s + "'");
  return v;
}

inline std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto c = line.find(':');
    if (c == std::string::npos) continue;
    std::string key = line.substr(0, c), val = line.substr(c + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(val);
    kv[key] = val;
  }
  return kv;
}

inline void write_meta(const Snapshot& s, const std::string& path,
                       const std::vector<std::string>& fields) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "nx: " << s.nx << "\n"
      << "ny: " << s.ny << "\n"
      << "x0: " << g17(s.x0) << "\n"
      << "y0: " << g17(s.y0) << "\n"
      << "dx: " << g17(s.dx) << "\n"
      << "dy: " << g17(s.dy) << "\n"
      << "time: " << g17(s.time) << "\n"
      << "fields: ";
  for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k];
  out << "\n" << "endianness: little\n";
  for (const auto& [k, v] : s.meta) out << k << ": " << v << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

// 1-D table: x,rho,u,p,Gamma,Pi with 17 significant digits. Grid metadata
// goes to a sidecar `<path>.meta`.
inline void write_csv(const Snapshot& s, const std::string& path) {
  if (s.dim != 1) throw IoError("csv output is for 1-D snapshots: " + path);
  static const char* cols[] = {"rho", "u", "p", "Gamma", "Pi"};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "x,rho,u,p,Gamma,Pi\n";
  for (int i = 0; i < s.nx; ++i) {
    out << detail::g17(s.x0 + (i + 0.5) * s.dx);
    for (const char* c : cols) out << "," << detail::g17(s.field(c)[i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
  detail::write_meta(s, path + ".meta", {"x", "rho", "u", "p", "Gamma", "Pi"});
}

inline Snapshot read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,rho,u,p,Gamma,Pi") throw IoError(path + ": unexpected header '" + line + "'");
  std::vector<std::vector<double>> cols(6);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string item;
    int k = 0;
    while (std::getline(row, item, ',')) {
      if (k >= 6) throw IoError(path + ": too many columns");
      cols[k++].push_back(detail::parse_double(item, path));
    }
    if (k != 6) throw IoError(path + ": expected 6 columns");
  }
  Snapshot s;
  s.dim = 1;
  s.nx = static_cast<int>(cols[0].size());
  s.ny = 1;
  if (s.nx == 0) throw IoError(path + ": no rows");
  std::ifstream meta(path + ".meta");
  if (meta) {
    const auto kv = detail::read_key_values(path + ".meta");
    s.x0 = detail::parse_double(kv.at("x0"), path);
    s.dx = detail::parse_double(kv.at("dx"), path);
    s.time = detail::parse_double(kv.at("time"), path);
  } else {
    s.dx = s.nx > 1 ? cols[0][1] - cols[0][0] : 1.0;
    s.x0 = cols[0][0] - 0.5 * s.dx;
  }
  static const char* names[] = {"rho", "u", "p", "Gamma", "Pi"};
  for (int k = 0; k < 5; ++k) s.add(names[k], cols[k + 1]);
  return s;
}

// `<base>.meta` plus one raw little-endian float64 file `<base>.<field>.bin`
// per field, x index fastest.
inline void write_grid_binary(const Snapshot& s, const std::string& base) {
  detail::write_meta(s, base + ".meta", s.names);
  for (std::size_t k = 0; k < s.names.size(); ++k) {
    const std::string path = base + "." + s.names[k] + ".bin";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    std::vector<unsigned char> buf(s.data[k].size() * 8);
    for (std::size_t i = 0; i < s.data[k].size(); ++i) {
      const auto bits = std::bit_cast<std::uint64_t>(s.data[k][i]);
      for (int b = 0; b < 8; ++b) buf[8 * i + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path);
  }
}

// base is the path without the `.meta` suffix
inline Snapshot read_grid_binary(const std::string& base) {
  const auto kv = detail::read_key_values(base + ".meta");
  auto need = [&](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw IoError(base + ".meta: missing key '" + k + "'");
    return it->second;
  };
  if (need("endianness") != "little") throw IoError(base + ".meta: unsupported endianness");
  Snapshot s;
  s.nx = std::stoi(need("nx"));
  s.ny = std::stoi(need("ny"));
  s.dim = s.ny > 1 ? 2 : 1;
  s.x0 = detail::parse_double(need("x0"), base);
  s.y0 = detail::parse_double(need("y0"), base);
  s.dx = detail::parse_double(need("dx"), base);
  s.dy = detail::parse_double(need("dy"), base);
  s.time = detail::parse_double(need("time"), base);
  for (const auto& [k, v] : kv) {
    static const char* fixed[] = {"nx", "ny", "x0", "y0", "dx", "dy", "time", "fields", "endianness"};
    if (std::none_of(std::begin(fixed), std::end(fixed), [&](const char* f) { return k == f; }))
      s.meta[k] = v;
  }
  std::istringstream list(need("fields"));
  std::string name;
  while (std::getline(list, name, ',')) {
    const std::string path = base + "." + name + ".bin";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() != s.cells() * 8)
      throw IoError(path + ": size " + std::to_string(buf.size()) + " does not match " +
                    std::to_string(s.nx) + "x" + std::to_string(s.ny) + " float64");
    std::vector<double> v(s.cells());
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[8 * i + b]) << (8 * b);
      v[i] = std::bit_cast<double>(bits);
    }
    s.add(name, std::move(v));
  }
  return s;
}

// Reference averaged onto the coarse grid; L1 = cell volume * sum |diff|.
inline std::map<std::string, double> l1_error(const Snapshot& coarse, const Snapshot& fine) {
  auto ratio = [](int nc, int nf, const char* axis) {
    if (nc <= 0 || nf % nc != 0)
      throw std::invalid_argument(std::string("l1_error: incompatible grids along ") + axis);
    return nf / nc;
  };
  const int rx = ratio(coarse.nx, fine.nx, "x");
  const int ry = ratio(coarse.ny, fine.ny, "y");
  const double tol = 1e-9 * std::max(1.0, std::abs(coarse.dx * coarse.nx));
  if (std::abs(coarse.x0 - fine.x0) > tol || std::abs(coarse.dx - rx * fine.dx) > tol ||
      (coarse.ny > 1 && (std::abs(coarse.y0 - fine.y0) > tol ||
                         std::abs(coarse.dy - ry * fine.dy) > tol)))
    throw std::invalid_argument("l1_error: grids do not cover the same domain");
  const double vol = coarse.dx * (coarse.ny > 1 ? coarse.dy : 1.0);
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < coarse.names.size(); ++k) {
    const auto& name = coarse.names[k];
    if (name == "schlieren" || !fine.has(name)) continue;
    const auto& c = coarse.data[k];
    const auto& f = fine.field(name);
    double sum = 0.0;
    for (int j = 0; j < coarse.ny; ++j) {
      for (int i = 0; i < coarse.nx; ++i) {
        double avg = 0.0;
        for (int b = 0; b < ry; ++b)
          for (int a = 0; a < rx; ++a)
            avg += f[static_cast<std::size_t>(j * ry + b) * fine.nx + (i * rx + a)];
        avg /= rx * ry;
        sum += std::abs(c[static_cast<std::size_t>(j) * coarse.nx + i] - avg);
      }
    }
    out[name] = vol * sum;
  }
  return out;
}

}  // namespace mfluid
