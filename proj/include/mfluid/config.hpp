#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep.hpp"

namespace mfluid {

enum class OutputFormat { automatic, csv, grid_binary };

struct RunConfig {
  std::string problem;
  Scheme scheme = Scheme::ldpccu;
  double cfl = 0.45;
  double eps0 = 1e-12;
  double theta = 1.3;
  double tau_interface = -0.5;
  double tau_smooth = 0.5;
  std::optional<bool> hybrid;
  std::optional<int> nx;
  std::optional<int> ny;
  std::optional<double> t_final;
  std::optional<std::vector<double>> snapshots;
  OutputFormat format = OutputFormat::automatic;
  bool reference = false;
  std::string out = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double to_double(const std::string& s, int line, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ConfigError("line " + std::to_string(line) + ": " + key +
                      " expects a number, got '" + s + "'");
  return v;
}

inline int to_int(const std::string& s, int line, const std::string& key) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || v <= 0 || v > 1000000)
    throw ConfigError("line " + std::to_string(line) + ": " + key +
                      " expects a positive integer, got '" + s + "'");
  return static_cast<int>(v);
}

inline bool to_bool(const std::string& s, int line, const std::string& key) {
  if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "0" || s == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": " + key +
                    " expects true/false, got '" + s + "'");
}

}  // namespace detail

inline std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::automatic: return "auto";
    case OutputFormat::csv: return "csv";
    case OutputFormat::grid_binary: return "grid-binary";
  }
  return "?";
}

// key=value entries, one or more per line, '#' starts a comment
inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool have_problem = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::istringstream words(raw);
    std::string tok;
    while (words >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("line " + std::to_string(line) + ": expected key=value, got '" +
                          tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string val = detail::trim(tok.substr(eq + 1));
      if (key == "problem") {
        if (val.empty()) throw ConfigError("line " + std::to_string(line) + ": empty problem");
        cfg.problem = val;
        have_problem = true;
      } else if (key == "scheme") {
        try {
          cfg.scheme = parse_scheme(val);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("line " + std::to_string(line) + ": " + e.what());
        }
      } else if (key == "cfl") {
        cfg.cfl = detail::to_double(val, line, key);
        if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0))
          throw ConfigError("line " + std::to_string(line) + ": cfl must lie in (0, 1)");
      } else if (key == "eps0") {
        cfg.eps0 = detail::to_double(val, line, key);
        if (!(cfg.eps0 > 0.0))
          throw ConfigError("line " + std::to_string(line) + ": eps0 must be positive");
      } else if (key == "theta") {
        cfg.theta = detail::to_double(val, line, key);
        if (!(cfg.theta >= 1.0 && cfg.theta <= 2.0))
          throw ConfigError("line " + std::to_string(line) + ": theta must lie in [1, 2]");
      } else if (key == "tau_interface") {
        cfg.tau_interface = detail::to_double(val, line, key);
      } else if (key == "tau_smooth") {
        cfg.tau_smooth = detail::to_double(val, line, key);
      } else if (key == "hybrid") {
        if (val == "auto") cfg.hybrid.reset();
        else cfg.hybrid = detail::to_bool(val, line, key);
      } else if (key == "nx") {
        cfg.nx = detail::to_int(val, line, key);
      } else if (key == "ny") {
        cfg.ny = detail::to_int(val, line, key);
      } else if (key == "t_final") {
        cfg.t_final = detail::to_double(val, line, key);
        if (!(*cfg.t_final > 0.0))
          throw ConfigError("line " + std::to_string(line) + ": t_final must be positive");
      } else if (key == "snapshots") {
        std::vector<double> ts;
        std::istringstream list(val);
        std::string item;
        while (std::getline(list, item, ',')) ts.push_back(detail::to_double(detail::trim(item), line, key));
        for (std::size_t k = 0; k < ts.size(); ++k)
          if (ts[k] < 0.0 || (k > 0 && ts[k] <= ts[k - 1]))
            throw ConfigError("line " + std::to_string(line) +
                              ": snapshots must be increasing and non-negative");
        cfg.snapshots = ts;
      } else if (key == "format") {
        if (val == "auto") cfg.format = OutputFormat::automatic;
        else if (val == "csv") cfg.format = OutputFormat::csv;
        else if (val == "grid-binary") cfg.format = OutputFormat::grid_binary;
        else throw ConfigError("line " + std::to_string(line) + ": unknown format '" + val + "'");
      } else if (key == "reference") {
        cfg.reference = detail::to_bool(val, line, key);
      } else if (key == "out") {
        cfg.out = val;
      } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
      }
    }
  }
  if (!have_problem) throw ConfigError("line " + std::to_string(line) + ": missing problem");
  return cfg;
}

// Canonical text; omitting `out` gives the part that determines the results.
inline std::string serialize_config(const RunConfig& c, bool with_output = true) {
  std::ostringstream s;
  s << "problem=" << c.problem << "\n"
    << "scheme=" << to_string(c.scheme) << "\n"
    << "cfl=" << detail::fmt_double(c.cfl) << "\n"
    << "eps0=" << detail::fmt_double(c.eps0) << "\n"
    << "theta=" << detail::fmt_double(c.theta) << "\n"
    << "tau_interface=" << detail::fmt_double(c.tau_interface) << "\n"
    << "tau_smooth=" << detail::fmt_double(c.tau_smooth) << "\n"
    << "hybrid=" << (c.hybrid ? (*c.hybrid ? "true" : "false") : "auto") << "\n";
  if (c.nx) s << "nx=" << *c.nx << "\n";
  if (c.ny) s << "ny=" << *c.ny << "\n";
  if (c.t_final) s << "t_final=" << detail::fmt_double(*c.t_final) << "\n";
  if (c.snapshots) {
    s << "snapshots=";
    for (std::size_t k = 0; k < c.snapshots->size(); ++k)
      s << (k ? "," : "") << detail::fmt_double((*c.snapshots)[k]);
    s << "\n";
  }
  s << "reference=" << (c.reference ? "true" : "false") << "\n";
  if (with_output) s << "format=" << to_string(c.format) << "\n" << "out=" << c.out << "\n";
  return s.str();
}

// 64-bit FNV-1a of the canonical serialization without output settings
inline std::uint64_t config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize_config(c, false)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mfluid
