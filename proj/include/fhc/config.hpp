#pragma once

// Run configuration: INI-style sections of key = value pairs, validated into
// a RunConfig, plus a stable content hash used to key output directories.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhc/nonlinearity.hpp"

namespace fhc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using IniData = std::map<std::string, std::map<std::string, std::string>>;

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}
}  // namespace detail

inline IniData parse_ini(std::istream& in) {
  IniData data;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    data[section][key] = val;
  }
  return data;
}

inline IniData parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_ini(in);
}

/// FNV-1a over the canonical "section.key=value" lines, sorted.
inline std::string config_hash(const IniData& data) {
  std::vector<std::string> lines;
  for (const auto& [sec, kv] : data)
    for (const auto& [k, v] : kv) lines.push_back(sec + "." + k + "=" + v);
  std::sort(lines.begin(), lines.end());
  std::uint64_t hsh = 14695981039346656037ULL;
  for (const auto& l : lines)
    for (unsigned char c : l) {
      hsh ^= c;
      hsh *= 1099511628211ULL;
    }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hsh));
  return buf;
}

struct RunConfig {
  // [problem]
  int N = 3;
  double s = 0.5;
  double alpha = 2.0;
  std::string nl_name = "power";
  std::map<std::string, double> nl_params;
  double lambda = 0.0;
  std::optional<double> m;
  // [solver]
  std::string mode;
  double tol_g = 1e-6;
  double tol_p = 1e-3;
  int max_iter = 4000;
  std::uint64_t seed = 0;
  // [grid]
  int P = 4096;
  double L = 40.0;
  // [paths]
  int path_n = 1;
  double path_R = 4.0;
  double path_eps = 1e-2;
  double path_sigma0 = 1.0;
  std::string path_variant = "annuli";
  double lambda_min = -6.0, lambda_max = 6.0;
  int lambda_points = 13;
  // [output]
  std::string outdir = "out";

  IniData raw;
  std::string hash;
};

namespace detail {
inline double to_double(const std::string& sec, const std::string& key,
                        const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("[" + sec + "] " + key + ": not a number: '" + v + "'");
  }
}
inline long to_long(const std::string& sec, const std::string& key,
                    const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("[" + sec + "] " + key + ": not an integer: '" + v + "'");
  }
}
}  // namespace detail

inline const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes = {
      "solve-fixed-mu", "solve-normalized", "excited",        "path-audit",
      "riesz-kernel",   "asymptotics",      "pohozaev-audit", "check-growth"};
  return modes;
}

inline RunConfig validate_config(const IniData& data) {
  RunConfig c;
  c.raw = data;
  c.hash = config_hash(data);

  auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
    auto si = data.find(sec);
    if (si == data.end()) return nullptr;
    auto ki = si->second.find(key);
    return ki == si->second.end() ? nullptr : &ki->second;
  };
  auto getd = [&](const std::string& sec, const std::string& key, double def) {
    const std::string* v = get(sec, key);
    return v ? detail::to_double(sec, key, *v) : def;
  };
  auto geti = [&](const std::string& sec, const std::string& key, long def) {
    const std::string* v = get(sec, key);
    return v ? detail::to_long(sec, key, *v) : def;
  };

  c.N = static_cast<int>(geti("problem", "N", 3));
  if (c.N < 1 || c.N > 3) throw ConfigError("[problem] N: must be 1, 2 or 3");
  c.s = getd("problem", "s", 0.5);
  if (!(c.s > 0 && c.s < 1)) throw ConfigError("[problem] s: must lie in (0,1)");
  c.alpha = getd("problem", "alpha", 2.0);
  if (!(c.alpha > 0 && c.alpha < c.N))
    throw ConfigError("[problem] alpha: must lie in (0,N)");
  if (const std::string* v = get("problem", "nonlinearity")) c.nl_name = *v;
  for (const char* key : {"p", "beta", "beta1", "beta2"})
    if (const std::string* v = get("problem", key))
      c.nl_params[key] = detail::to_double("problem", key, *v);
  c.lambda = getd("problem", "lambda", 0.0);
  if (const std::string* v = get("problem", "mu")) {
    const double mu = detail::to_double("problem", "mu", *v);
    if (!(mu > 0)) throw ConfigError("[problem] mu: must be positive");
    c.lambda = std::log(mu);
  }
  if (const std::string* v = get("problem", "m")) {
    c.m = detail::to_double("problem", "m", *v);
    if (!(*c.m > 0)) throw ConfigError("[problem] m: must be positive");
  }

  const std::string* mode = get("solver", "mode");
  if (!mode) throw ConfigError("[solver] mode: required");
  c.mode = *mode;
  if (std::find(known_modes().begin(), known_modes().end(), c.mode) ==
      known_modes().end())
    throw ConfigError("[solver] mode: unknown mode '" + c.mode + "'");
  c.tol_g = getd("solver", "tol_g", 1e-6);
  c.tol_p = getd("solver", "tol_p", 1e-3);
  c.max_iter = static_cast<int>(geti("solver", "max_iter", 4000));
  c.seed = static_cast<std::uint64_t>(geti("solver", "seed", 0));

  c.P = static_cast<int>(geti("grid", "P", 4096));
  if (c.P < 8) throw ConfigError("[grid] P: must be >= 8");
  c.L = getd("grid", "L", 40.0);
  if (!(c.L > 0)) throw ConfigError("[grid] L: must be positive");

  c.path_n = static_cast<int>(geti("paths", "n", 1));
  c.path_R = getd("paths", "R", 4.0);
  c.path_eps = getd("paths", "eps", 1e-2);
  c.path_sigma0 = getd("paths", "sigma0", 1.0);
  if (const std::string* v = get("paths", "variant")) c.path_variant = *v;
  c.lambda_min = getd("paths", "lambda_min", -6.0);
  c.lambda_max = getd("paths", "lambda_max", 6.0);
  c.lambda_points = static_cast<int>(geti("paths", "lambda_points", 13));

  if (const std::string* v = get("output", "dir")) c.outdir = *v;

  if ((c.mode == "solve-normalized") && !c.m)
    throw ConfigError("[problem] m: required for mode solve-normalized");
  return c;
}

inline Nonlinearity config_nonlinearity(const RunConfig& c) {
  return make_nonlinearity(c.nl_name, c.nl_params);
}

}  // namespace fhc
