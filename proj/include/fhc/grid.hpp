#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhc/constants.hpp"

namespace fhc {

/// Periodic box [-L, L)^N sampled with P points per axis, spacing h = 2L/P.
struct Grid {
  int N = 1;
  double L = 1.0;
  int P = 8;
  double h = 0.25;

  std::size_t size() const {
    std::size_t n = 1;
    for (int d = 0; d < N; ++d) n *= static_cast<std::size_t>(P);
    return n;
  }
  /// Coordinate of index i along one axis.
  double coord(int i) const { return -L + h * i; }
  /// Cell volume h^N.
  double cell() const { return std::pow(h, N); }
  /// Unshifted wavenumber of FFT bin m along one axis: k = pi*j/L with
  /// j = m for m <= P/2, j = m-P otherwise.
  double wavenumber(int m) const {
    const int j = (m <= P / 2) ? m : m - P;
    return pi * j / L;
  }
  bool operator==(const Grid&) const = default;
};

inline bool is_power_of_two(int p) { return p > 0 && (p & (p - 1)) == 0; }

inline Grid make_grid(int N, double L, int P) {
  if (N < 1 || N > 3) throw std::invalid_argument("make_grid: N must be 1, 2 or 3");
  if (L <= 0.0) throw std::invalid_argument("make_grid: L must be positive");
  if (P < 8 || !is_power_of_two(P))
    throw std::invalid_argument("make_grid: P must be a power of two >= 8");
  return Grid{N, L, P, 2.0 * L / P};
}

struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(g.size(), 0.0) {}

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

/// Flat index -> lattice coordinates, row-major.
inline std::array<int, 3> unflatten(const Grid& g, std::size_t idx) {
  std::array<int, 3> c{0, 0, 0};
  for (int d = g.N - 1; d >= 0; --d) {
    c[d] = static_cast<int>(idx % g.P);
    idx /= g.P;
  }
  return c;
}

inline Field make_field(const Grid& g,
                        const std::function<double(const std::array<double, 3>&)>& f) {
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto c = unflatten(g, i);
    std::array<double, 3> x{0, 0, 0};
    for (int d = 0; d < g.N; ++d) x[d] = g.coord(c[d]);
    u.v[i] = f(x);
  }
  return u;
}

inline Field make_radial_field(const Grid& g, const std::function<double(double)>& f) {
  return make_field(g, [&](const std::array<double, 3>& x) {
    double r2 = 0;
    for (int d = 0; d < g.N; ++d) r2 += x[d] * x[d];
    return f(std::sqrt(r2));
  });
}

inline double inner(const Field& a, const Field& b) {
  if (a.grid != b.grid) throw std::invalid_argument("inner: grid mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.v[i] * b.v[i];
  return s * a.grid.cell();
}

inline double mass2(const Field& u) { return inner(u, u); }

inline double l1_mass(const Field& u) {
  double s = 0;
  for (double x : u.v) s += std::fabs(x);
  return s * u.grid.cell();
}

inline Field& axpy(Field& y, double a, const Field& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
  return y;
}

inline Field scaled(const Field& u, double a) {
  Field r = u;
  for (double& x : r.v) x *= a;
  return r;
}

// --- flat binary serialization: header (N, P, L as little-endian 64-bit),
// --- then P^N float64 values in row-major order.

inline void write_field(const Field& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + path);
  const std::uint64_t n = static_cast<std::uint64_t>(u.grid.N);
  const std::uint64_t p = static_cast<std::uint64_t>(u.grid.P);
  const double L = u.grid.L;
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&p), 8);
  out.write(reinterpret_cast<const char*>(&L), 8);
  out.write(reinterpret_cast<const char*>(u.v.data()),
            static_cast<std::streamsize>(u.v.size() * sizeof(double)));
}

inline Field read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path);
  std::uint64_t n = 0, p = 0;
  double L = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&p), 8);
  in.read(reinterpret_cast<char*>(&L), 8);
  Field u(make_grid(static_cast<int>(n), L, static_cast<int>(p)));
  in.read(reinterpret_cast<char*>(u.v.data()),
          static_cast<std::streamsize>(u.v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_field: truncated file " + path);
  return u;
}

/// CSV export (x, value); 1D fields only.
inline void write_field_csv(const Field& u, const std::string& path) {
  if (u.grid.N != 1) throw std::invalid_argument("write_field_csv: N=1 only");
  std::ofstream out(path);
  out << "x,value\n";
  char buf[64];
  for (int i = 0; i < u.grid.P; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", u.grid.coord(i), u.v[i]);
    out << buf;
  }
}

}  // namespace fhc
