#pragma once

// Fourier-multiplier operators on the periodic box: fractional Laplacian
// |k|^{2s}, Riesz potential |k|^{-alpha} (zero mode dropped), Gagliardo
// seminorm, and dilation u(./theta).

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fhc/grid.hpp"

namespace fhc {

namespace detail {

struct R2CWorkspace {
  Grid grid;
  std::vector<double> real;
  std::vector<std::complex<double>> spec;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit R2CWorkspace(const Grid& g) : grid(g) {
    const int P = g.P;
    std::size_t nr = g.size();
    std::size_t nc = nr / P * (P / 2 + 1);
    real.resize(nr);
    spec.resize(nc);
    std::vector<int> dims(g.N, P);
    fwd = fftw_plan_dft_r2c(g.N, dims.data(), real.data(),
                            reinterpret_cast<fftw_complex*>(spec.data()),
                            FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r(g.N, dims.data(),
                            reinterpret_cast<fftw_complex*>(spec.data()),
                            real.data(), FFTW_ESTIMATE);
    if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
  }
  ~R2CWorkspace() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
  R2CWorkspace(const R2CWorkspace&) = delete;
  R2CWorkspace& operator=(const R2CWorkspace&) = delete;

  /// Visit every r2c bin: flat index into spec, squared |k|, and the
  /// conjugate-symmetry weight (1 for self-paired bins, 2 otherwise).
  template <class F>
  void for_each_bin(F&& f) const {
    const int P = grid.P;
    const int half = P / 2 + 1;
    std::size_t idx = 0;
    const std::size_t outer = spec.size() / half;
    for (std::size_t o = 0; o < outer; ++o) {
      double k2o = 0;
      std::size_t rem = o;
      for (int d = grid.N - 2; d >= 0; --d) {
        const int m = static_cast<int>(rem % P);
        rem /= P;
        const double k = grid.wavenumber(m);
        k2o += k * k;
      }
      for (int m = 0; m < half; ++m, ++idx) {
        const double k = grid.wavenumber(m);
        const double w = (m == 0 || m == P / 2) ? 1.0 : 2.0;
        f(idx, k2o + k * k, w);
      }
    }
  }
};

/// Apply a radial Fourier multiplier g(|k|^2) in place.
inline void apply_multiplier(Field& u, const std::function<double(double)>& g) {
  R2CWorkspace ws(u.grid);
  ws.real = u.v;
  fftw_execute(ws.fwd);
  ws.for_each_bin([&](std::size_t idx, double k2, double) { ws.spec[idx] *= g(k2); });
  fftw_execute(ws.bwd);
  const double scale = 1.0 / static_cast<double>(u.grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u.v[i] = ws.real[i] * scale;
}

}  // namespace detail

/// (-Delta)^s u via the multiplier |k|^{2s}.
inline Field frac_laplacian(const Field& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("frac_laplacian: s in (0,1)");
  Field r = u;
  detail::apply_multiplier(r, [s](double k2) { return std::pow(k2, s); });
  return r;
}

/// Riesz potential I_alpha * u via |k|^{-alpha}; the zero mode is dropped
/// (mean-zero convention on the periodic box).
inline Field riesz_convolve(const Field& u, double alpha) {
  if (!(alpha > 0.0 && alpha < u.grid.N))
    throw std::invalid_argument("riesz_convolve: alpha in (0,N)");
  Field r = u;
  detail::apply_multiplier(r, [alpha](double k2) {
    return k2 == 0.0 ? 0.0 : std::pow(k2, -alpha / 2.0);
  });
  return r;
}

/// Squared Gagliardo seminorm [u]_s^2 = sum over modes of |k|^{2s} |u_hat|^2,
/// normalized so that it matches h^N * sum u * ((-Delta)^s u).
inline double gagliardo_seminorm2(const Field& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("gagliardo_seminorm2: s in (0,1)");
  detail::R2CWorkspace ws(u.grid);
  ws.real = u.v;
  fftw_execute(ws.fwd);
  double acc = 0;
  ws.for_each_bin([&](std::size_t idx, double k2, double w) {
    if (k2 == 0.0) return;
    acc += w * std::pow(k2, s) * std::norm(ws.spec[idx]);
  });
  return acc * u.grid.cell() / static_cast<double>(u.grid.size());
}

/// D-term inner product <I_alpha * a, b> = h^N sum (I_alpha*a) b, done in
/// Fourier space (one forward transform per argument, no inverse).
inline double riesz_inner(const Field& a, const Field& b, double alpha) {
  if (a.grid != b.grid) throw std::invalid_argument("riesz_inner: grid mismatch");
  detail::R2CWorkspace wa(a.grid), wb(b.grid);
  wa.real = a.v;
  wb.real = b.v;
  fftw_execute(wa.fwd);
  fftw_execute(wb.fwd);
  double acc = 0;
  wa.for_each_bin([&](std::size_t idx, double k2, double w) {
    if (k2 == 0.0) return;
    const auto z = wa.spec[idx] * std::conj(wb.spec[idx]);
    acc += w * std::pow(k2, -alpha / 2.0) * z.real();
  });
  return acc * a.grid.cell() / static_cast<double>(a.grid.size());
}

/// Dilation u(./theta) by linear interpolation with zero extension outside
/// the box. theta == 1 returns the input unchanged. Throws if the dilation
/// would push non-negligible values of u out of the box.
inline Field dilate(const Field& u, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("dilate: theta must be positive");
  if (theta == 1.0) return u;
  const Grid& g = u.grid;

  if (theta > 1.0) {
    // support grows by theta; u must vanish where it would leave the box
    double umax = 0, lost = 0;
    const double cutoff = g.L / theta;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto c = unflatten(g, i);
      double xmax = 0;
      for (int d = 0; d < g.N; ++d) xmax = std::max(xmax, std::fabs(g.coord(c[d])));
      umax = std::max(umax, std::fabs(u.v[i]));
      if (xmax > cutoff) lost = std::max(lost, std::fabs(u.v[i]));
    }
    if (lost > 1e-10 * umax)
      throw std::domain_error("dilate: support would leave the box");
  }

  auto sample = [&](double x) {
    // fractional index of x along one axis
    return (x + g.L) / g.h;
  };
  Field r(g);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto c = unflatten(g, i);
    double w[3];
    int base[3];
    bool outside = false;
    for (int d = 0; d < g.N; ++d) {
      const double x = g.coord(c[d]) / theta;
      if (x < -g.L || x >= g.L - g.h) {
        outside = true;
        break;
      }
      const double t = sample(x);
      base[d] = static_cast<int>(std::floor(t));
      w[d] = t - base[d];
    }
    if (outside) continue;
    double val = 0;
    const int corners = 1 << g.N;
    for (int m = 0; m < corners; ++m) {
      double cw = 1;
      std::size_t idx = 0;
      for (int d = 0; d < g.N; ++d) {
        const int off = (m >> d) & 1;
        cw *= off ? w[d] : 1.0 - w[d];
        idx = idx * g.P + static_cast<std::size_t>(base[d] + off);
      }
      val += cw * u.v[idx];
    }
    r.v[i] = val;
  }
  return r;
}

/// Band-limited dilation for 1D fields: evaluates the trigonometric
/// interpolant of u at x/theta. O(P^2), intended for modest P.
inline Field dilate_spectral_1d(const Field& u, double theta) {
  if (u.grid.N != 1) throw std::invalid_argument("dilate_spectral_1d: N=1 only");
  if (!(theta > 0.0)) throw std::invalid_argument("dilate_spectral_1d: theta > 0");
  if (theta == 1.0) return u;
  const Grid& g = u.grid;
  detail::R2CWorkspace ws(g);
  ws.real = u.v;
  fftw_execute(ws.fwd);
  Field r(g);
  const int half = g.P / 2 + 1;
  for (int i = 0; i < g.P; ++i) {
    const double x = g.coord(i) / theta;
    double val = 0;
    for (int m = 0; m < half; ++m) {
      const double k = g.wavenumber(m);
      const double w = (m == 0 || m == g.P / 2) ? 1.0 : 2.0;
      // series is relative to the box origin -L
      const std::complex<double> ph(std::cos(k * (x + g.L)), std::sin(k * (x + g.L)));
      val += w * (ws.spec[m] * ph).real();
    }
    r.v[i] = val / g.P;
  }
  return r;
}

}  // namespace fhc
