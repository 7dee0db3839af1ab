#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fhc {

// Gauss-Kronrod 15(7) node/weight pairs on [-1,1].
namespace gk {
inline constexpr std::array<double, 15> xk = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
inline constexpr std::array<double, 15> wk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
inline constexpr std::array<double, 7> wg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};
}  // namespace gk

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

template <typename F>
QuadResult gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fv = f(c + hw * gk::xk[i]);
    resk += gk::wk[i] * fv;
    if (i % 2 == 1) resg += gk::wg[i / 2] * fv;
  }
  return {resk * hw, std::fabs(resk - resg) * hw};
}

/// Adaptive bisection quadrature; tolerances combine as
/// |err| <= max(abs_tol, rel_tol*|I|) on each accepted panel share.
template <typename F>
double adaptive_quad(const F& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, int max_depth = 48) {
  struct Panel {
    double a, b;
    QuadResult q;
    int depth;
  };
  std::vector<Panel> stack{{a, b, gk15(f, a, b), 0}};
  double total = 0.0;
  double scale = std::fabs(stack.front().q.value);
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double tol =
        std::max(abs_tol, rel_tol * std::max(scale, std::fabs(total))) *
        std::fabs(p.b - p.a) / std::fabs(b - a);
    if (p.q.error <= tol || p.depth >= max_depth) {
      total += p.q.value;
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    stack.push_back({p.a, m, gk15(f, p.a, m), p.depth + 1});
    stack.push_back({m, p.b, gk15(f, m, p.b), p.depth + 1});
    scale = std::max(scale, std::fabs(total));
  }
  return total;
}

// 8-point Gauss-Legendre on [-1,1], used for fixed panel quadratures.
namespace gl8 {
inline constexpr std::array<double, 8> x = {
    -0.960289856497536, -0.796666477413627, -0.525532409916329,
    -0.183434642495650, 0.183434642495650,  0.525532409916329,
    0.796666477413627,  0.960289856497536};
inline constexpr std::array<double, 8> w = {
    0.101228536290376, 0.222381034453374, 0.313706645877887,
    0.362683783378362, 0.362683783378362, 0.313706645877887,
    0.222381034453374, 0.101228536290376};
}  // namespace gl8

template <typename F>
double gauss8(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double r = 0.0;
  for (int i = 0; i < 8; ++i) r += gl8::w[i] * f(c + hw * gl8::x[i]);
  return r * hw;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rel_residual = 0.0;  // rms residual / rms of centered ordinates
};

/// Least-squares line through (x_i, y_i).
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.rel_residual = ss_tot > 0 ? std::sqrt(ss_res / ss_tot) : 0.0;
  return fit;
}

inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

}  // namespace fhc
