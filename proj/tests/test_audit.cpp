#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fhc/audit.hpp"
#include "fhc/spectral.hpp"

using namespace fhc;

namespace {
double rel_err(double got, double want) {
  return std::fabs(got - want) / (std::fabs(want) + 1e-300);
}

VectorField identity_field(int N) {
  VectorField X;
  X.N = N;
  X.X = [](const Vec3& x) { return x; };
  X.div = [N](const Vec3&) { return static_cast<double>(N); };
  X.support_radius = std::numeric_limits<double>::infinity();
  return X;
}

Samples1D gaussian_samples(double A, int n) {
  return make_samples(
      A, n, [](double x) { return std::exp(-x * x); },
      [](double x) { return -2.0 * x * std::exp(-x * x); });
}
}  // namespace

TEST_CASE("two-point divergence kernels") {
  const Vec3 x{0.7, 0.0, 0.0}, y{-0.4, 0.0, 0.0};
  SUBCASE("X = x gives the constant kernel values") {
    for (int N : {1, 3}) {
      const VectorField X = identity_field(N);
      const double s = 0.3, alpha = 0.5;
      // div = N and (X(x)-X(y)).(x-y)/|x-y|^2 = 1
      CHECK(rel_err(frac_div_kernel(X, x, y, s), N - 0.5 * (N + 2 * s)) < 1e-14);
      CHECK(rel_err(riesz_div_kernel(X, x, y, alpha), N - 0.5 * (N - alpha)) < 1e-14);
    }
  }
  SUBCASE("constant fields have zero kernel") {
    VectorField X;
    X.N = 1;
    X.X = [](const Vec3&) { return Vec3{2.0, 0.0, 0.0}; };
    X.div = [](const Vec3&) { return 0.0; };
    CHECK(std::fabs(divergence_kernel(X, x, y, 0.9)) < 1e-15);
  }
  SUBCASE("symmetry in (x, y)") {
    const VectorField X = cutoff_family(2, 1);
    CHECK(rel_err(frac_div_kernel(X, x, y, 0.4), frac_div_kernel(X, y, x, 0.4)) <
          1e-14);
  }
  CHECK_THROWS_AS(divergence_kernel(identity_field(1), x, x, 0.5),
                  std::invalid_argument);
}

TEST_CASE("cutoff family") {
  CHECK(cutoff_phi(0.5, 1.0) == 1.0);
  CHECK(cutoff_phi(2.5, 1.0) == 0.0);
  CHECK(cutoff_phi(1.5, 1.0) == doctest::Approx(0.5));
  // C^1 join: finite-difference derivative matches everywhere
  for (double r : {0.5, 1.1, 1.5, 1.9, 2.5}) {
    const double fd = (cutoff_phi(r + 1e-6, 1.0) - cutoff_phi(r - 1e-6, 1.0)) / 2e-6;
    CHECK(std::fabs(cutoff_phi_deriv(r, 1.0) - fd) < 1e-6);
  }
  const VectorField X = cutoff_family(3, 1);
  CHECK(X.support_radius == 6.0);
  // div X from the radial formula matches a finite-difference divergence
  for (double x0 : {0.5, 3.5, 4.9}) {
    const double fd =
        (X.X({x0 + 1e-6, 0, 0})[0] - X.X({x0 - 1e-6, 0, 0})[0]) / 2e-6;
    CHECK(std::fabs(X.div({x0, 0, 0}) - fd) < 1e-5);
  }
  CHECK_THROWS_AS(cutoff_family(0, 1), std::invalid_argument);
}

TEST_CASE("fractional pairing on smooth compact data") {
  const double A = 8.0, s = 0.3;
  const int n = 1024;
  const Samples1D S = gaussian_samples(A, n);
  // companion (-Delta)^s u from a much larger periodic box at the same
  // spacing: the |k|^{2s} cusp at k = 0 makes the small-box multiplier too
  // coarse for these tolerances
  const double Lbig = 2048.0;
  const Grid gb = make_grid(1, Lbig, static_cast<int>(2.0 * Lbig / S.h()));
  const Field ub = make_field(
      gb, [](const std::array<double, 3>& x) { return std::exp(-x[0] * x[0]); });
  const Field lapb = frac_laplacian(ub, s);
  const int i0 = static_cast<int>((Lbig - A) / S.h() + 0.5);
  std::vector<double> lap(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    lap[static_cast<std::size_t>(i)] = lapb.v[static_cast<std::size_t>(i0 + i)];

  SUBCASE("residual against the integrated-by-parts side") {
    const VectorField X = cutoff_family(4, 1);
    const KernelPair pair = pairing_check_laplacian(S, lap, X, s);
    CHECK(pair.residual < 1e-4);
  }
  SUBCASE("excluded-strip decay exponent is 2 - 2s") {
    const VectorField X = cutoff_family(4, 1);
    const double expo = epsilon_sweep_exponent(
        [&](int m) { return pairing_lhs_laplacian(S, X, s, m, false); },
        {1, 2, 4, 8, 16});
    CHECK(std::fabs(expo - (2.0 - 2.0 * s)) < 0.1);
  }
  SUBCASE("X = x closes the loop onto the seminorm") {
    const VectorField X = identity_field(1);
    const double lhs = pairing_lhs_laplacian(S, X, s, 1);
    const double want = 0.5 * (1.0 - 2.0 * s) * gagliardo_seminorm2(ub, s);
    CHECK(rel_err(lhs, want) < 1e-3);
  }
}

TEST_CASE("riesz pairing on smooth compact data") {
  const double A = 8.0, alpha = 0.5;
  const int n = 1024;
  const Samples1D H = gaussian_samples(A, n);
  const VectorField X = cutoff_family(4, 1);
  SUBCASE("residual against the potential side") {
    const KernelPair pair = pairing_check_riesz(H, X, alpha);
    CHECK(pair.residual < 1e-4);
  }
  SUBCASE("excluded-strip decay exponent is alpha") {
    const double expo = epsilon_sweep_exponent(
        [&](int m) { return pairing_lhs_riesz(H, X, alpha, m, false); },
        {1, 2, 4, 8, 16});
    CHECK(std::fabs(expo - alpha) < 0.1);
  }
}

TEST_CASE("assembled radial audit recovers the integration-by-parts limits") {
  FunctionalContext ctx;  // N=3, s=1/2, alpha=2, p=2
  const RadialField u =
      make_radial_field(2048, 48.0, [](double r) { return std::exp(-0.5 * r * r); });
  const AuditReport rep = pohozaev_full_audit(u, ctx, {4, 8, 16});
  const BaseIntegrals q = base_integrals(u, ctx);
  // each windowed one-sided integral tends to its coefficient times the base
  // integral for ANY field, solution or not
  CHECK(rel_err(rep.dirichlet_limit, 0.5 * (3.0 - 2.0 * ctx.s) * q.a) < 1e-2);
  CHECK(rel_err(rep.mass_limit, 0.5 * 3.0 * ctx.mu() * q.b) < 1e-2);
  CHECK(rel_err(rep.riesz_limit, 0.5 * (3.0 + ctx.alpha) * q.d) < 1e-2);
  CHECK_FALSE(rep.caveat.empty());
  CHECK(rep.cutoff_indices.size() == 3);
  CHECK(rep.dirichlet_term.size() == 3);
}
