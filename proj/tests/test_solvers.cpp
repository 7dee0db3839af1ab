#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fhc/solvers.hpp"

using namespace fhc;

namespace {
double rel_err(double got, double want) {
  return std::fabs(got - want) / (std::fabs(want) + 1e-300);
}
}  // namespace

TEST_CASE("radial dilation") {
  const RadialField u =
      make_radial_field(1024, 24.0, [](double r) { return std::exp(-r * r); });
  const RadialField same = rf_dilate(u, 1.0);
  for (int j = 0; j < u.n(); ++j) CHECK(same.v[j] == u.v[j]);
  const double th = 1.5;
  const RadialField d = rf_dilate(u, th);
  CHECK(rel_err(rf_mass2(d), std::pow(th, 3.0) * rf_mass2(u)) < 1e-3);
  CHECK_THROWS_AS(rf_dilate(u, -1.0), std::invalid_argument);
}

TEST_CASE("pohozaev projection") {
  FunctionalContext ctx;  // boson-star context: N=3, s=1/2, alpha=2, p=2
  const RadialField u =
      make_radial_field(1024, 24.0, [](double r) { return 2.0 * std::exp(-r * r); });
  const Projection pr = pohozaev_project(u, ctx);
  const EnergyBreakdown e = evaluate(pr.u, ctx);
  CHECK(e.r1 < 1e-4);
  // re-projecting an on-manifold iterate moves theta only by grid error
  const Projection pr2 = pohozaev_project(pr.u, ctx);
  CHECK(std::fabs(pr2.theta - 1.0) < 1e-2);
}

TEST_CASE("fixed-frequency ground state (coarse run)") {
  FunctionalContext ctx;  // mu = 1
  SolverOptions opts;
  opts.max_iter = 3000;
  opts.tol_g = 1e-5;
  const Solution sol = solve_fixed_mu(ctx, default_init(1024, 24.0, ctx), opts);
  REQUIRE(sol.converged);
  CHECK(sol.diagnosis.empty());
  CHECK(sol.grad_norm <= opts.tol_g);
  CHECK(sol.pohozaev_res <= opts.tol_p);
  CHECK(sol.energies.J > 0.0);
  // positive, radially nonincreasing bulk profile
  double mx = 0;
  for (double v : sol.u.v) mx = std::max(mx, v);
  int bad = 0;
  for (int j = 0; j + 1 < sol.u.n(); ++j) {
    if (sol.u.v[j] < -1e-8 * mx) ++bad;
    if (sol.u.v[j + 1] > sol.u.v[j] + 1e-8 * mx) ++bad;
  }
  CHECK(bad == 0);
  CHECK(sol.history.size() == static_cast<std::size_t>(sol.iterations) + 1);
}

TEST_CASE("prescribed-mass descent (coarse run)") {
  FunctionalContext ctx;
  ctx.nl = make_power(1.8);
  ctx.m = 1.0;
  SolverOptions opts;
  opts.max_iter = 8000;
  opts.tol_g = 1e-5;
  opts.tol_p = 1e-2;
  // at p = 1.8 the unit-mass minimizer has multiplier ~3e-3 and is a few
  // hundred units wide, so the box must be large
  const Solution sol = solve_normalized(ctx, default_init(1024, 5632.0, ctx, 1.0), opts);
  REQUIRE(sol.converged);
  CHECK(rel_err(sol.m, 1.0) < 1e-12);  // exact renormalization
  CHECK(std::exp(sol.lambda) > 0.0);
  CHECK(sol.energies.L < 0.0);
  CHECK(sol.grad_norm <= opts.tol_g);
  CHECK_THROWS_AS(solve_normalized(FunctionalContext{},
                                   default_init(64, 8.0, FunctionalContext{})),
                  std::invalid_argument);
}

TEST_CASE("excited search returns distinct candidates for n = 2") {
  FunctionalContext ctx;
  SolverOptions opts;
  opts.max_iter = 1500;
  opts.tol_g = 1e-4;
  PathSpec spec;
  spec.n = 2;
  spec.R = 4.0;
  spec.eps = 1e-2;
  PathEvaluator ev{spec, ctx, Grid{}};
  const auto out = excited_search(2, ctx, ev, 1024, 80.0, opts);
  REQUIRE(out.size() == 2);
  // the companion ground state run
  CHECK(out[1].converged);
  // the candidate either converged to something distinct or says why not
  if (out[0].converged)
    CHECK(out[0].energies.J >= out[1].energies.J - 1e-6);
  else
    CHECK_FALSE(out[0].diagnosis.empty());
}

TEST_CASE("palais-smale-pohozaev traces") {
  CHECK(psp_diagnostic({}).I_m.empty());
  std::vector<IterRecord> hist(32);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    hist[i].objective = -1.0 / (1.0 + static_cast<double>(i));
    hist[i].I_m = hist[i].objective;
  }
  const PSPReport rep = psp_diagnostic(hist);
  CHECK(rep.I_m.size() == hist.size());
  CHECK_FALSE(rep.vanishing_flag);  // objective stays clearly negative
  for (std::size_t i = 0; i < hist.size(); ++i)
    hist[i].objective = 1e-9 / static_cast<double>(i + 1);
  CHECK(psp_diagnostic(hist).vanishing_flag);
}
