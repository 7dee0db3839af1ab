#pragma once

// Batch front end: dispatch a validated RunConfig to the right computation
// and emit the artifact tree <outdir>/<mode>/<hash>/{solution.bin,
// energies.csv, report.json, manifest.txt}. Exit codes: 0 success,
// 2 non-convergence, 3 config error, 4 hypothesis inapplicable.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhc/audit.hpp"
#include "fhc/config.hpp"
#include "fhc/functionals.hpp"
#include "fhc/paths.hpp"
#include "fhc/radial.hpp"
#include "fhc/solvers.hpp"

namespace fhc {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  exit_ok = 0,
  exit_no_convergence = 2,
  exit_config_error = 3,
  exit_inapplicable = 4,
};

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline int worker_count() {
  if (const char* env = std::getenv("FHC_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

/// Fan a sequence of independent jobs over FHC_WORKERS threads, preserving
/// result order.
template <typename R, typename F>
std::vector<R> parallel_map(int njobs, const F& job) {
  const int workers = std::min(worker_count(), njobs);
  std::vector<R> out(static_cast<std::size_t>(njobs));
  if (workers <= 1) {
    for (int i = 0; i < njobs; ++i) out[static_cast<std::size_t>(i)] = job(i);
    return out;
  }
  std::vector<std::future<void>> fs;
  for (int w = 0; w < workers; ++w)
    fs.push_back(std::async(std::launch::async, [&, w] {
      for (int i = w; i < njobs; i += workers) out[static_cast<std::size_t>(i)] = job(i);
    }));
  for (auto& f : fs) f.get();
  return out;
}

inline std::string render_config(const IniData& data) {
  std::ostringstream os;
  for (const auto& [sec, kv] : data) {
    os << "[" << sec << "]\n";
    for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  }
  return os.str();
}

inline std::string energies_csv(const EnergyBreakdown& e, const RunConfig& c) {
  std::ostringstream os;
  os << "config_hash,seed,backend," << EnergyBreakdown::csv_header() << "\n";
  os << c.hash << "," << c.seed << ",radial";
  for (double v : {e.dirichlet, e.mass2, e.D_value, e.J, e.I_m, e.P, e.L, e.r1, e.r2})
    os << "," << fmt17(v);
  os << "\n";
  return os.str();
}

inline std::string solution_bin(const RadialField& u) {
  std::string out;
  auto push64 = [&](std::uint64_t v) { out.append(reinterpret_cast<const char*>(&v), 8); };
  push64(3);  // dimension
  push64(static_cast<std::uint64_t>(u.P));
  double L = u.L;
  out.append(reinterpret_cast<const char*>(&L), 8);
  out.append(reinterpret_cast<const char*>(u.v.data()), u.v.size() * sizeof(double));
  return out;
}

inline std::string psp_csv(const std::vector<IterRecord>& hist) {
  std::ostringstream os;
  os << "iter,objective,grad_norm,I_m,dIm_dlambda,dual_norm,P\n";
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const IterRecord& r = hist[i];
    os << i;
    for (double v :
         {r.objective, r.grad_norm, r.I_m, r.dIm_dlambda, r.dual_norm, r.P})
      os << "," << fmt17(v);
    os << "\n";
  }
  return os.str();
}

}  // namespace detail

struct RunResult {
  int exit_code = exit_ok;
  std::filesystem::path artifact_dir;
  std::string message;
};

inline FunctionalContext config_context(const RunConfig& c) {
  FunctionalContext ctx;
  ctx.N = c.N;
  ctx.s = c.s;
  ctx.alpha = c.alpha;
  ctx.lambda = c.lambda;
  ctx.m = c.m;
  ctx.nl = config_nonlinearity(c);
  return ctx;
}

inline PathSpec config_path_spec(const RunConfig& c) {
  PathSpec spec;
  spec.n = c.path_n;
  spec.variant = c.path_variant == "simple_bumps" ? PathVariant::simple_bumps
                                                  : PathVariant::annuli;
  spec.sigma0 = c.path_sigma0;
  spec.R = c.path_R;
  spec.eps = c.path_eps;
  return spec;
}

inline RunResult run(const RunConfig& c) {
  namespace fs = std::filesystem;
  using nlohmann::json;

  RunResult res;
  res.artifact_dir = fs::path(c.outdir) / c.mode / c.hash;
  fs::create_directories(res.artifact_dir);

  json report;
  report["config_hash"] = c.hash;
  report["seed"] = c.seed;
  report["version"] = kVersion;
  report["mode"] = c.mode;
  report["tolerances"] = {{"tol_g", c.tol_g}, {"tol_p", c.tol_p}};
  report["backend"] = "radial";

  const FunctionalContext ctx = config_context(c);
  SolverOptions opts;
  opts.max_iter = c.max_iter;
  opts.tol_g = c.tol_g;
  opts.tol_p = c.tol_p;
  opts.seed = c.seed;

  auto write_solution = [&](const Solution& sol) {
    detail::atomic_write(res.artifact_dir / "solution.bin", detail::solution_bin(sol.u));
    detail::atomic_write(res.artifact_dir / "energies.csv",
                         detail::energies_csv(sol.energies, c));
    detail::atomic_write(res.artifact_dir / "psp.csv", detail::psp_csv(sol.history));
    report["converged"] = sol.converged;
    report["iterations"] = sol.iterations;
    report["grad_norm"] = sol.grad_norm;
    report["pohozaev_residual"] = sol.pohozaev_res;
    report["lambda"] = sol.lambda;
    report["mu"] = std::exp(sol.lambda);
    report["mass"] = sol.m;
    report["J"] = sol.energies.J;
    report["L"] = sol.energies.L;
    if (!sol.diagnosis.empty()) report["diagnosis"] = sol.diagnosis;
    if (!sol.converged) {
      res.exit_code = exit_no_convergence;
      res.message = "solver did not converge: " + sol.diagnosis;
    }
  };

  if (c.mode == "solve-fixed-mu") {
    write_solution(solve_fixed_mu(ctx, default_init(c.P, c.L, ctx), opts));
  } else if (c.mode == "solve-normalized") {
    write_solution(solve_normalized(ctx, default_init(c.P, c.L, ctx, *c.m), opts));
  } else if (c.mode == "excited") {
    PathEvaluator ev{config_path_spec(c), ctx, Grid{}};
    ev.spec.n = c.path_n;
    const auto candidates = excited_search(c.path_n, ctx, ev, c.P, c.L, opts);
    json arr = json::array();
    bool any = false;
    for (const auto& sol : candidates) {
      arr.push_back({{"converged", sol.converged},
                     {"J", sol.energies.J},
                     {"grad_norm", sol.grad_norm},
                     {"pohozaev_residual", sol.pohozaev_res},
                     {"diagnosis", sol.diagnosis}});
      any = any || sol.converged;
    }
    report["candidates"] = arr;
    if (!candidates.empty()) write_solution(candidates.front());
    if (!any) {
      res.exit_code = exit_no_convergence;
      res.message = "no excited candidate converged";
    }
  } else if (c.mode == "path-audit") {
    const int planP = c.N == 1 ? 1024 : (c.N == 2 ? 256 : 64);
    PathEvaluator ev{config_path_spec(c), ctx, make_grid(c.N, 16.0, planP)};
    const auto ts = sample_polyhedron(c.path_n, c.path_n >= 3 ? 4 : 8);
    const MinimaxEstimate est = estimate_a_n(ev, ts, c.lambda);
    report["n"] = c.path_n;
    report["lambda"] = c.lambda;
    report["a_n_upper"] = est.a_n_upper;
    report["theta_star"] = est.theta;
    report["D_floor"] = est.D_floor;
    report["max_boundary_J"] = est.max_boundary_J;
  } else if (c.mode == "riesz-kernel") {
    std::ostringstream csv;
    csv << "config_hash,tau,F_alpha\n";
    std::vector<double> taus, vals;
    for (int i = 0; i <= 240; ++i) {
      const double tau = 1e-3 * std::pow(1e6, i / 240.0);
      if (std::fabs(tau - 1.0) < 1e-9 && c.alpha <= 1.0) continue;
      const double v = thim_kernel(tau, c.N, c.alpha);
      taus.push_back(tau);
      vals.push_back(v);
      csv << c.hash << "," << detail::fmt17(tau) << "," << detail::fmt17(v) << "\n";
    }
    detail::atomic_write(res.artifact_dir / "kernel.csv", csv.str());
    // compensated-tail flatness and near-1 behavior summaries
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < taus.size(); ++i)
      if (taus[i] >= 50.0) {
        xs.push_back(taus[i]);
        ys.push_back(vals[i] * std::pow(taus[i], c.N - c.alpha));
      }
    double lo = ys.front(), hi = ys.front();
    for (double y : ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    report["tail_compensated_spread"] = (hi - lo) / hi;
    std::vector<double> ds, fs;
    for (int k = 0; k <= 16; ++k) {
      const double delta = 1e-4 * std::pow(1e2, k / 16.0);
      ds.push_back(delta);
      fs.push_back(thim_kernel(1.0 + delta, c.N, c.alpha));
    }
    report["near_one_exponent"] = fit_loglog(ds, fs).slope;
  } else if (c.mode == "asymptotics") {
    PathEvaluator ev{config_path_spec(c), ctx, Grid{}};
    const auto ts = sample_polyhedron(c.path_n, c.path_n >= 3 ? 4 : 8);
    std::vector<double> grid;
    for (int i = 0; i < c.lambda_points; ++i)
      grid.push_back(c.lambda_min +
                     (c.lambda_max - c.lambda_min) * i /
                         std::max(1, c.lambda_points - 1));
    const auto rows = detail::parallel_map<MinimaxEstimate>(
        static_cast<int>(grid.size()),
        [&](int i) { return estimate_a_n(ev, ts, grid[static_cast<std::size_t>(i)]); });
    std::ostringstream csv;
    csv << "config_hash,lambda,n,a_n_upper,ratio,theta_star,D_floor\n";
    for (const auto& est : rows)
      csv << c.hash << "," << detail::fmt17(est.lambda) << "," << est.n << ","
          << detail::fmt17(est.a_n_upper) << ","
          << detail::fmt17(est.a_n_upper / std::exp(est.lambda)) << ","
          << detail::fmt17(est.theta) << "," << detail::fmt17(est.D_floor) << "\n";
    detail::atomic_write(res.artifact_dir / "scan.csv", csv.str());
    double mk = std::numeric_limits<double>::infinity();
    for (const auto& est : rows)
      mk = std::min(mk, 2.0 * est.a_n_upper / std::exp(est.lambda));
    report["m_k_upper"] = mk;
  } else if (c.mode == "pohozaev-audit") {
    const Solution sol = solve_fixed_mu(ctx, default_init(c.P, c.L, ctx), opts);
    write_solution(sol);
    const AuditReport audit = pohozaev_full_audit(sol.u, ctx, {2, 4, 8});
    report["audit"] = {{"cutoff_indices", audit.cutoff_indices},
                       {"dirichlet_term", audit.dirichlet_term},
                       {"mass_term", audit.mass_term},
                       {"riesz_term", audit.riesz_term},
                       {"dirichlet_limit", audit.dirichlet_limit},
                       {"mass_limit", audit.mass_limit},
                       {"riesz_limit", audit.riesz_limit},
                       {"identity_residual", audit.identity_residual},
                       {"direct_r1", audit.direct_r1},
                       {"direct_r2", audit.direct_r2},
                       {"caveat", audit.caveat}};
  } else if (c.mode == "check-growth") {
    const ExponentSet ex = ctx.exps();
    const GrowthReport gr = check_growth(ctx.nl, ex);
    report["exponents"] = {{"q", ex.q}, {"p_m", ex.p_m}, {"p_star", ex.p_star}};
    report["growth"] = {{"exp_zero", gr.exp_zero}, {"exp_inf", gr.exp_inf},
                        {"fitted_C", gr.fitted_C}, {"F2", gr.f2},
                        {"F3", gr.f3},             {"CF2", gr.cf2},
                        {"CF3", gr.cf3},           {"CF4", gr.cf4}};
    double M = 0;
    bool applicable = true;
    try {
      M = quotient_sup(ctx.nl);
    } catch (const std::domain_error&) {
      applicable = false;
    }
    report["quotient_M"] = std::isfinite(M) ? json(M) : json("unbounded");
    if (!applicable || !std::isfinite(M)) {
      res.exit_code = exit_inapplicable;
      res.message = applicable ? "quotient sup unbounded"
                               : "F changes sign in the quotient window";
    }
  }

  std::ostringstream manifest;
  manifest << "hash=" << c.hash << "\n"
           << "version=" << kVersion << "\n"
           << "seed=" << c.seed << "\n"
           << "mode=" << c.mode << "\n"
           << "backend=radial\n"
           << "tol_g=" << detail::fmt17(c.tol_g) << "\n"
           << "tol_p=" << detail::fmt17(c.tol_p) << "\n"
           << "--- config ---\n"
           << detail::render_config(c.raw) << "--- end config ---\n";
  detail::atomic_write(res.artifact_dir / "manifest.txt", manifest.str());
  report["exit_code"] = res.exit_code;
  detail::atomic_write(res.artifact_dir / "report.json", report.dump(2) + "\n");
  return res;
}

/// Re-run the experiment recorded in a manifest and compare artifacts with
/// the originals. Returns exit 0 when byte-identical.
inline RunResult reproduce(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open manifest: " + manifest_path);
  std::string line, config_text, recorded_version;
  bool in_config = false;
  while (std::getline(in, line)) {
    if (line == "--- config ---") {
      in_config = true;
      continue;
    }
    if (line == "--- end config ---") break;
    if (in_config) {
      config_text += line;
      config_text += "\n";
    } else if (line.rfind("version=", 0) == 0) {
      recorded_version = line.substr(8);
    }
  }
  if (config_text.empty()) throw ConfigError("manifest has no embedded config");

  std::istringstream cfg(config_text);
  RunConfig c = validate_config(parse_ini(cfg));
  const fs::path orig = fs::path(c.outdir) / c.mode / c.hash;
  c.outdir = (fs::path(c.outdir) / "rerun").string();
  RunResult rr = run(c);
  if (!recorded_version.empty() && recorded_version != kVersion)
    rr.message = "version mismatch: recorded " + recorded_version + ", running " +
                 kVersion + "; " + rr.message;

  bool identical = true;
  if (fs::exists(orig)) {
    for (const auto& entry : fs::directory_iterator(rr.artifact_dir)) {
      const fs::path other = orig / entry.path().filename();
      if (!fs::exists(other)) continue;
      std::ifstream a(entry.path(), std::ios::binary), b(other, std::ios::binary);
      std::string sa((std::istreambuf_iterator<char>(a)), {});
      std::string sb((std::istreambuf_iterator<char>(b)), {});
      if (sa != sb) identical = false;
    }
  }
  if (!identical) {
    rr.message += (rr.message.empty() ? "" : "; ");
    rr.message += "artifacts differ from recorded run";
    if (rr.exit_code == exit_ok) rr.exit_code = exit_no_convergence;
  }
  return rr;
}

}  // namespace fhc
