#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symred/numcheck.hpp"
#include "symred/verify.hpp"

using namespace symred;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  int samples = 200;
  int draws = 5;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

ZeroTestPolicy make_policy(const CommonOpts& c) {
  ZeroTestPolicy p;
  p.samples = c.samples;
  p.param_draws = c.draws;
  p.tolerance = c.tol;
  p.seed = c.seed;
  return p;
}

int run_verify(const CommonOpts& common, const std::vector<std::string>& cases, bool all,
               const std::string& out_path) {
  std::vector<std::string> filter = all ? std::vector<std::string>{} : cases;
  if (!filter.empty()) {
    std::vector<std::string> known;
    for (auto& id : filter)
      if (find_entry(id)) known.push_back(id == "thm2.case5" ? "thm2.case5+" : id);
      else
        std::cerr << "warning: no catalog entry matches '" << id << "'\n";
    if (known.empty()) {
      std::cerr << "warning: empty selection, nothing verified\n";
      CatalogRunReport empty;
      empty.policy = make_policy(common);
      std::string doc = report_to_json(empty);
      if (out_path.empty())
        std::cout << doc;
      else
        std::ofstream(out_path) << doc;
      return 0;
    }
    filter = known;
  }

  CatalogRunReport rep = verify_catalog(make_policy(common), filter);
  std::string doc = report_to_json(rep);
  if (out_path.empty())
    std::cout << doc;
  else
    std::ofstream(out_path) << doc;

  std::cerr << "verified " << rep.entries.size() << " entries, " << rep.controls.size()
            << " negative controls: " << (rep.overall ? "PASS" : "FAIL") << "\n";
  if (!rep.routes_agree) {
    std::cerr << "error: the two verification routes disagree (internal inconsistency)\n";
    return 2;
  }
  return (rep.all_positive_pass && rep.all_controls_fail) ? 0 : 1;
}

int run_detsys(int tau, const std::string& k_text, const std::string& xi_text,
               const std::string& eta_text, const std::vector<int>& split,
               const std::vector<std::string>& coeffs, const std::vector<std::string>& params,
               bool raw) {
  ParseContext ctx;
  ctx.implicit_functions = true;
  for (const auto& p : params) ctx.params.insert(p);

  try {
    Pde pde(parse(k_text, ctx));
    DeterminingSystem sys;
    if (tau == 1) {
      sys = determining_system_tau1(pde, parse(xi_text, ctx), parse(eta_text, ctx));
    } else if (!split.empty()) {
      LaurentAnsatz an = LaurentAnsatz::symbolic(split[0], split[1]);
      for (const auto& c : coeffs) {
        auto eq = c.find('=');
        if (eq == std::string::npos)
          throw SyntaxError("--coeff expects p=EXPR", 0);
        an.coeffs[std::stoi(c.substr(0, eq))] = parse(c.substr(eq + 1), ctx);
      }
      sys = split_laurent_ansatz(pde, an);
    } else {
      Expr residual = determining_residual_tau0(pde, parse(eta_text, ctx));
      sys.residuals.push_back({residual, "tau=0 determining equation for eta"});
    }
    std::cout << sys.str(!raw);
  } catch (const SyntaxError& e) {
    std::cerr << "parse error at offset " << e.offset << ": " << e.what() << "\n";
    return 3;
  }
  return 0;
}

ordered_json stats_json(const ResidualStats& s) {
  return {{"linf", s.linf}, {"l2", s.l2}, {"h_t", s.h_t}, {"h_x", s.h_x},
          {"interior_points", s.interior_points}};
}

int run_reduce(const CommonOpts& common, const std::string& case_id, double c_param, double f0,
               double df0, double anchor, double v0, const std::string& grid,
               double tmax, const std::vector<double>& domain, int levels, bool no_ode,
               const std::string& out_csv, const std::string& out_stats,
               bool have_c, bool have_f0, bool have_df0, bool have_anchor, bool have_v0,
               bool have_tmax) {
  auto entry = find_entry(case_id);
  if (!entry) {
    std::cerr << "error: unknown catalog entry '" << case_id << "'\n";
    return 1;
  }
  if (!entry->reduce && domain.empty()) {
    std::cerr << "error: entry '" << entry->id
              << "' has no reduction defaults; pass --domain lo,hi (and shooting/anchor data)\n";
    return 1;
  }

  ReduceDefaults d = entry->reduce ? *entry->reduce : ReduceDefaults{};
  if (!domain.empty()) {
    d.x_lo = domain[0];
    d.x_hi = domain[1];
  }
  if (have_tmax) d.t1 = tmax;
  if (have_f0) d.f0 = f0;
  if (have_df0) d.df0 = df0;
  if (have_anchor) d.x0 = anchor;
  if (have_v0) d.v0 = v0;
  if (have_c) d.params["c"] = c_param;

  GridSpec spec;
  spec.t0 = d.t0;
  spec.t1 = d.t1;
  spec.x_lo = d.x_lo;
  spec.x_hi = d.x_hi;
  if (!grid.empty()) {
    auto xpos = grid.find('x');
    if (xpos == std::string::npos) {
      std::cerr << "error: --grid expects NTxNX, e.g. 201x201\n";
      return 1;
    }
    spec.nt = std::stoi(grid.substr(0, xpos));
    spec.nx = std::stoi(grid.substr(xpos + 1));
  }

  auto build = [&](const GridSpec& g) {
    if (entry->op.is_tau1()) {
      Tau1PipelineOptions opts;
      opts.constant_profile = no_ode;
      return characteristics_solution_tau1(entry->pde, entry->op, d.params, g, d.f0, d.df0,
                                           opts);
    }
    return tau0_solution(entry->pde, entry->op, d.params, d.x0, d.v0, g);
  };

  try {
    ordered_json summary;
    summary["entry"] = entry->id;
    summary["seed"] = common.seed;
    summary["grid"] = {{"nt", spec.nt}, {"nx", spec.nx}, {"t", {spec.t0, spec.t1}},
                       {"x", {spec.x_lo, spec.x_hi}}};
    ordered_json pj = ordered_json::object();
    for (const auto& [k, v] : d.params) pj[k] = v;
    summary["params"] = pj;

    GridSolution sol = build(spec);
    sol.entry_id = entry->id;
    ResidualStats pde_stats = pde_residual(sol, entry->pde, d.params);
    ResidualStats char_stats = characteristic_residual(sol, entry->op, d.params);
    summary["pde_residual"] = stats_json(pde_stats);
    summary["characteristic_residual"] = stats_json(char_stats);
    summary["residual_verdict"] = pde_stats.linf <= 1e-4 ? "PASS" : "FAIL";

    std::string stats_csv;
    if (levels >= 3) {
      ConvergenceStudy study =
          convergence_study(build, refinement_levels(spec, levels), entry->pde, d.params);
      summary["convergence"] = {{"fitted_order", study.fitted_order},
                                {"monotone", study.monotone},
                                {"floor_reached", study.floor_reached}};
      stats_csv = convergence_csv(study);
    } else {
      char buf[256];
      std::snprintf(buf, sizeof buf, "level,h_t,h_x,linf,l2,order\n0,%.17g,%.17g,%.17g,%.17g,\n",
                    pde_stats.h_t, pde_stats.h_x, pde_stats.linf, pde_stats.l2);
      stats_csv = buf;
    }

    if (!out_csv.empty()) {
      std::ofstream os(out_csv);
      write_grid_csv(os, sol);
    }
    if (!out_stats.empty()) std::ofstream(out_stats) << stats_csv;
    std::cout << summary.dump(2) << "\n";
  } catch (const CharacteristicCrossing& e) {
    std::cerr << "abort: characteristic crossing at t=" << e.time << "\n";
    return 4;
  } catch (const CorridorExit& e) {
    std::cerr << "abort: characteristics exited the corridor at t=" << e.time << "\n";
    return 4;
  } catch (const OdeFailure& e) {
    std::cerr << "abort: " << e.what() << " near " << e.where << "\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symred: verification and numerical reduction for nonclassical symmetries of "
               "u_t = u_xx + k(x) u^2 (1-u)"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* verify = app.add_subcommand("verify", "verify catalog operators against the "
                                              "determining systems (both routes)");
  std::vector<std::string> cases;
  bool all = false;
  std::string out_path;
  verify->add_flag("--all", all, "verify the whole catalog (default when no --case)");
  verify->add_option("--case", cases, "entry id filter (repeatable); exact ids");
  verify->add_option("--samples", common.samples, "sample points per residual");
  verify->add_option("--draws", common.draws, "parameter draws");
  verify->add_option("--tol", common.tol, "relative zero-test tolerance");
  verify->add_option("--seed", common.seed, "RNG seed")->envname("SYMRED_SEED");
  verify->add_option("--out", out_path, "write the JSON report here (default stdout)");

  auto* detsys = app.add_subcommand("detsys", "generate determining-equation systems");
  int tau = 1;
  std::string k_text, xi_text = "0", eta_text = "0";
  std::vector<int> split;
  std::vector<std::string> coeffs, params;
  bool raw = false;
  detsys->add_option("--tau", tau, "0 or 1")->required();
  detsys->add_option("--k", k_text, "coefficient k(x)")->required();
  detsys->add_option("--xi", xi_text, "xi(t,x,u) (tau=1)");
  detsys->add_option("--eta", eta_text, "eta(t,x,u)");
  detsys->add_option("--split", split, "Laurent ansatz degrees m n (tau=0)")->expected(2);
  detsys->add_option("--coeff", coeffs, "pin an ansatz coefficient, p=EXPR (repeatable)");
  detsys->add_option("--params", params, "declare parameter names (repeatable)");
  detsys->add_flag("--raw", raw, "print residuals without normalization");

  auto* reduce = app.add_subcommand("reduce", "build an invariant solution numerically and "
                                              "certify its PDE residual");
  std::string case_id, grid = "201x201", out_csv = "symred_grid.csv",
              out_stats = "symred_stats.csv";
  double c_param = 1, f0 = 0.3, df0 = 0, anchor = 1, v0 = 0.5, tmax = 0;
  std::vector<double> domain;
  int levels = 1;
  bool no_ode = false;
  reduce->add_option("--case", case_id, "catalog entry id")->required();
  auto* oc = reduce->add_option("--c", c_param, "parameter c value");
  auto* of0 = reduce->add_option("--f0", f0, "shooting value f(x_lo) (tau=1)");
  auto* odf0 = reduce->add_option("--df0", df0, "shooting slope f'(x_lo) (tau=1)");
  auto* oanchor = reduce->add_option("--anchor", anchor, "anchor abscissa x0 (tau=0)");
  auto* ov0 = reduce->add_option("--v0", v0, "anchor value u(t0,x0) (tau=0)");
  reduce->add_option("--grid", grid, "grid as NTxNX (default 201x201)");
  auto* otmax = reduce->add_option("--tmax", tmax, "final time");
  reduce->add_option("--domain", domain, "spatial domain lo hi")->expected(2);
  reduce->add_option("--levels", levels, "refinement levels (>=3 runs a convergence study)");
  reduce->add_flag("--no-ode", no_ode, "skip the compatibility ODE (constant initial profile; "
                                       "negative control)");
  reduce->add_option("--out-csv", out_csv, "grid CSV path");
  reduce->add_option("--out-stats", out_stats, "stats CSV path");
  reduce->add_option("--seed", common.seed, "RNG seed (echoed into outputs)")
      ->envname("SYMRED_SEED");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) return run_verify(common, cases, all || cases.empty(), out_path);
  if (detsys->parsed())
    return run_detsys(tau, k_text, xi_text, eta_text, split, coeffs, params, raw);
  return run_reduce(common, case_id, c_param, f0, df0, anchor, v0, grid, tmax, domain, levels,
                    no_ode, out_csv, out_stats, !oc->empty(), !of0->empty(), !odf0->empty(),
                    !oanchor->empty(), !ov0->empty(), !otmax->empty());
}
