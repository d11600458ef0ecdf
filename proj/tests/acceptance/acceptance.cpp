// Acceptance suite: one pass/fail line per criterion, exit nonzero when any
// criterion fails. Usage: acceptance <path-to-symred-cli> <workdir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "symred/numcheck.hpp"
#include "symred/verify.hpp"

using namespace symred;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ZeroTestPolicy default_policy() {
  ZeroTestPolicy p;  // 200 points, 5 draws, tol 1e-9, seed 0
  return p;
}

// ---------------------------------------------------------------------------

void criterion_1_catalog() {
  auto t0 = std::chrono::steady_clock::now();
  CatalogRunReport rep = verify_catalog(default_policy());
  double secs = seconds_since(t0);
  int tau1_count = 0, tau0_count = 0, lie_count = 0;
  bool all = true;
  for (const auto& r : rep.entries) {
    all = all && r.pass && r.routes_agree;
    if (r.id.rfind("thm1.", 0) == 0) ++lie_count;
    if (r.id.rfind("thm2.", 0) == 0) ++tau1_count;
    if (r.id.rfind("tau0.", 0) == 0) ++tau0_count;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "catalog verification (%d lie + %d tau1 + %d tau0 entries, both routes) in %.2fs",
                lie_count, tau1_count, tau0_count, secs);
  report(1, all && lie_count == 3 && tau1_count == 7 && tau0_count == 8 && secs < 10.0, buf);
}

void criterion_2_route_equivalence() {
  ZeroTestPolicy pol = default_policy();
  bool ok = true;
  // catalog entries: verdict agreement comes with the report
  CatalogRunReport rep = verify_catalog(pol);
  ok = ok && rep.routes_agree;
  for (const auto& r : rep.controls) ok = ok && r.routes_agree;

  // 20 randomized (k, xi, eta) instances, quadratic in u
  Rng rng(11);
  auto rq = [&]() {
    return Expr::constant(Rational(static_cast<long long>(rng.next() % 9) - 4, 2));
  };
  int agreed = 0;
  for (int i = 0; i < 20; ++i) {
    Expr x = Expr::variable(Var::x), u = Expr::variable(Var::u);
    Expr xi = rq() + rq() * x + (rq() + rq() * x) * u + rq() * u * u;
    Expr eta = rq() + rq() * x + rq() * u + rq() * u * u;
    Pde pde(rq() + rq() * x + rq() * x * x + Expr::constant(Rational(1, 3)));
    DeterminingSystem sys = determining_system_tau1(pde, xi, eta);
    auto split = prolongation_residuals_tau1(pde, xi, eta);
    bool sys_pass = true, prol_pass = true;
    for (int r = 0; r < 4; ++r) {
      sys_pass = sys_pass && is_zero(sys.residuals[r].expr, pol).zero;
      prol_pass = prol_pass && is_zero(split[r], pol).zero;
    }
    if (sys_pass == prol_pass) ++agreed;
  }
  ok = ok && agreed == 20;
  report(2, ok, "transcribed and prolongation routes agree on every entry and 20 random instances");
}

void criterion_3_closure() {
  ZeroTestPolicy pol = default_policy();
  ParseContext ctx;
  ctx.params = {"c"};
  bool ok = true;

  CaseIIClosure c6 = case_ii_closure(parse("3/x", ctx), pol);
  auto t6 = find_entry("thm2.case6");
  ok = ok && expand_collect(c6.pde.k - t6->pde.k).is_zero_literal();
  ok = ok && expand_collect(c6.ansatz.xi() - t6->op.xi()).is_zero_literal();
  ok = ok && expand_collect(c6.ansatz.eta() - t6->op.eta()).is_zero_literal();
  ok = ok && is_zero(c6.constraint, pol).zero;

  CaseIIClosure c5 = case_ii_closure(parse("c", ctx), pol);
  auto t5 = find_entry("thm2.case5+");
  Bindings remap;  // case-5 parameter c' relates to the closure phi=c by c = (3/2) c'
  remap.params["c"] = Expr::constant(Rational(2, 3)) * Expr::parameter("c");
  ok = ok && expand_collect(c5.pde.k - substitute(t5->pde.k, remap)).is_zero_literal();
  ok = ok && expand_collect(c5.ansatz.xi() - substitute(t5->op.xi(), remap)).is_zero_literal();
  ok = ok && expand_collect(c5.ansatz.eta() - substitute(t5->op.eta(), remap)).is_zero_literal();
  ok = ok && is_zero(c5.constraint, pol).zero;

  CaseIIClosure cx = case_ii_closure(parse("x", ctx), pol);
  ok = ok && !is_zero(cx.constraint, pol).zero;

  report(3, ok, "case (ii) closure rebuilds cases 6 and 5 exactly; constraint rejects phi=x");
}

void criterion_4_branches() {
  ZeroTestPolicy pol = default_policy();
  bool ok = true;
  auto branches = case_i_branches();
  ok = ok && branches.size() == 4;
  for (const auto& br : branches) {
    ZeroTestPolicy p = pol;
    p.box.x = br.x_domain;
    Expr ode =
        differentiate(br.psi, Var::x) - Expr::pow(br.psi, Rational(2)) - Expr::integer(br.a);
    ok = ok && is_zero(ode, p).zero;
    auto target = find_entry(br.reconstructs);
    ok = ok && target && target->pde.k.str() == br.k.str() &&
         target->op.xi().str() == br.psi.str() && target->op.eta().is_zero_literal();
  }
  report(4, ok, "all four case (i) psi-families satisfy psi' = psi^2 + a and rebuild cases 1-4");
}

void criterion_5_ode_solutions() {
  ZeroTestPolicy pol = default_policy();
  bool ok = true;
  auto items = tau0_cases();
  for (int i = 0; i < 4; ++i)
    ok = ok && verify_ode_solution(*items[i].ode, *items[i].particular, *items[i].ode_domain, pol);
  ok = ok && !verify_ode_solution(*items[3].ode, parse("x", ParseContext{}), *items[3].ode_domain,
                                  pol);
  report(5, ok, "B = tan x, -tanh x, -coth x, -1/x solve the item 1-4 ODEs; B = x fails item 4");
}

void criterion_6_controls() {
  ZeroTestPolicy pol = default_policy();
  bool ok = true;
  auto controls = negative_controls();
  ok = ok && controls.size() == 5;
  for (const auto& e : controls) {
    ZeroTestPolicy p = pol;
    p.box = e.domain;
    VerificationReport rep = verify_operator(e.pde, e.op, p, e.params, e.id);
    bool strong = false;
    for (const auto& v : rep.verdicts)
      if (v.witness && std::abs(v.witness->value) >= 1e3 * pol.tolerance) strong = true;
    ok = ok && !rep.pass && strong;
  }
  report(6, ok, "all five perturbed operators fail with witness residual >= 1e3*tol");
}

struct PipelineResult {
  ResidualStats stats;
  GridSolution sol;
};

void criterion_7_pipelines() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  auto run_tau1 = [&](const char* id, double c, double f0, GridSpec spec) {
    auto e = find_entry(id);
    std::map<std::string, double> params{{"c", c}};
    GridSolution sol = characteristics_solution_tau1(e->pde, e->op, params, spec, f0, 0.0);
    return pde_residual(sol, e->pde, params).linf;
  };
  auto run_tau0 = [&](const char* id, GridSpec spec) {
    auto e = find_entry(id);
    GridSolution sol = tau0_solution(e->pde, e->op, {}, 1.0, 0.5, spec);
    return pde_residual(sol, e->pde).linf;
  };

  GridSpec g4{201, 201, 0, 0.2, 1.0, 2.0};
  GridSpec g5{201, 201, 0, 0.2, 0.0, 1.0};
  GridSpec g05{201, 201, 0, 0.3, 0.5, 2.0};

  double r4 = run_tau1("thm2.case4", 1.0, 0.3, g4);
  double r5 = run_tau1("thm2.case5+", 2.0, 0.3, g5);
  double ri5 = run_tau0("tau0.item5", g05);
  double ri6 = run_tau0("tau0.item6", g05);
  ok = ok && r4 <= 1e-4 && r5 <= 1e-4 && ri5 <= 1e-4 && ri6 <= 1e-4;

  // convergence order over three refinement levels
  auto e4 = find_entry("thm2.case4");
  ConvergenceStudy s4 = convergence_study(
      [&](const GridSpec& g) {
        return characteristics_solution_tau1(e4->pde, e4->op, {{"c", 1.0}}, g, 0.3, 0.0);
      },
      refinement_levels(g4, 3), e4->pde, {{"c", 1.0}});
  auto e5 = find_entry("tau0.item5");
  ConvergenceStudy s5 = convergence_study(
      [&](const GridSpec& g) { return tau0_solution(e5->pde, e5->op, {}, 1.0, 0.5, g); },
      refinement_levels(g05, 3), e5->pde, {});
  ok = ok && std::abs(s4.fitted_order - 2.0) <= 0.3 && std::abs(s5.fitted_order - 2.0) <= 0.3;

  // negative control: profile that does not solve the reduced ODE
  Tau1PipelineOptions ctrl;
  ctrl.constant_profile = true;
  GridSolution bad =
      characteristics_solution_tau1(e4->pde, e4->op, {{"c", 1.0}}, g4, 0.3, 0.0, ctrl);
  double rbad = pde_residual(bad, e4->pde, {{"c", 1.0}}).linf;
  ok = ok && rbad >= 1e-1;

  double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "pipelines: case4 %.2e, case5 %.2e, item5 %.2e, item6 %.2e (<=1e-4); orders "
                "%.2f, %.2f; control %.2e (>=1e-1); %.1fs",
                r4, r5, ri5, ri6, s4.fitted_order, s5.fitted_order, rbad, secs);
  report(7, ok, buf);
}

void criterion_8_separability() {
  auto e = find_entry("tau0.item5");
  GridSpec spec{201, 201, 0, 0.3, 0.5, 2.0};
  GridSolution sol = tau0_solution(e->pde, e->op, {}, 1.0, 0.5, spec);
  double worst = 0;
  for (int i = 0; i < sol.nt(); ++i) {
    double mean = 0, var = 0;
    const int n = sol.nx();
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j)
      g[j] = (sol.at(i, j) - 1) / ((sol.at(i, j) + 1) * sol.xs[j] * sol.xs[j]);
    for (double v : g) mean += v;
    mean /= n;
    for (double v : g) var += (v - mean) * (v - mean);
    var /= n;
    worst = std::max(worst, var / (mean * mean));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "(u-1)/(u+1) = g(t) x^2 with per-slice rel. variance %.2e",
                worst);
  report(8, worst < 1e-10, buf);
}

void criterion_9_determinism(const std::string& cli, const fs::path& work) {
  bool ok = true;
  // library level: identical seed -> byte-identical reports
  ZeroTestPolicy pol = default_policy();
  ok = ok && report_to_json(verify_catalog(pol)) == report_to_json(verify_catalog(pol));

  // CLI level: verify twice, reduce twice, compare bytes
  fs::create_directories(work);
  auto shell = [&](const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    return rc == 0;
  };
  std::string q = "\"" + cli + "\"";
  ok = ok && shell(q + " verify --all --seed 0 --out " + (work / "r1.json").string() +
                   " 2>/dev/null");
  ok = ok && shell(q + " verify --all --seed 0 --out " + (work / "r2.json").string() +
                   " 2>/dev/null");
  ok = ok && !slurp(work / "r1.json").empty() && slurp(work / "r1.json") == slurp(work / "r2.json");

  std::string reduce_common = " reduce --case tau0.item5 --grid 101x101 --seed 0";
  ok = ok && shell(q + reduce_common + " --out-csv " + (work / "g1.csv").string() +
                   " --out-stats " + (work / "s1.csv").string() + " >/dev/null 2>&1");
  ok = ok && shell(q + reduce_common + " --out-csv " + (work / "g2.csv").string() +
                   " --out-stats " + (work / "s2.csv").string() + " >/dev/null 2>&1");
  ok = ok && !slurp(work / "g1.csv").empty() && slurp(work / "g1.csv") == slurp(work / "g2.csv");
  ok = ok && slurp(work / "s1.csv") == slurp(work / "s2.csv");

  report(9, ok, "identical seeds give byte-identical reports and CSVs (library and CLI)");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <symred-cli> <workdir>\n");
    return 2;
  }
  criterion_1_catalog();
  criterion_2_route_equivalence();
  criterion_3_closure();
  criterion_4_branches();
  criterion_5_ode_solutions();
  criterion_6_controls();
  criterion_7_pipelines();
  criterion_8_separability();
  criterion_9_determinism(argv[1], argv[2]);
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  else std::printf("all 9 criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
