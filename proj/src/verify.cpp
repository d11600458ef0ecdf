#include "symred/verify.hpp"

#include <algorithm>
#include <chrono>

#include <json.hpp>

namespace symred {

namespace {

ResidualVerdict run_residual(const Expr& e, const char* route, int index,
                             const ZeroTestPolicy& policy, const ParamRanges& ranges) {
  ResidualVerdict v;
  v.route = route;
  v.residual_index = index;
  ZeroResult r = is_zero(e, policy, ranges);
  v.pass = r.zero;
  v.witness = r.witness;
  v.tolerance_sensitive = r.tolerance_sensitive;
  return v;
}

}  // namespace

VerificationReport verify_operator(const Pde& pde, const ReductionOperator& op,
                                   const ZeroTestPolicy& policy, const ParamRanges& ranges,
                                   const std::string& id) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.id = id;
  rep.param_draws = policy.param_draws;

  bool system_pass = true;
  if (op.is_tau1()) {
    DeterminingSystem sys = determining_system_tau1(pde, op.xi(), op.eta());
    for (std::size_t i = 0; i < sys.residuals.size(); ++i) {
      rep.verdicts.push_back(
          run_residual(sys.residuals[i].expr, "system", static_cast<int>(i), policy, ranges));
      system_pass = system_pass && rep.verdicts.back().pass;
    }
  } else {
    Expr r = determining_residual_tau0(pde, op.eta());
    rep.verdicts.push_back(run_residual(r, "system", 0, policy, ranges));
    system_pass = rep.verdicts.back().pass;
  }

  Expr prol = conditional_invariance_residual(pde, op);
  rep.verdicts.push_back(run_residual(prol, "prolongation", 0, policy, ranges));
  bool prol_pass = rep.verdicts.back().pass;

  rep.routes_agree = system_pass == prol_pass;
  rep.pass = system_pass && prol_pass;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
  return rep;
}

bool verify_ode_solution(const Expr& ode_residual, const Expr& candidate, Interval domain,
                         const ZeroTestPolicy& policy) {
  Bindings b;
  b.funcs["B"] = FuncReplacement{{Var::x}, candidate};
  Expr instantiated = substitute(ode_residual, b);
  ZeroTestPolicy p = policy;
  p.box.x = domain;
  return is_zero(instantiated, p).zero;
}

namespace {

ZeroTestPolicy entry_policy(const ZeroTestPolicy& base, const CatalogEntry& e) {
  ZeroTestPolicy p = base;
  p.box = e.domain;
  return p;
}

bool closure_matches(const CaseIIClosure& c, const CatalogEntry& target,
                     const Expr& target_k, const Expr& target_xi, const Expr& target_eta) {
  (void)target;
  Expr dk = expand_collect(c.pde.k - target_k);
  Expr dxi = expand_collect(c.ansatz.xi() - target_xi);
  Expr deta = expand_collect(c.ansatz.eta() - target_eta);
  return dk.is_zero_literal() && dxi.is_zero_literal() && deta.is_zero_literal();
}

}  // namespace

CatalogRunReport verify_catalog(const ZeroTestPolicy& policy,
                                const std::vector<std::string>& id_filter) {
  auto wanted = [&](const std::string& id) {
    if (id_filter.empty()) return true;
    return std::find(id_filter.begin(), id_filter.end(), id) != id_filter.end();
  };

  CatalogRunReport rep;
  rep.policy = policy;

  for (const auto& e : all_entries()) {
    if (!wanted(e.id)) continue;
    VerificationReport r = verify_operator(e.pde, e.op, entry_policy(policy, e), e.params, e.id);
    rep.all_positive_pass = rep.all_positive_pass && r.pass;
    rep.routes_agree = rep.routes_agree && r.routes_agree;
    rep.entries.push_back(std::move(r));
  }

  for (const auto& e : negative_controls()) {
    if (!wanted(e.id)) continue;
    VerificationReport r = verify_operator(e.pde, e.op, entry_policy(policy, e), e.params, e.id);
    rep.all_controls_fail = rep.all_controls_fail && !r.pass;
    rep.routes_agree = rep.routes_agree && r.routes_agree;
    rep.controls.push_back(std::move(r));
  }

  if (id_filter.empty()) {
    for (const auto& e : tau0_cases()) {
      if (!e.ode) continue;
      OdeSolutionCheck c;
      c.id = e.id + ".ode";
      c.candidate = e.particular->str();
      c.pass = verify_ode_solution(*e.ode, *e.particular, *e.ode_domain, policy);
      rep.ode_solutions.push_back(std::move(c));
    }

    for (const auto& br : case_i_branches()) {
      BranchCheck c;
      c.id = br.reconstructs;
      Expr psi_ode = differentiate(br.psi, Var::x) - Expr::pow(br.psi, Rational(2)) -
                     Expr::integer(br.a);
      ZeroTestPolicy p = policy;
      p.box.x = br.x_domain;
      c.ode_pass = is_zero(psi_ode, p).zero;
      auto target = find_entry(br.reconstructs);
      c.reconstruct_pass = target && target->pde.k.str() == br.k.str() &&
                           target->op.xi().str() == br.psi.str() &&
                           target->op.eta().is_zero_literal();
      rep.branches.push_back(std::move(c));
    }

    {
      // phi = 3/x must reproduce Theorem 2 case 6 exactly
      ClosureCheck c;
      c.id = "thm2.case6";
      ParseContext pc;
      CaseIIClosure cl = case_ii_closure(parse("3/x", pc), policy);
      c.constraint_pass = cl.constraint.is_zero_literal() || is_zero(cl.constraint, policy).zero;
      auto target = find_entry("thm2.case6");
      c.reconstruct_pass =
          closure_matches(cl, *target, target->pde.k, target->op.xi(), target->op.eta());
      rep.closures.push_back(std::move(c));
    }
    {
      // phi = c reproduces case 5 (+) under the reparametrization c -> 2c/3
      ClosureCheck c;
      c.id = "thm2.case5+";
      ParseContext pc = ParseContext{}.with_params({"c"});
      CaseIIClosure cl = case_ii_closure(parse("c", pc), policy);
      c.constraint_pass = cl.constraint.is_zero_literal() || is_zero(cl.constraint, policy).zero;
      auto target = find_entry("thm2.case5+");
      Bindings remap;
      remap.params["c"] = Expr::constant(Rational(2, 3)) * Expr::parameter("c");
      c.reconstruct_pass = closure_matches(cl, *target, substitute(target->pde.k, remap),
                                           substitute(target->op.xi(), remap),
                                           substitute(target->op.eta(), remap));
      rep.closures.push_back(std::move(c));
    }
  }

  for (const auto& s : rep.ode_solutions) rep.all_positive_pass &= s.pass;
  for (const auto& b : rep.branches) rep.all_positive_pass &= b.ode_pass && b.reconstruct_pass;
  for (const auto& c : rep.closures)
    rep.all_positive_pass &= c.constraint_pass && c.reconstruct_pass;

  rep.overall = rep.all_positive_pass && rep.all_controls_fail && rep.routes_agree;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json witness_json(const std::optional<ZeroWitness>& w) {
  if (!w) return nullptr;
  ordered_json j;
  j["t"] = w->t;
  j["x"] = w->x;
  j["u"] = w->u;
  ordered_json params = ordered_json::object();
  for (const auto& [name, val] : w->params) params[name] = val;
  j["params"] = params;
  j["value"] = w->value;
  j["scale"] = w->scale;
  return j;
}

ordered_json report_records(const VerificationReport& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : r.verdicts) {
    ordered_json rec;
    rec["id"] = r.id;
    rec["route"] = v.route;
    rec["residual_index"] = v.residual_index;
    rec["verdict"] = v.pass ? "pass" : "fail";
    rec["witness"] = witness_json(v.witness);
    if (v.tolerance_sensitive) rec["note"] = "tolerance-sensitive";
    arr.push_back(std::move(rec));
  }
  return arr;
}

}  // namespace

std::string report_to_json(const CatalogRunReport& rep) {
  ordered_json j;
  j["policy"] = {{"samples", rep.policy.samples},
                 {"param_draws", rep.policy.param_draws},
                 {"tolerance", rep.policy.tolerance},
                 {"margin", rep.policy.margin},
                 {"seed", rep.policy.seed}};

  auto sorted = [](std::vector<VerificationReport> v) {
    std::sort(v.begin(), v.end(),
              [](const VerificationReport& a, const VerificationReport& b) { return a.id < b.id; });
    return v;
  };

  ordered_json entries = ordered_json::array();
  for (const auto& r : sorted(rep.entries))
    for (auto& rec : report_records(r)) entries.push_back(rec);
  j["entries"] = entries;

  ordered_json controls = ordered_json::array();
  for (const auto& r : sorted(rep.controls))
    for (auto& rec : report_records(r)) controls.push_back(rec);
  j["controls"] = controls;

  ordered_json odes = ordered_json::array();
  for (const auto& s : rep.ode_solutions)
    odes.push_back({{"id", s.id}, {"candidate", s.candidate}, {"verdict", s.pass ? "pass" : "fail"}});
  j["ode_solutions"] = odes;

  ordered_json branches = ordered_json::array();
  for (const auto& b : rep.branches)
    branches.push_back({{"id", b.id},
                        {"psi_ode", b.ode_pass ? "pass" : "fail"},
                        {"reconstruction", b.reconstruct_pass ? "pass" : "fail"}});
  j["branches"] = branches;

  ordered_json closures = ordered_json::array();
  for (const auto& c : rep.closures)
    closures.push_back({{"id", c.id},
                        {"constraint", c.constraint_pass ? "pass" : "fail"},
                        {"reconstruction", c.reconstruct_pass ? "pass" : "fail"}});
  j["closures"] = closures;

  j["summary"] = {{"positive_entries", rep.entries.size()},
                  {"controls", rep.controls.size()},
                  {"all_positive_pass", rep.all_positive_pass},
                  {"all_controls_fail", rep.all_controls_fail},
                  {"routes_agree", rep.routes_agree},
                  {"overall", rep.overall ? "pass" : "fail"}};
  return j.dump(2) + "\n";
}

}  // namespace symred
