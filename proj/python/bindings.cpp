#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symred/numcheck.hpp"
#include "symred/verify.hpp"

namespace py = pybind11;
using namespace symred;

namespace {

ParseContext make_ctx(const std::vector<std::string>& params,
                      const std::vector<std::string>& functions) {
  ParseContext ctx;
  for (const auto& p : params) ctx.params.insert(p);
  for (const auto& f : functions) ctx.functions.insert(f);
  return ctx;
}

Var var_from(const std::string& name) {
  if (name == "t") return Var::t;
  if (name == "x") return Var::x;
  if (name == "u") return Var::u;
  throw std::invalid_argument("variable must be one of t, x, u");
}

ZeroTestPolicy policy_from_kwargs(int samples, int draws, double tol, std::uint64_t seed,
                                  const std::map<std::string, std::pair<double, double>>& box) {
  ZeroTestPolicy p;
  p.samples = samples;
  p.param_draws = draws;
  p.tolerance = tol;
  p.seed = seed;
  for (const auto& [name, iv] : box) {
    Interval i{iv.first, iv.second};
    if (name == "t") p.box.t = i;
    else if (name == "x") p.box.x = i;
    else if (name == "u") p.box.u = i;
    else if (name == "u_x") p.box.ux = i;
    else throw std::invalid_argument("box keys must be t, x, u or u_x");
  }
  return p;
}

py::dict grid_to_dict(const GridSolution& sol) {
  py::dict d;
  d["t"] = sol.ts;
  d["x"] = sol.xs;
  std::vector<std::vector<double>> rows(sol.nt());
  for (int i = 0; i < sol.nt(); ++i) {
    rows[i].resize(sol.nx());
    for (int j = 0; j < sol.nx(); ++j) rows[i][j] = sol.at(i, j);
  }
  d["u"] = rows;
  d["entry"] = sol.entry_id;
  d["route"] = sol.route;
  return d;
}

py::dict stats_to_dict(const ResidualStats& s) {
  py::dict d;
  d["linf"] = s.linf;
  d["l2"] = s.l2;
  d["h_t"] = s.h_t;
  d["h_x"] = s.h_x;
  d["interior_points"] = s.interior_points;
  return d;
}

GridSpec spec_from(int nt, int nx, double t0, double t1, double x_lo, double x_hi) {
  GridSpec g;
  g.nt = nt;
  g.nx = nx;
  g.t0 = t0;
  g.t1 = t1;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  return g;
}

}  // namespace

PYBIND11_MODULE(_symred, m) {
  m.doc() = "Nonclassical-symmetry verification and reduction for "
            "u_t = u_xx + k(x) u^2 (1-u)";

  py::register_exception<SyntaxError>(m, "SyntaxError");
  py::register_exception<NotLaurentInU>(m, "NotLaurentInU");
  py::register_exception<EvalError>(m, "EvalError");

  py::class_<Expr>(m, "Expr")
      .def("__str__", &Expr::str)
      .def("__repr__", [](const Expr& e) { return "Expr(" + e.str() + ")"; })
      .def("same", &Expr::same, "structural equality")
      .def("__add__", [](const Expr& a, const Expr& b) { return a + b; })
      .def("__sub__", [](const Expr& a, const Expr& b) { return a - b; })
      .def("__mul__", [](const Expr& a, const Expr& b) { return a * b; })
      .def("__truediv__", [](const Expr& a, const Expr& b) { return a / b; })
      .def("__neg__", [](const Expr& a) { return -a; });

  m.def(
      "parse",
      [](const std::string& text, const std::vector<std::string>& params,
         const std::vector<std::string>& functions) {
        return parse(text, make_ctx(params, functions));
      },
      py::arg("text"), py::arg("params") = std::vector<std::string>{},
      py::arg("functions") = std::vector<std::string>{});

  m.def(
      "differentiate",
      [](const Expr& e, const std::string& v) { return differentiate(e, var_from(v)); },
      py::arg("expr"), py::arg("var"));

  m.def(
      "substitute",
      [](const Expr& e, const std::map<std::string, Expr>& vars,
         const std::map<std::string, Expr>& params,
         const std::map<std::string, std::pair<std::vector<std::string>, Expr>>& functions) {
        Bindings b;
        for (const auto& [name, expr] : vars) b.vars[var_from(name)] = expr;
        for (const auto& [name, expr] : params) b.params[name] = expr;
        for (const auto& [name, repl] : functions) {
          FuncReplacement fr;
          for (const auto& a : repl.first) fr.args.push_back(var_from(a));
          fr.body = repl.second;
          b.funcs[name] = fr;
        }
        return substitute(e, b);
      },
      py::arg("expr"), py::arg("vars") = std::map<std::string, Expr>{},
      py::arg("params") = std::map<std::string, Expr>{},
      py::arg("functions") = std::map<std::string, std::pair<std::vector<std::string>, Expr>>{});

  m.def("expand_collect", &expand_collect);

  m.def("normalize_u_poly", [](const Expr& e) {
    std::map<long long, Expr> out;
    for (const auto& [p, c] : normalize_u_poly(e).coeffs) out[p] = c;
    return out;
  });

  m.def(
      "eval_numeric",
      [](const Expr& e, double t, double x, double u,
         const std::map<std::string, double>& params) {
        EvalPoint pt;
        pt.t = t;
        pt.x = x;
        pt.u = u;
        pt.params = params;
        return eval_numeric(e, pt);
      },
      py::arg("expr"), py::arg("t") = 0.0, py::arg("x") = 0.0, py::arg("u") = 0.0,
      py::arg("params") = std::map<std::string, double>{});

  m.def(
      "is_zero",
      [](const Expr& e, int samples, int draws, double tol, std::uint64_t seed,
         const std::map<std::string, std::pair<double, double>>& box) {
        ZeroResult r = is_zero(e, policy_from_kwargs(samples, draws, tol, seed, box));
        py::dict d;
        d["zero"] = r.zero;
        if (r.witness) {
          py::dict w;
          w["t"] = r.witness->t;
          w["x"] = r.witness->x;
          w["u"] = r.witness->u;
          w["params"] = r.witness->params;
          w["value"] = r.witness->value;
          w["scale"] = r.witness->scale;
          d["witness"] = w;
        } else {
          d["witness"] = py::none();
        }
        return d;
      },
      py::arg("expr"), py::arg("samples") = 200, py::arg("draws") = 5, py::arg("tol") = 1e-9,
      py::arg("seed") = 0,
      py::arg("box") = std::map<std::string, std::pair<double, double>>{});

  m.def("catalog_ids", []() {
    std::vector<std::string> ids;
    for (const auto& e : all_entries()) ids.push_back(e.id);
    return ids;
  });

  m.def("catalog_export", &catalog_to_text);

  m.def(
      "verify_catalog_json",
      [](int samples, int draws, double tol, std::uint64_t seed,
         const std::vector<std::string>& ids) {
        ZeroTestPolicy p;
        p.samples = samples;
        p.param_draws = draws;
        p.tolerance = tol;
        p.seed = seed;
        return report_to_json(verify_catalog(p, ids));
      },
      py::arg("samples") = 200, py::arg("draws") = 5, py::arg("tol") = 1e-9, py::arg("seed") = 0,
      py::arg("ids") = std::vector<std::string>{});

  m.def(
      "verify_entry",
      [](const std::string& id, int samples, int draws, double tol, std::uint64_t seed) {
        auto e = find_entry(id);
        if (!e) throw std::invalid_argument("unknown entry '" + id + "'");
        ZeroTestPolicy p;
        p.samples = samples;
        p.param_draws = draws;
        p.tolerance = tol;
        p.seed = seed;
        p.box = e->domain;
        VerificationReport r = verify_operator(e->pde, e->op, p, e->params, e->id);
        py::dict d;
        d["id"] = r.id;
        d["pass"] = r.pass;
        d["routes_agree"] = r.routes_agree;
        return d;
      },
      py::arg("id"), py::arg("samples") = 200, py::arg("draws") = 5, py::arg("tol") = 1e-9,
      py::arg("seed") = 0);

  m.def(
      "determining_system",
      [](int tau, const std::string& k, const std::string& xi, const std::string& eta,
         const std::vector<std::string>& params) {
        ParseContext ctx = make_ctx(params, {});
        ctx.implicit_functions = true;
        Pde pde(parse(k, ctx));
        if (tau == 1) {
          DeterminingSystem sys = determining_system_tau1(pde, parse(xi, ctx), parse(eta, ctx));
          std::vector<std::string> out;
          for (const auto& r : sys.residuals) out.push_back(expand_collect(r.expr).str());
          return out;
        }
        return std::vector<std::string>{
            expand_collect(determining_residual_tau0(pde, parse(eta, ctx))).str()};
      },
      py::arg("tau"), py::arg("k"), py::arg("xi") = "0", py::arg("eta") = "0",
      py::arg("params") = std::vector<std::string>{});

  m.def(
      "reduce_tau1",
      [](const std::string& id, const std::map<std::string, double>& params, double f0,
         double df0, int nt, int nx, double t0, double t1, double x_lo, double x_hi,
         bool no_ode) {
        auto e = find_entry(id);
        if (!e || !e->op.is_tau1()) throw std::invalid_argument("tau=1 entry required");
        Tau1PipelineOptions opts;
        opts.constant_profile = no_ode;
        GridSolution sol = characteristics_solution_tau1(
            e->pde, e->op, params, spec_from(nt, nx, t0, t1, x_lo, x_hi), f0, df0, opts);
        sol.entry_id = e->id;
        py::dict d = grid_to_dict(sol);
        d["pde_residual"] = stats_to_dict(pde_residual(sol, e->pde, params));
        d["characteristic_residual"] =
            stats_to_dict(characteristic_residual(sol, e->op, params));
        return d;
      },
      py::arg("id"), py::arg("params") = std::map<std::string, double>{}, py::arg("f0") = 0.3,
      py::arg("df0") = 0.0, py::arg("nt") = 201, py::arg("nx") = 201, py::arg("t0") = 0.0,
      py::arg("t1") = 0.2, py::arg("x_lo") = 1.0, py::arg("x_hi") = 2.0,
      py::arg("no_ode") = false);

  m.def(
      "reduce_tau0",
      [](const std::string& id, double x0, double v0, int nt, int nx, double t0, double t1,
         double x_lo, double x_hi) {
        auto e = find_entry(id);
        if (!e || e->op.is_tau1()) throw std::invalid_argument("tau=0 entry required");
        GridSolution sol =
            tau0_solution(e->pde, e->op, {}, x0, v0, spec_from(nt, nx, t0, t1, x_lo, x_hi));
        sol.entry_id = e->id;
        py::dict d = grid_to_dict(sol);
        d["pde_residual"] = stats_to_dict(pde_residual(sol, e->pde));
        d["characteristic_residual"] = stats_to_dict(characteristic_residual(sol, e->op));
        return d;
      },
      py::arg("id"), py::arg("x0") = 1.0, py::arg("v0") = 0.5, py::arg("nt") = 201,
      py::arg("nx") = 201, py::arg("t0") = 0.0, py::arg("t1") = 0.3, py::arg("x_lo") = 0.5,
      py::arg("x_hi") = 2.0);

#ifdef SYMRED_VERSION
#define SYMRED_STR2(x) #x
#define SYMRED_STR(x) SYMRED_STR2(x)
  m.attr("__version__") = SYMRED_STR(SYMRED_VERSION);
#else
  m.attr("__version__") = "dev";
#endif
}
