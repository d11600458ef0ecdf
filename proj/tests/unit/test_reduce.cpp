#include <cmath>
#include <sstream>

#include <doctest.h>

#include "symred/catalog.hpp"
#include "symred/numcheck.hpp"
#include "symred/reduce.hpp"

using namespace symred;

TEST_CASE("solve_ivp: linear, logistic, blow-up") {
  {
    OdeProblem p;
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = 0;
    };
    p.t0 = 1;
    p.y0 = {0, 1};
    p.t1 = 2;
    CHECK(std::abs(solve_ivp(p).back_state()[0] - 1.0) < 1e-9);
  }
  {
    OdeProblem p;
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[0] * y[0] * (1 - y[0]);
    };
    p.t0 = 0;
    p.y0 = {0.5};
    p.t1 = 5;
    double v5 = solve_ivp(p).back_state()[0];
    CHECK(v5 > 0.98);
    CHECK(v5 < 1.0);
    // closed-form separable relation: -1/v + ln(v/(1-v)) - (-2) = t
    double lhs = -1.0 / v5 + std::log(v5 / (1 - v5)) + 2.0;
    CHECK(std::abs(lhs - 5.0) < 1e-7);
  }
  {
    OdeProblem p;
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[0] * y[0];
    };
    p.t0 = 0;
    p.y0 = {1};
    p.t1 = 2;
    CHECK_THROWS_AS(solve_ivp(p), BlowUpError);
    try {
      solve_ivp(p);
    } catch (const BlowUpError& e) {
      CHECK(e.where > 0.99);
      CHECK(e.where <= 1.001);
    }
  }
}

TEST_CASE("trajectory dense output is accurate between steps") {
  OdeProblem p;
  p.rhs = [](double t, std::span<const double>, std::span<double> dy) { dy[0] = std::cos(t); };
  p.t0 = 0;
  p.y0 = {0};
  p.t1 = 3;
  Trajectory tr = solve_ivp(p);
  for (double t : {0.17, 0.9, 1.33, 2.71}) CHECK(std::abs(tr.eval(t, 0) - std::sin(t)) < 1e-8);
}

TEST_CASE("monotone cubic interpolation") {
  std::vector<double> xs{0, 1, 2, 3, 4}, ys{0, 0.2, 1.5, 1.8, 2.0};
  MonotoneCubic mc(xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(mc(xs[i]) == doctest::Approx(ys[i]));
  // monotone data stays monotone between nodes
  double prev = mc(0.0);
  for (double x = 0.05; x <= 4.0; x += 0.05) {
    double v = mc(x);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(MonotoneCubic({0, 0, 1}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("reduced initial ODE matches the stated forms") {
  // thm2.case4 with c=1: f'' = (1/x) f' - x^2 f^2 (1-f)
  auto e = *find_entry("thm2.case4");
  OdeProblem p =
      reduced_initial_ode_tau1(e.pde, e.op, {{"c", 1.0}}, 0.0, 1.0, 0.3, 0.0, 2.0);
  std::vector<double> dy(2);
  p.rhs(1.3, std::array<double, 2>{0.4, 0.7}, dy);
  double expect = (1.0 / 1.3) * 0.7 - 1.3 * 1.3 * 0.4 * 0.4 * (1 - 0.4);
  CHECK(dy[0] == doctest::Approx(0.7));
  CHECK(dy[1] == doctest::Approx(expect).epsilon(1e-12));

  // thm2.case5 (+, c=2): f'' = -3 f^2 (f-1) - (3f-1) f' - 2 f^2 (1-f)
  auto e5 = *find_entry("thm2.case5+");
  OdeProblem p5 =
      reduced_initial_ode_tau1(e5.pde, e5.op, {{"c", 2.0}}, 0.0, 0.0, 0.3, 0.0, 1.0);
  p5.rhs(0.5, std::array<double, 2>{0.4, 0.7}, dy);
  double ex5 = -3 * 0.4 * 0.4 * (0.4 - 1) - (3 * 0.4 - 1) * 0.7 - 2 * 0.4 * 0.4 * (1 - 0.4);
  CHECK(dy[1] == doctest::Approx(ex5).epsilon(1e-12));

  // xi = 0, eta = 0: the steady-state profile equation f'' = -k f^2(1-f)
  auto triv = ReductionOperator::tau1(Expr::integer(0), Expr::integer(0));
  OdeProblem ps = reduced_initial_ode_tau1(e.pde, triv, {{"c", 1.0}}, 0.0, 1.0, 0.3, 0.0, 2.0);
  ps.rhs(1.0, std::array<double, 2>{0.3, 0.0}, dy);
  CHECK(dy[1] == doctest::Approx(-0.3 * 0.3 * 0.7).epsilon(1e-12));
}

TEST_CASE("tau=1 pipeline at a reduced grid") {
  auto e = *find_entry("thm2.case4");
  GridSpec spec;
  spec.nt = 81;
  spec.nx = 81;
  spec.t1 = 0.2;
  spec.x_lo = 1.0;
  spec.x_hi = 2.0;
  GridSolution sol = characteristics_solution_tau1(e.pde, e.op, {{"c", 1.0}}, spec, 0.3, 0.0);
  CHECK(sol.nt() == 81);
  CHECK(sol.nx() == 81);
  ResidualStats pde = pde_residual(sol, e.pde, {{"c", 1.0}});
  ResidualStats ch = characteristic_residual(sol, e.op, {{"c", 1.0}});
  CHECK(pde.linf <= 1e-4);
  CHECK(ch.linf <= 10 * 1e-4);  // invariant-surface preservation
}

TEST_CASE("tau=1 negative control: constant profile violates the PDE") {
  auto e = *find_entry("thm2.case4");
  GridSpec spec;
  spec.nt = 41;
  spec.nx = 41;
  spec.t1 = 0.2;
  spec.x_lo = 1.0;
  spec.x_hi = 2.0;
  Tau1PipelineOptions opts;
  opts.constant_profile = true;
  GridSolution sol =
      characteristics_solution_tau1(e.pde, e.op, {{"c", 1.0}}, spec, 0.3, 0.0, opts);
  CHECK(pde_residual(sol, e.pde, {{"c", 1.0}}).linf >= 1e-1);
  // the surface itself is still invariant
  CHECK(characteristic_residual(sol, e.op, {{"c", 1.0}}).linf <= 1e-6);
}

TEST_CASE("tau=0 pipeline: item 5 with separability, item 6, uniform eta=0") {
  auto e5 = *find_entry("tau0.item5");
  GridSpec spec;
  spec.nt = 81;
  spec.nx = 81;
  spec.t1 = 0.3;
  spec.x_lo = 0.5;
  spec.x_hi = 2.0;
  GridSolution sol = tau0_solution(e5.pde, e5.op, {}, 1.0, 0.5, spec);
  CHECK(pde_residual(sol, e5.pde).linf <= 1e-4);

  // (u-1)/(u+1) = g(t) x^2 with g constant across each time slice
  for (int i = 0; i < sol.nt(); i += 20) {
    double g0 = 0;
    for (int j = 0; j < sol.nx(); ++j) {
      double g = (sol.at(i, j) - 1) / ((sol.at(i, j) + 1) * sol.xs[j] * sol.xs[j]);
      if (j == 0)
        g0 = g;
      else
        CHECK(std::abs(g - g0) <= 1e-5 * std::abs(g0));
    }
  }

  auto e6 = *find_entry("tau0.item6");
  GridSolution sol6 = tau0_solution(e6.pde, e6.op, {}, 1.0, 0.5, spec);
  CHECK(pde_residual(sol6, e6.pde).linf <= 1e-4);

  // eta = 0 with k = c: u is uniform in x and follows the logistic-type ODE
  Pde kc(parse("c", ParseContext{}.with_params({"c"})));
  GridSolution solu = tau0_solution(kc, ReductionOperator::tau0(Expr::integer(0)),
                                    {{"c", 1.0}}, 1.0, 0.5, spec);
  for (int i = 0; i < solu.nt(); ++i)
    for (int j = 1; j < solu.nx(); ++j)
      CHECK(std::abs(solu.at(i, j) - solu.at(i, 0)) < 1e-12);
}

TEST_CASE("grid CSV export shape") {
  auto e6 = *find_entry("tau0.item6");
  GridSpec spec;
  spec.nt = 5;
  spec.nx = 4;
  spec.t1 = 0.1;
  spec.x_lo = 0.5;
  spec.x_hi = 2.0;
  GridSolution sol = tau0_solution(e6.pde, e6.op, {}, 1.0, 0.5, spec);
  std::ostringstream os;
  write_grid_csv(os, sol);
  std::string csv = os.str();
  CHECK(csv.rfind("t,x,u\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + 5 * 4);
}
