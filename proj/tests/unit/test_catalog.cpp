#include <fstream>
#include <sstream>

#include <doctest.h>

#include "symred/catalog.hpp"
#include "symred/detsys.hpp"
#include "symred/verify.hpp"

using namespace symred;

namespace {

ParseContext ctx() {
  ParseContext c;
  c.params = {"c"};
  c.functions = {"B", "k"};
  return c;
}

Expr P(const std::string& s) { return parse(s, ctx()); }

}  // namespace

TEST_CASE("catalog shape and key entries") {
  CHECK(lie_cases().size() == 3);
  CHECK(tau1_cases().size() == 7);  // case 5 carries both signs
  CHECK(tau0_cases().size() == 8);
  CHECK(all_entries().size() == 18);
  CHECK(negative_controls().size() == 5);

  auto c4 = find_entry("thm2.case4");
  REQUIRE(c4);
  CHECK(c4->pde.k.same(P("c*x^2")));
  CHECK(c4->op.xi().same(P("-1/x")));
  CHECK(c4->op.eta().is_zero_literal());

  auto c5 = find_entry("thm2.case5");  // alias resolves to the + sign
  REQUIRE(c5);
  CHECK(c5->id == "thm2.case5+");

  auto i6 = find_entry("tau0.item6");
  REQUIRE(i6);
  CHECK(i6->op.tau() == 0);
  CHECK(expand_collect(i6->pde.k - P("1/(2*x^2)")).is_zero_literal());
  CHECK(expand_collect(i6->op.eta() - P("u^2/(2*x)")).is_zero_literal());

  auto i8 = find_entry("tau0.item8");
  REQUIRE(i8);
  CHECK(i8->pde.k.same(P("2*tanh(2*x)^2")));
  CHECK(i8->op.eta().same(P("u^2*tanh(2*x)")));

  // case 6 eta expands to the stated coefficients
  auto c6 = find_entry("thm2.case6");
  LaurentForm lf = normalize_u_poly(c6->op.eta());
  CHECK(expand_collect(lf.coeffs[1] - P("-3/x^2")).is_zero_literal());
  CHECK(expand_collect(lf.coeffs[2] - P("6/x^2")).is_zero_literal());
  CHECK(expand_collect(lf.coeffs[3] - P("-3/x^2")).is_zero_literal());

  CHECK_FALSE(find_entry("nosuch"));
}

TEST_CASE("Lie entries are normalized operators") {
  auto cases = lie_cases();
  CHECK(cases[0].op.is_tau1());
  CHECK(cases[0].op.xi().is_zero_literal());
  CHECK(cases[1].op.tau() == 0);  // d_x as the tau=0 form
  CHECK(cases[1].op.eta().is_zero_literal());
  CHECK(cases[2].op.xi().same(P("x/(2*t)")));
}

TEST_CASE("case (i) branches solve psi' = psi^2 + a and rebuild cases 1-4") {
  ZeroTestPolicy pol;
  auto branches = case_i_branches();
  REQUIRE(branches.size() == 4);
  CHECK(branches[0].a == 1);
  CHECK(branches[3].a == 0);
  for (const auto& br : branches) {
    ZeroTestPolicy p = pol;
    p.box.x = br.x_domain;
    Expr ode = differentiate(br.psi, Var::x) - Expr::pow(br.psi, Rational(2)) -
               Expr::integer(br.a);
    CHECK(is_zero(ode, p).zero);
    auto target = find_entry(br.reconstructs);
    REQUIRE(target);
    CHECK(target->pde.k.str() == br.k.str());
    CHECK(target->op.xi().str() == br.psi.str());
    CHECK(target->op.eta().is_zero_literal());
    // k = c / psi^2 holds as an identity on the branch domain
    CHECK(is_zero(br.k * Expr::pow(br.psi, Rational(2)) - Expr::parameter("c"), p).zero);
  }
}

TEST_CASE("equivalence transformations") {
  EquivalenceTransform g{Rational(2), Rational(0), Rational(0)};
  auto e2 = *find_entry("thm1.case2");
  auto [pde, op] = apply_equivalence(g, e2.pde, e2.op);
  CHECK(expand_collect(pde.k - P("c/4")).is_zero_literal());

  // k = c x^-2 is form-invariant under pure scalings
  auto e3 = *find_entry("thm1.case3");
  for (long long s : {2, 3, 5}) {
    auto [p3, o3] = apply_equivalence({Rational(s), Rational(0), Rational(0)}, e3.pde, e3.op);
    CHECK(expand_collect(p3.k - P("c/x^2")).is_zero_literal());
  }

  // identity transform leaves everything alone
  auto [pi, oi] = apply_equivalence({}, e3.pde, e3.op);
  CHECK(pi.k.same(e3.pde.k));
  CHECK(oi.xi().same(e3.op.xi()));

  CHECK_THROWS_AS(apply_equivalence({Rational(0), Rational(0), Rational(0)}, e2.pde, e2.op),
                  std::invalid_argument);
}

TEST_CASE("equivariance: transformed entries verify iff the originals do") {
  // five deterministic transforms, exercised across the catalog
  const EquivalenceTransform transforms[] = {
      {Rational(2), Rational(0), Rational(0)},
      {Rational(1, 2), Rational(1, 4), Rational(0)},
      {Rational(-1), Rational(0), Rational(0)},
      {Rational(3, 2), Rational(0), Rational(1, 2)},
      {Rational(1), Rational(1), Rational(-1)},
  };
  ZeroTestPolicy pol;
  pol.samples = 120;  // keep the suite quick
  for (const auto& e : all_entries()) {
    for (const auto& g : transforms) {
      auto [pde, op] = apply_equivalence(g, e.pde, e.op);
      ZeroTestPolicy p = pol;
      p.box = transform_domain(g, e.domain);
      VerificationReport rep = verify_operator(pde, op, p, e.params, e.id);
      CHECK(rep.pass);
      CHECK(rep.routes_agree);
    }
  }
}

TEST_CASE("catalog text export matches the golden file") {
  std::ifstream in(std::string(SYMRED_TEST_DATA_DIR) + "/catalog_golden.txt");
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(catalog_to_text() == buf.str());
}
