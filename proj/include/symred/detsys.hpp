#pragma once

#include <array>

#include "symred/model.hpp"

namespace symred {

struct Residual {
  Expr expr;
  std::string provenance;
};

/// Ordered list of residual expressions that must vanish identically for the
/// operator/PDE pair to satisfy the invariance criterion.
struct DeterminingSystem {
  std::vector<Residual> residuals;
  std::vector<std::string> unknowns;  // function symbols still free

  /// One residual per line in the expression grammar, provenance as comments.
  std::string str(bool normalized = true) const;
};

/// The four determining equations for tau=1 operators, transcribed from the
/// conditional-invariance splitting (each equation moved to one side).
DeterminingSystem determining_system_tau1(const Pde& pde, const Expr& xi, const Expr& eta);

/// The single tau=0 determining equation for eta (xi normalized to 1).
Expr determining_residual_tau0(const Pde& pde, const Expr& eta);

/// Independent derivation route: second prolongation of Q applied to
/// u_t - u_xx - k u^2(1-u), restricted to the joint manifold of the equation
/// and the differential consequences of Q[u]=0. Result is an Expr in (t,x,u)
/// for tau=0 and in (t,x,u,u_x) for tau=1.
Expr conditional_invariance_residual(const Pde& pde, const ReductionOperator& op);

/// u_x-power split of the tau=1 prolongation residual, oriented to match
/// determining_system_tau1 term by term (powers 3,2,1,0 give residuals
/// a,b,c,d; powers 2..0 come out negated by the derivation).
std::array<Expr, 4> prolongation_residuals_tau1(const Pde& pde, const Expr& xi, const Expr& eta);

/// The proof's tau=1 ansatz xi = phi*u + psi,
/// eta = -(1/3) phi^2 u^3 - phi psi u^2 + phi_x u^2 + A u + B.
struct Tau1Ansatz {
  Expr phi, psi, A, B;

  Expr xi() const;
  Expr eta() const;
};

/// The reduced system for (phi, psi, A, B), in display order. The fifth
/// equation carries the re-derived u^4 coefficient (+2/3 phi^2 phi_x);
/// see the oracle tests for the derivation chain.
DeterminingSystem reduced_system_ansatz(const Pde& pde, const Tau1Ansatz& ansatz);

struct CaseIIClosure {
  Tau1Ansatz ansatz;
  Pde pde;          // k = (2/9) phi^2
  Expr constraint;  // 3 phi_x^2 + phi^2 phi_x
};

/// Closes the tau=1 case with phi != 0: computes k, psi, A, B from phi and
/// returns the first-order constraint phi must satisfy.
/// Throws when the denominator 2 phi^2 - 9 phi_x vanishes identically.
CaseIIClosure case_ii_closure(const Expr& phi, const ZeroTestPolicy& policy);

/// eta = sum_{p=-m}^{n} phi_p u^p. Coefficients may be concrete expressions
/// in (t,x) or left as function symbols phi_mN/phi_N(t,x).
struct LaurentAnsatz {
  int m = 0;
  int n = 0;
  std::map<int, Expr> coeffs;  // only the nonzero ones need listing

  static LaurentAnsatz symbolic(int m, int n);
  Expr eta() const;
};

/// Substitutes the ansatz into the tau=0 determining equation and splits in
/// powers of u: one residual per surviving power.
DeterminingSystem split_laurent_ansatz(const Pde& pde, const LaurentAnsatz& ansatz);

}  // namespace symred
