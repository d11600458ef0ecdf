#pragma once

#include "symred/expr.hpp"

namespace symred {

/// One member of the family u_t = u_xx + k(x) u^2 (1-u), identified by its
/// coefficient k. k may contain parameters or a function symbol of x, but
/// never t or u.
struct Pde {
  Expr k;

  explicit Pde(Expr coefficient);

  /// The reaction term k(x) u^2 (1-u); the u_xx part is structural.
  Expr rhs() const;

  /// Numeric nonvanishing check for concrete k (is_zero must come back false).
  bool k_not_identically_zero(const ZeroTestPolicy& policy,
                              const ParamRanges& ranges = {}) const;
};

/// Reduction operator Q = tau*d_t + xi*d_x + eta*d_u, normalized to tau=1 or
/// (tau=0, xi=1).
class ReductionOperator {
 public:
  static ReductionOperator tau1(Expr xi, Expr eta);
  static ReductionOperator tau0(Expr eta);

  bool is_tau1() const { return tau1_; }
  int tau() const { return tau1_ ? 1 : 0; }
  /// xi is the literal 1 for the tau=0 form.
  const Expr& xi() const { return xi_; }
  const Expr& eta() const { return eta_; }

 private:
  ReductionOperator(bool t1, Expr xi, Expr eta)
      : tau1_(t1), xi_(std::move(xi)), eta_(std::move(eta)) {}
  bool tau1_;
  Expr xi_;
  Expr eta_;
};

/// The characteristic Q[u] = eta - tau*u_t - xi*u_x with u_t, u_x as formal
/// slots.
Expr characteristic(const ReductionOperator& op);

}  // namespace symred
