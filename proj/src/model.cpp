#include "symred/model.hpp"

namespace symred {

Pde::Pde(Expr coefficient) : k(std::move(coefficient)) {
  if (k.contains_var(Var::t) || k.contains_var(Var::u))
    throw std::invalid_argument("k must depend on x only");
}

Expr Pde::rhs() const {
  Expr u = Expr::variable(Var::u);
  return k * Expr::pow(u, Rational(2)) * (Expr::integer(1) - u);
}

bool Pde::k_not_identically_zero(const ZeroTestPolicy& policy, const ParamRanges& ranges) const {
  return !is_zero(k, policy, ranges).zero;
}

ReductionOperator ReductionOperator::tau1(Expr xi, Expr eta) {
  return ReductionOperator(true, std::move(xi), std::move(eta));
}

ReductionOperator ReductionOperator::tau0(Expr eta) {
  return ReductionOperator(false, Expr::integer(1), std::move(eta));
}

Expr characteristic(const ReductionOperator& op) {
  Expr ut = Expr::slot(Slot::ut);
  Expr ux = Expr::slot(Slot::ux);
  if (op.is_tau1()) return op.eta() - ut - op.xi() * ux;
  return op.eta() - ux;
}

}  // namespace symred
