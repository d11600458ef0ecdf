#pragma once

#include "symred/catalog.hpp"
#include "symred/detsys.hpp"

namespace symred {

struct ResidualVerdict {
  std::string route;  // "system" or "prolongation"
  int residual_index = 0;
  bool pass = true;
  std::optional<ZeroWitness> witness;
  bool tolerance_sensitive = false;
};

struct VerificationReport {
  std::string id;
  std::vector<ResidualVerdict> verdicts;
  bool pass = true;         // conjunction of all verdicts
  bool routes_agree = true; // transcribed system vs prolongation route
  int param_draws = 0;
  double wall_ms = 0;       // in-memory diagnostic; never serialized
};

/// Runs both verification routes (the transcribed determining system and the
/// prolongation-derived residual); both must pass.
VerificationReport verify_operator(const Pde& pde, const ReductionOperator& op,
                                   const ZeroTestPolicy& policy,
                                   const ParamRanges& ranges = {},
                                   const std::string& id = "");

/// Substitutes the candidate for B(x) in the ODE residual and zero-tests on
/// the given x-interval.
bool verify_ode_solution(const Expr& ode_residual, const Expr& candidate, Interval domain,
                         const ZeroTestPolicy& policy);

struct OdeSolutionCheck {
  std::string id;
  std::string candidate;
  bool pass = false;
};

struct BranchCheck {
  std::string id;  // reconstructed Theorem 2 case
  bool ode_pass = false;          // psi' = psi^2 + a
  bool reconstruct_pass = false;  // structural match with the catalog entry
};

struct ClosureCheck {
  std::string id;
  bool constraint_pass = false;   // 3 phi_x^2 + phi^2 phi_x vanishes
  bool reconstruct_pass = false;  // reconstructed (k, xi, eta) matches
};

struct CatalogRunReport {
  ZeroTestPolicy policy;
  std::vector<VerificationReport> entries;   // expected to pass
  std::vector<VerificationReport> controls;  // expected to fail
  std::vector<OdeSolutionCheck> ode_solutions;
  std::vector<BranchCheck> branches;
  std::vector<ClosureCheck> closures;
  bool all_positive_pass = true;
  bool all_controls_fail = true;
  bool routes_agree = true;
  bool overall = true;
};

/// Verifies every catalog entry (optionally filtered by exact ids), the ODE
/// particular solutions of the tau=0 list, the case (i) branches, the case
/// (ii) closures, and the fixed negative-control set.
CatalogRunReport verify_catalog(const ZeroTestPolicy& policy,
                                const std::vector<std::string>& id_filter = {});

/// Structured-report serialization with fixed field order
/// {id, route, residual_index, verdict, witness:{t,x,u,params,value,scale}}.
std::string report_to_json(const CatalogRunReport& report);

}  // namespace symred
