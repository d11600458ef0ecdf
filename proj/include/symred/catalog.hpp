#pragma once

#include <optional>

#include "symred/model.hpp"

namespace symred {

/// Per-case defaults for the numerical reduction pipelines. The source
/// classification states no domains or initial data; these are pragmatic
/// choices pinned for reproducibility.
struct ReduceDefaults {
  double t0 = 0, t1 = 0.2;
  double x_lo = 0.5, x_hi = 2.0;
  double f0 = 0.3, df0 = 0.0;  // shooting data for tau=1 (at x = x_lo)
  double x0 = 1.0, v0 = 0.5;   // anchor data for tau=0
  std::map<std::string, double> params;
};

struct CatalogEntry {
  std::string id;
  Pde pde;
  ReductionOperator op;
  std::vector<std::string> generators;  // Lie-algebra display strings, when any
  ParamRanges params;
  SampleBox domain;
  std::string citation;
  bool expected_pass = true;
  std::string note;
  std::optional<Expr> ode;         // tau=0 items 1-4: the B(x) ODE residual
  std::optional<Expr> particular;  // stated particular solution for B
  std::optional<Interval> ode_domain;
  std::optional<ReduceDefaults> reduce;
};

/// Branch of the tau=1 case (i) general solution: psi' = psi^2 + a with
/// k = c/psi^2 written in the tan/tanh-closed catalog form.
struct CaseIBranch {
  int a;
  Expr psi;
  Expr k;
  std::string reconstructs;  // id of the Theorem 2 case this branch yields
  Interval x_domain;
};

std::vector<CatalogEntry> lie_cases();
std::vector<CatalogEntry> tau1_cases();
std::vector<CatalogEntry> tau0_cases();
std::vector<CaseIBranch> case_i_branches();

/// Fixed perturbed operators that must fail verification.
std::vector<CatalogEntry> negative_controls();

/// lie + tau1 + tau0, in catalog order.
std::vector<CatalogEntry> all_entries();

std::optional<CatalogEntry> find_entry(const std::string& id);

/// Scaling/translation equivalence transformation of the family:
/// t~ = e1^2 t + e2, x~ = e1 x + e3, u~ = u, k~ = e1^-2 k.
struct EquivalenceTransform {
  Rational e1{1}, e2{0}, e3{0};
};

std::pair<Pde, ReductionOperator> apply_equivalence(const EquivalenceTransform& g,
                                                    const Pde& pde,
                                                    const ReductionOperator& op);

SampleBox transform_domain(const EquivalenceTransform& g, const SampleBox& box);

/// Structured text export, one record per entry; golden-file checked.
std::string catalog_to_text();

}  // namespace symred
