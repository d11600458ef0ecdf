#pragma once

#include <functional>

#include "symred/reduce.hpp"

namespace symred {

/// Interior-node residual statistics (first/last time and space nodes are
/// excluded; central differences everywhere).
struct ResidualStats {
  double linf = 0;
  double l2 = 0;  // root mean square over interior nodes
  double h_t = 0;
  double h_x = 0;
  long long interior_points = 0;
};

/// Defect of u_t = u_xx + k(x) u^2 (1-u) under central differences.
ResidualStats pde_residual(const GridSolution& sol, const Pde& pde,
                           const std::map<std::string, double>& params = {});

/// Discrete characteristic residual: eta - D_t u - xi D_x u (tau=1) or
/// eta - D_x u (tau=0).
ResidualStats characteristic_residual(const GridSolution& sol, const ReductionOperator& op,
                                      const std::map<std::string, double>& params = {});

struct ConvergenceLevel {
  GridSpec spec;
  ResidualStats stats;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  double fitted_order = 0;  // least-squares slope of log linf vs log h_x
  bool floor_reached = false;
  bool monotone = true;  // order fit unreliable when false
};

/// Builds a solution per grid spec (geometric refinement expected) and fits
/// the observed order of the PDE residual.
ConvergenceStudy convergence_study(const std::function<GridSolution(const GridSpec&)>& builder,
                                   const std::vector<GridSpec>& levels, const Pde& pde,
                                   const std::map<std::string, double>& params = {});

/// Halve the grid spacing `times` times starting from the coarsest level.
std::vector<GridSpec> refinement_levels(const GridSpec& finest, int count);

/// Stats CSV rows: level,h_t,h_x,linf,l2,order (order empty on the first row).
std::string convergence_csv(const ConvergenceStudy& study);

}  // namespace symred
