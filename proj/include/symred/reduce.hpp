#pragma once

#include <iosfwd>

#include "symred/model.hpp"
#include "symred/ode.hpp"

namespace symred {

struct GridSpec {
  int nt = 201;
  int nx = 201;
  double t0 = 0, t1 = 0.2;
  double x_lo = 0, x_hi = 1;

  double h_t() const { return (t1 - t0) / (nt - 1); }
  double h_x() const { return (x_hi - x_lo) / (nx - 1); }
};

/// Sampled u(t,x) on a uniform rectangular grid, with construction metadata.
struct GridSolution {
  std::vector<double> ts;
  std::vector<double> xs;
  std::vector<double> u;  // row-major: u[i*nx + j], time index i outer
  std::string entry_id;
  std::string route;
  std::map<std::string, double> params;

  int nt() const { return static_cast<int>(ts.size()); }
  int nx() const { return static_cast<int>(xs.size()); }
  double at(int i, int j) const { return u[static_cast<std::size_t>(i) * xs.size() + j]; }
};

struct CharacteristicCrossing : std::runtime_error {
  double time;
  CharacteristicCrossing(double t)
      : std::runtime_error("characteristic crossing detected"), time(t) {}
};

struct CorridorExit : std::runtime_error {
  double time;
  CorridorExit(double t)
      : std::runtime_error("characteristics exited the sampling corridor"), time(t) {}
};

/// Admissible initial profile f(x) at t = t0: the compatibility ODE
/// f'' = eta(t0,x,f) - xi(t0,x,f) f' - k(x) f^2 (1-f), solved by shooting
/// from (x0, f0, f0') over the requested span.
OdeProblem reduced_initial_ode_tau1(const Pde& pde, const ReductionOperator& op,
                                    const std::map<std::string, double>& params, double t0,
                                    double x_start, double f0, double df0, double x_end,
                                    const OdeOptions& opts = {});

/// Dense initial profile over [x_lo, x_hi]; shooting data (f0, df0) applies
/// at the anchor abscissa, integration runs in both directions from there.
class InitialProfile {
 public:
  InitialProfile(const Pde& pde, const ReductionOperator& op,
                 const std::map<std::string, double>& params, double t0, double anchor,
                 double f0, double df0, double x_lo, double x_hi,
                 const OdeOptions& opts = {});
  /// Constant profile (negative-control pipelines).
  InitialProfile(double x_lo, double x_hi, double f0);

  double value(double x) const;
  double deriv(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double min_value() const { return min_; }
  double max_value() const { return max_; }

 private:
  double lo_, hi_;
  double min_, max_;
  bool constant_ = false;
  double const_value_ = 0;
  double anchor_ = 0;
  Trajectory fwd_, bwd_;
};

struct Tau1PipelineOptions {
  int oversample = 4;          // launch density relative to nx
  double pad_factor = 1.5;     // corridor padding vs max |xi| * T
  OdeOptions ode;
  bool constant_profile = false;  // skip the compatibility ODE (negative control)
};

/// Launches characteristics dx/dt = xi, du/dt = eta from a dense set of
/// abscissas covering a padded corridor and interpolates each time slice
/// onto the grid with a monotone cubic. Aborts on characteristic crossing
/// or corridor exit.
GridSolution characteristics_solution_tau1(const Pde& pde, const ReductionOperator& op,
                                           const std::map<std::string, double>& params,
                                           const GridSpec& spec, double f0, double df0,
                                           const Tau1PipelineOptions& opts = {});

/// tau=0 pipeline: evolves the anchor value by
/// v' = eta eta_u + eta_x + k u^2(1-u) at x=x0, then integrates the
/// invariant surface condition u_x = eta across the domain per time slice.
GridSolution tau0_solution(const Pde& pde, const ReductionOperator& op,
                           const std::map<std::string, double>& params, double x0, double v0,
                           const GridSpec& spec, const OdeOptions& opts = {});

/// CSV export: header t,x,u; row-major by time then space; 17 significant
/// digits.
void write_grid_csv(std::ostream& os, const GridSolution& sol);

}  // namespace symred
