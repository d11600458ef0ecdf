#pragma once

#include <functional>
#include <span>
#include <vector>

#include "symred/expr.hpp"

namespace symred {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double blowup = 1e8;
};

struct OdeFailure : std::runtime_error {
  double where;
  OdeFailure(const std::string& msg, double t) : std::runtime_error(msg), where(t) {}
};

struct BlowUpError : OdeFailure {
  using OdeFailure::OdeFailure;
};

struct StepUnderflowError : OdeFailure {
  using OdeFailure::OdeFailure;
};

/// Accepted-step record with cubic Hermite dense output.
class Trajectory {
 public:
  void push(double t, std::vector<double> y, std::vector<double> f);
  std::size_t size() const { return ts_.size(); }
  double front_time() const { return ts_.front(); }
  double back_time() const { return ts_.back(); }
  const std::vector<double>& back_state() const { return ys_.back(); }

  /// Hermite interpolation of component `comp` at time t (t inside the span).
  double eval(double t, std::size_t comp) const;

 private:
  std::vector<double> ts_;
  std::vector<std::vector<double>> ys_;
  std::vector<std::vector<double>> fs_;
};

struct OdeProblem {
  OdeRhs rhs;
  double t0 = 0;
  std::vector<double> y0;
  double t1 = 1;
  OdeOptions opts;
};

/// Adaptive embedded Dormand-Prince 5(4). Integrates forward or backward,
/// records every accepted step, throws BlowUpError when |y| exceeds the
/// blow-up bound and StepUnderflowError when the step size degenerates.
Trajectory solve_ivp(const OdeProblem& problem);

/// Same integrator, but lands exactly on each requested output time and
/// invokes sink(index, t, y) there (including t0 when it is times[0]).
/// Output times must be monotone in the direction of integration.
void solve_at_times(const OdeProblem& problem, std::span<const double> times,
                    const std::function<void(std::size_t, double, std::span<const double>)>& sink);

/// Monotone cubic interpolant on strictly increasing nodes. Without slopes,
/// Fritsch-Carlson estimates are used; with caller-provided slopes they are
/// passed through a Hyman-style limiter that clamps only on locally monotone
/// segments (keeping smooth extrema at full accuracy).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);
  double operator()(double x) const;

 private:
  void init_common();
  std::vector<double> x_, y_, d_;
};

}  // namespace symred
