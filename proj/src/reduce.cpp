#include "symred/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace symred {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

Expr reaction_term(const Pde& pde) { return pde.rhs(); }

}  // namespace

OdeProblem reduced_initial_ode_tau1(const Pde& pde, const ReductionOperator& op,
                                    const std::map<std::string, double>& params, double t0,
                                    double x_start, double f0, double df0, double x_end,
                                    const OdeOptions& opts) {
  if (!op.is_tau1()) throw std::invalid_argument("tau=1 operator required");
  CompiledExpr xi(op.xi(), params), eta(op.eta(), params), rhs_k(reaction_term(pde), params);
  OdeProblem p;
  p.rhs = [xi, eta, rhs_k, t0](double x, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = eta(t0, x, y[0]) - xi(t0, x, y[0]) * y[1] - rhs_k(t0, x, y[0]);
  };
  p.t0 = x_start;
  p.y0 = {f0, df0};
  p.t1 = x_end;
  p.opts = opts;
  return p;
}

InitialProfile::InitialProfile(const Pde& pde, const ReductionOperator& op,
                               const std::map<std::string, double>& params, double t0,
                               double anchor, double f0, double df0, double x_lo, double x_hi,
                               const OdeOptions& opts)
    : lo_(x_lo), hi_(x_hi), anchor_(anchor) {
  if (anchor < x_lo || anchor > x_hi)
    throw std::invalid_argument("shooting anchor outside the profile span");
  if (x_hi > anchor)
    fwd_ = solve_ivp(reduced_initial_ode_tau1(pde, op, params, t0, anchor, f0, df0, x_hi, opts));
  if (x_lo < anchor)
    bwd_ = solve_ivp(reduced_initial_ode_tau1(pde, op, params, t0, anchor, f0, df0, x_lo, opts));
  min_ = max_ = f0;
  for (double x : linspace(x_lo, x_hi, 257)) {
    double v = value(x);
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
}

InitialProfile::InitialProfile(double x_lo, double x_hi, double f0)
    : lo_(x_lo), hi_(x_hi), min_(f0), max_(f0), constant_(true), const_value_(f0) {}

double InitialProfile::value(double x) const {
  if (constant_) return const_value_;
  if (bwd_.size() > 0 && x < anchor_) return bwd_.eval(x, 0);
  if (fwd_.size() > 0) return fwd_.eval(x, 0);
  return bwd_.eval(x, 0);
}

double InitialProfile::deriv(double x) const {
  if (constant_) return 0.0;
  if (bwd_.size() > 0 && x < anchor_) return bwd_.eval(x, 1);
  if (fwd_.size() > 0) return fwd_.eval(x, 1);
  return bwd_.eval(x, 1);
}

namespace {

struct CharacteristicField {
  CompiledExpr xi, eta;
};

std::pair<double, double> xi_range(const CharacteristicField& field, const GridSpec& spec,
                                   double pad0, double umin, double umax) {
  double lo = 0, hi = 0;
  for (double t : linspace(spec.t0, spec.t1, 5))
    for (double x : linspace(spec.x_lo - pad0, spec.x_hi + pad0, 33))
      for (double uu : linspace(umin, umax, 9)) {
        double v = field.xi(t, x, uu);
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  return {lo, hi};
}

}  // namespace

GridSolution characteristics_solution_tau1(const Pde& pde, const ReductionOperator& op,
                                           const std::map<std::string, double>& params,
                                           const GridSpec& spec, double f0, double df0,
                                           const Tau1PipelineOptions& opts) {
  if (!op.is_tau1()) throw std::invalid_argument("tau=1 operator required");
  CharacteristicField field{CompiledExpr(op.xi(), params), CompiledExpr(op.eta(), params)};

  const double width = spec.x_hi - spec.x_lo;
  const double T = spec.t1 - spec.t0;

  // provisional profile over the bare domain fixes the u-range for the
  // corridor estimate
  InitialProfile probe = opts.constant_profile
                             ? InitialProfile(spec.x_lo, spec.x_hi, f0)
                             : InitialProfile(pde, op, params, spec.t0, spec.x_lo, f0, df0,
                                              spec.x_lo, spec.x_hi, opts.ode);
  double uspan = std::max(1e-3, probe.max_value() - probe.min_value());
  double umin = probe.min_value() - 0.2 * uspan, umax = probe.max_value() + 0.2 * uspan;

  // characteristics drifting right drain coverage on the left and vice
  // versa; pad each side only as far as the flow can actually travel
  auto [xi_lo, xi_hi] = xi_range(field, spec, 0.05 * width, umin, umax);
  double pad_left = opts.pad_factor * T * std::max(0.0, xi_hi) + 0.05 * width;
  double pad_right = opts.pad_factor * T * std::max(0.0, -xi_lo) + 0.05 * width;
  double corr_lo = spec.x_lo - pad_left, corr_hi = spec.x_hi + pad_right;

  GridSolution sol;
  sol.ts = linspace(spec.t0, spec.t1, spec.nt);
  sol.xs = linspace(spec.x_lo, spec.x_hi, spec.nx);
  sol.u.assign(static_cast<std::size_t>(spec.nt) * spec.nx, 0.0);
  sol.route = "tau1-characteristics";
  sol.params = params;

  const int m = opts.oversample * spec.nx;
  std::vector<double> launch = linspace(corr_lo, corr_hi, m);

  // profile values exactly at the launch points (dense-output interpolation
  // between profile steps is only C^1 and its kinks would dominate the u_xx
  // stencil after division by h^2)
  std::vector<double> f_at(m, f0), df_at(m, 0.0);
  if (!opts.constant_profile) {
    std::vector<double> right{spec.x_lo}, left{spec.x_lo};
    std::vector<int> right_idx, left_idx;
    for (int i = 0; i < m; ++i) {
      if (launch[i] >= spec.x_lo) {
        right.push_back(launch[i]);
        right_idx.push_back(i);
      } else {
        left.push_back(launch[i]);
        left_idx.push_back(i);
      }
    }
    std::sort(left.begin() + 1, left.end(), std::greater<double>());
    std::sort(left_idx.begin(), left_idx.end(),
              [&](int a, int b) { return launch[a] > launch[b]; });
    auto run = [&](const std::vector<double>& times, const std::vector<int>& idx) {
      if (idx.empty()) return;
      OdeProblem prof = reduced_initial_ode_tau1(pde, op, params, spec.t0, spec.x_lo, f0, df0,
                                                 times.back(), opts.ode);
      solve_at_times(prof, times, [&](std::size_t j, double, std::span<const double> y) {
        if (j == 0) return;
        f_at[idx[j - 1]] = y[0];
        df_at[idx[j - 1]] = y[1];
      });
    };
    run(right, right_idx);
    run(left, left_idx);
  }

  // state per characteristic: (x, u, q, p) where q = dx/dx0, p = du/dx0 are
  // the variational components; p/q is the exact slope u_x carried by the
  // flow, used to keep the slice interpolation at full order
  CompiledExpr xi_x(differentiate(op.xi(), Var::x), params);
  CompiledExpr xi_u(differentiate(op.xi(), Var::u), params);
  CompiledExpr eta_x(differentiate(op.eta(), Var::x), params);
  CompiledExpr eta_u(differentiate(op.eta(), Var::u), params);

  std::vector<std::vector<double>> X(spec.nt, std::vector<double>(m));
  std::vector<std::vector<double>> U(spec.nt, std::vector<double>(m));
  std::vector<std::vector<double>> S(spec.nt, std::vector<double>(m));  // slopes p/q

  OdeProblem p;
  p.opts = opts.ode;
  p.rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    double x = y[0], uu = y[1], q = y[2], pp = y[3];
    dy[0] = field.xi(t, x, uu);
    dy[1] = field.eta(t, x, uu);
    dy[2] = xi_x(t, x, uu) * q + xi_u(t, x, uu) * pp;
    dy[3] = eta_x(t, x, uu) * q + eta_u(t, x, uu) * pp;
  };
  for (int i = 0; i < m; ++i) {
    p.t0 = spec.t0;
    p.y0 = {launch[i], f_at[i], 1.0, df_at[i]};
    solve_at_times(p, sol.ts, [&](std::size_t j, double, std::span<const double> y) {
      X[j][i] = y[0];
      U[j][i] = y[1];
      S[j][i] = y[3] / y[2];
    });
  }

  for (int j = 0; j < spec.nt; ++j) {
    for (int i = 0; i + 1 < m; ++i)
      if (!(X[j][i + 1] - X[j][i] > 1e-12 * width)) throw CharacteristicCrossing(sol.ts[j]);
    if (X[j].front() > spec.x_lo + 1e-12 || X[j].back() < spec.x_hi - 1e-12)
      throw CorridorExit(sol.ts[j]);
    MonotoneCubic interp(X[j], U[j], S[j]);
    for (int i = 0; i < spec.nx; ++i) {
      double v = interp(sol.xs[i]);
      if (!std::isfinite(v)) throw std::runtime_error("non-finite grid value");
      sol.u[static_cast<std::size_t>(j) * spec.nx + i] = v;
    }
  }
  return sol;
}

GridSolution tau0_solution(const Pde& pde, const ReductionOperator& op,
                           const std::map<std::string, double>& params, double x0, double v0,
                           const GridSpec& spec, const OdeOptions& opts) {
  if (op.is_tau1()) throw std::invalid_argument("tau=0 operator required");
  if (x0 < spec.x_lo || x0 > spec.x_hi)
    throw std::invalid_argument("anchor point outside the spatial domain");

  const Expr& eta = op.eta();
  // u_t on the invariant surface: eta eta_u + eta_x + k u^2 (1-u)
  Expr anchor_rhs_expr =
      eta * differentiate(eta, Var::u) + differentiate(eta, Var::x) + reaction_term(pde);
  CompiledExpr anchor_rhs(anchor_rhs_expr, params);
  CompiledExpr eta_c(eta, params);

  GridSolution sol;
  sol.ts = linspace(spec.t0, spec.t1, spec.nt);
  sol.xs = linspace(spec.x_lo, spec.x_hi, spec.nx);
  sol.u.assign(static_cast<std::size_t>(spec.nt) * spec.nx, 0.0);
  sol.route = "tau0-anchor";
  sol.params = params;

  // anchor value v(t) at x0
  std::vector<double> v(spec.nt);
  {
    OdeProblem p;
    p.opts = opts;
    p.rhs = [&anchor_rhs, x0](double t, std::span<const double> y, std::span<double> dy) {
      dy[0] = anchor_rhs(t, x0, y[0]);
    };
    p.t0 = spec.t0;
    p.y0 = {v0};
    solve_at_times(p, sol.ts, [&](std::size_t j, double, std::span<const double> y) {
      v[j] = y[0];
    });
  }

  // split the grid abscissas at the anchor
  std::vector<double> right, left;  // right: ascending from x0; left: descending
  for (double x : sol.xs)
    (x >= x0 ? right : left).push_back(x);
  std::sort(left.begin(), left.end(), std::greater<double>());

  for (int j = 0; j < spec.nt; ++j) {
    double tj = sol.ts[j];
    OdeProblem p;
    p.opts = opts;
    p.rhs = [&eta_c, tj](double x, std::span<const double> y, std::span<double> dy) {
      dy[0] = eta_c(tj, x, y[0]);
    };
    auto sweep = [&](const std::vector<double>& targets) {
      if (targets.empty()) return;
      std::vector<double> times;
      times.push_back(x0);
      times.insert(times.end(), targets.begin(), targets.end());
      p.t0 = x0;
      p.y0 = {v[j]};
      solve_at_times(p, times, [&](std::size_t idx, double xq, std::span<const double> y) {
        if (idx == 0) return;  // the anchor itself
        auto it = std::lower_bound(sol.xs.begin(), sol.xs.end(), xq - 1e-12);
        std::size_t col = static_cast<std::size_t>(it - sol.xs.begin());
        double val = y[0];
        if (!std::isfinite(val)) throw std::runtime_error("non-finite grid value");
        sol.u[static_cast<std::size_t>(j) * spec.nx + col] = val;
      });
    };
    sweep(right);
    sweep(left);
  }
  return sol;
}

void write_grid_csv(std::ostream& os, const GridSolution& sol) {
  char buf[128];
  os << "t,x,u\n";
  for (int i = 0; i < sol.nt(); ++i)
    for (int j = 0; j < sol.nx(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sol.ts[i], sol.xs[j], sol.at(i, j));
      os << buf;
    }
}

}  // namespace symred
