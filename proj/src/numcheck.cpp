#include "symred/numcheck.hpp"

#include <cmath>
#include <cstdio>

namespace symred {

namespace {

// Fixed-topology pairwise summation so reductions are independent of
// traversal order.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

ResidualStats stats_from_field(const std::vector<double>& r2, double linf, double ht, double hx) {
  ResidualStats s;
  s.linf = linf;
  s.h_t = ht;
  s.h_x = hx;
  s.interior_points = static_cast<long long>(r2.size());
  s.l2 = r2.empty() ? 0 : std::sqrt(pairwise_sum(r2) / static_cast<double>(r2.size()));
  return s;
}

}  // namespace

ResidualStats pde_residual(const GridSolution& sol, const Pde& pde,
                           const std::map<std::string, double>& params) {
  const int nt = sol.nt(), nx = sol.nx();
  if (nt < 3 || nx < 3) throw std::invalid_argument("residual needs at least a 3x3 grid");
  const double ht = sol.ts[1] - sol.ts[0];
  const double hx = sol.xs[1] - sol.xs[0];
  CompiledExpr reaction(pde.rhs(), params);

  std::vector<double> r2;
  r2.reserve(static_cast<std::size_t>(nt - 2) * (nx - 2));
  double linf = 0;
  for (int i = 1; i + 1 < nt; ++i) {
    for (int j = 1; j + 1 < nx; ++j) {
      double ut = (sol.at(i + 1, j) - sol.at(i - 1, j)) / (2 * ht);
      double uxx = (sol.at(i, j + 1) - 2 * sol.at(i, j) + sol.at(i, j - 1)) / (hx * hx);
      double r = ut - uxx - reaction(sol.ts[i], sol.xs[j], sol.at(i, j));
      linf = std::max(linf, std::abs(r));
      r2.push_back(r * r);
    }
  }
  return stats_from_field(r2, linf, ht, hx);
}

ResidualStats characteristic_residual(const GridSolution& sol, const ReductionOperator& op,
                                      const std::map<std::string, double>& params) {
  const int nt = sol.nt(), nx = sol.nx();
  if (nt < 3 || nx < 3) throw std::invalid_argument("residual needs at least a 3x3 grid");
  const double ht = sol.ts[1] - sol.ts[0];
  const double hx = sol.xs[1] - sol.xs[0];
  CompiledExpr eta(op.eta(), params);
  CompiledExpr xi(op.xi(), params);

  std::vector<double> r2;
  r2.reserve(static_cast<std::size_t>(nt - 2) * (nx - 2));
  double linf = 0;
  for (int i = 1; i + 1 < nt; ++i) {
    for (int j = 1; j + 1 < nx; ++j) {
      double dxu = (sol.at(i, j + 1) - sol.at(i, j - 1)) / (2 * hx);
      double r;
      if (op.is_tau1()) {
        double dtu = (sol.at(i + 1, j) - sol.at(i - 1, j)) / (2 * ht);
        r = eta(sol.ts[i], sol.xs[j], sol.at(i, j)) - dtu -
            xi(sol.ts[i], sol.xs[j], sol.at(i, j)) * dxu;
      } else {
        r = eta(sol.ts[i], sol.xs[j], sol.at(i, j)) - dxu;
      }
      linf = std::max(linf, std::abs(r));
      r2.push_back(r * r);
    }
  }
  return stats_from_field(r2, linf, ht, hx);
}

std::vector<GridSpec> refinement_levels(const GridSpec& finest, int count) {
  std::vector<GridSpec> v;
  for (int level = count - 1; level >= 0; --level) {
    int factor = 1 << level;
    GridSpec g = finest;
    g.nt = (finest.nt - 1) / factor + 1;
    g.nx = (finest.nx - 1) / factor + 1;
    v.push_back(g);
  }
  return v;
}

ConvergenceStudy convergence_study(const std::function<GridSolution(const GridSpec&)>& builder,
                                   const std::vector<GridSpec>& levels, const Pde& pde,
                                   const std::map<std::string, double>& params) {
  if (levels.size() < 3)
    throw std::invalid_argument("convergence study needs at least three levels");
  ConvergenceStudy study;
  for (const auto& spec : levels) {
    GridSolution sol = builder(spec);
    study.levels.push_back({spec, pde_residual(sol, pde, params)});
  }
  for (std::size_t i = 0; i + 1 < study.levels.size(); ++i)
    if (study.levels[i + 1].stats.linf >= study.levels[i].stats.linf) study.monotone = false;
  for (const auto& l : study.levels)
    if (l.stats.linf < 1e-13) study.floor_reached = true;

  if (!study.floor_reached) {
    // least-squares slope of log(linf) against log(h_x)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(study.levels.size());
    for (const auto& l : study.levels) {
      double lx = std::log(l.stats.h_x);
      double ly = std::log(l.stats.linf);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    study.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return study;
}

std::string convergence_csv(const ConvergenceStudy& study) {
  std::string out = "level,h_t,h_x,linf,l2,order\n";
  char buf[256];
  for (std::size_t i = 0; i < study.levels.size(); ++i) {
    const auto& cur = study.levels[i].stats;
    std::string order;
    if (i > 0) {
      const auto& prev = study.levels[i - 1].stats;
      double o = std::log(prev.linf / cur.linf) / std::log(prev.h_x / cur.h_x);
      std::snprintf(buf, sizeof buf, "%.17g", o);
      order = buf;
    }
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%s\n", i, cur.h_t, cur.h_x,
                  cur.linf, cur.l2, order.c_str());
    out += buf;
  }
  return out;
}

}  // namespace symred
