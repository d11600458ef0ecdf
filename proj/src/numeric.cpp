#include <cmath>
#include <limits>

#include "symred/expr.hpp"

namespace symred {

namespace {

double powi(double b, long long e) {
  if (e < 0) return 1.0 / powi(b, -e);
  double acc = 1.0;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

double eval_builtin(Builtin f, double z) {
  switch (f) {
    case Builtin::tan: return std::tan(z);
    case Builtin::tanh: return std::tanh(z);
    case Builtin::cot: return 1.0 / std::tan(z);
    case Builtin::coth: return 1.0 / std::tanh(z);
    case Builtin::sin: return std::sin(z);
    case Builtin::cos: return std::cos(z);
    case Builtin::exp: return std::exp(z);
    case Builtin::ln: return std::log(z);
  }
  throw std::logic_error("unhandled builtin");
}

double eval_rec(const Expr& e, const EvalPoint& p) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::constant:
      return n.value.to_double();
    case NodeKind::parameter: {
      auto it = p.params.find(n.name);
      if (it == p.params.end()) throw EvalError("unbound parameter '" + n.name + "'");
      return it->second;
    }
    case NodeKind::variable:
      switch (n.var) {
        case Var::t: return p.t;
        case Var::x: return p.x;
        case Var::u: return p.u;
      }
      break;
    case NodeKind::slot: {
      auto it = p.slots.find(n.slot);
      if (it == p.slots.end())
        throw EvalError(std::string("unbound slot '") + slot_name(n.slot) + "'");
      return it->second;
    }
    case NodeKind::apply:
      return eval_builtin(n.fn, eval_rec(n.kids[0], p));
    case NodeKind::funcsym:
      throw EvalError("unbound function symbol '" + n.name + "'");
    case NodeKind::add: {
      double s = 0;
      for (const auto& k : n.kids) s += eval_rec(k, p);
      return s;
    }
    case NodeKind::mul: {
      double s = 1;
      for (const auto& k : n.kids) s *= eval_rec(k, p);
      return s;
    }
    case NodeKind::pow: {
      double b = eval_rec(n.kids[0], p);
      if (n.exponent.is_integer()) return powi(b, n.exponent.num);
      return std::pow(b, n.exponent.to_double());
    }
  }
  throw std::logic_error("unhandled node kind");
}

}  // namespace

double eval_numeric(const Expr& e, const EvalPoint& p) {
  double v = eval_rec(e, p);
  if (!std::isfinite(v)) throw EvalError("evaluation produced a non-finite value (pole/overflow)");
  return v;
}

// ---------------------------------------------------------------------------

std::uint64_t Rng::next() {
  // splitmix64: stateless-quality, fully portable
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

// ---------------------------------------------------------------------------

namespace {

// Top-level additive terms; constants multiplying a sum are pushed through so
// the cancellation scale is meaningful for expressions like -(a+b).
void collect_terms(const Expr& e, std::vector<Expr>& out) {
  const ExprNode& n = e.node();
  if (n.kind == NodeKind::add) {
    for (const auto& k : n.kids) collect_terms(k, out);
    return;
  }
  if (n.kind == NodeKind::mul && n.kids.size() == 2 && n.kids[0].is_constant() &&
      n.kids[1].kind() == NodeKind::add) {
    for (const auto& k : n.kids[1].node().kids) collect_terms(n.kids[0] * k, out);
    return;
  }
  out.push_back(e);
}

double draw_from_union(Rng& rng, const std::vector<Interval>& ivs) {
  double total = 0;
  for (const auto& iv : ivs) total += iv.hi - iv.lo;
  double r = rng.uniform01() * total;
  for (const auto& iv : ivs) {
    double w = iv.hi - iv.lo;
    if (r < w) return iv.lo + r;
    r -= w;
  }
  return ivs.back().hi;
}

const std::vector<Interval>& default_param_range() {
  static const std::vector<Interval> r = {{-3.0, -0.1}, {0.1, 3.0}};
  return r;
}

}  // namespace

ZeroResult is_zero(const Expr& e, const ZeroTestPolicy& policy, const ParamRanges& ranges) {
  std::set<std::string> params;
  e.collect_params(params);
  const bool has_ux = e.contains_slot(Slot::ux);

  std::vector<Expr> terms;
  collect_terms(e, terms);

  const double cap = 1.0 / policy.margin;
  Rng rng(policy.seed);

  const int draws = params.empty() ? 1 : policy.param_draws;
  long long rejected = 0;
  const long long max_attempts =
      static_cast<long long>(draws) * policy.samples * 50 + 1000;

  for (int d = 0; d < draws; ++d) {
    EvalPoint pt;
    for (const auto& name : params) {
      auto it = ranges.ranges.find(name);
      const auto& ivs = it == ranges.ranges.end() ? default_param_range() : it->second;
      pt.params[name] = draw_from_union(rng, ivs);
    }
    int accepted = 0;
    while (accepted < policy.samples) {
      if (rejected > max_attempts)
        throw SamplingError("zero test could not sample away from singularities");
      pt.t = rng.uniform(policy.box.t.lo, policy.box.t.hi);
      pt.x = rng.uniform(policy.box.x.lo, policy.box.x.hi);
      pt.u = rng.uniform(policy.box.u.lo, policy.box.u.hi);
      if (has_ux) pt.slots[Slot::ux] = rng.uniform(policy.box.ux.lo, policy.box.ux.hi);

      double value = 0, scale = 0;
      bool ok = true;
      for (const auto& term : terms) {
        double tv;
        try {
          tv = eval_rec(term, pt);
        } catch (const EvalError&) {
          ok = false;
          break;
        }
        if (!std::isfinite(tv) || std::abs(tv) > cap) {
          ok = false;
          break;
        }
        value += tv;
        scale = std::max(scale, std::abs(tv));
      }
      if (!ok) {
        ++rejected;
        continue;
      }
      ++accepted;
      if (std::abs(value) > policy.tolerance * (1.0 + scale)) {
        ZeroResult r;
        r.zero = false;
        ZeroWitness w;
        w.t = pt.t;
        w.x = pt.x;
        w.u = pt.u;
        w.params = pt.params;
        if (has_ux) w.params["u_x"] = pt.slots[Slot::ux];
        w.value = value;
        w.scale = scale;
        r.witness = w;
        r.tolerance_sensitive =
            std::abs(value) <= 256.0 * std::numeric_limits<double>::epsilon() * (1.0 + scale);
        return r;
      }
    }
  }
  return ZeroResult{};
}

// ---------------------------------------------------------------------------
// Compiled evaluator

namespace {

enum OpCode {
  kPushConst,
  kPushT,
  kPushX,
  kPushU,
  kAdd,
  kMul,
  kPowInt,
  kPowD,
  kTan,
  kTanh,
  kCot,
  kCoth,
  kSin,
  kCos,
  kExp,
  kLn
};

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::map<std::string, double>& params) {
  struct Compiler {
    std::vector<Op>& ops;
    const std::map<std::string, double>& params;

    void walk(const Expr& e) {
      const ExprNode& n = e.node();
      switch (n.kind) {
        case NodeKind::constant:
          ops.push_back({kPushConst, n.value.to_double(), 0});
          return;
        case NodeKind::parameter: {
          auto it = params.find(n.name);
          if (it == params.end())
            throw EvalError("cannot compile unbound parameter '" + n.name + "'");
          ops.push_back({kPushConst, it->second, 0});
          return;
        }
        case NodeKind::variable:
          ops.push_back({n.var == Var::t ? kPushT : n.var == Var::x ? kPushX : kPushU, 0, 0});
          return;
        case NodeKind::slot:
          throw EvalError("cannot compile jet slots");
        case NodeKind::funcsym:
          throw EvalError("cannot compile unbound function symbol '" + n.name + "'");
        case NodeKind::apply: {
          walk(n.kids[0]);
          int code;
          switch (n.fn) {
            case Builtin::tan: code = kTan; break;
            case Builtin::tanh: code = kTanh; break;
            case Builtin::cot: code = kCot; break;
            case Builtin::coth: code = kCoth; break;
            case Builtin::sin: code = kSin; break;
            case Builtin::cos: code = kCos; break;
            case Builtin::exp: code = kExp; break;
            default: code = kLn; break;
          }
          ops.push_back({code, 0, 0});
          return;
        }
        case NodeKind::add:
          walk(n.kids[0]);
          for (std::size_t i = 1; i < n.kids.size(); ++i) {
            walk(n.kids[i]);
            ops.push_back({kAdd, 0, 0});
          }
          return;
        case NodeKind::mul:
          walk(n.kids[0]);
          for (std::size_t i = 1; i < n.kids.size(); ++i) {
            walk(n.kids[i]);
            ops.push_back({kMul, 0, 0});
          }
          return;
        case NodeKind::pow:
          walk(n.kids[0]);
          if (n.exponent.is_integer())
            ops.push_back({kPowInt, 0, n.exponent.num});
          else
            ops.push_back({kPowD, n.exponent.to_double(), 0});
          return;
      }
      throw std::logic_error("unhandled node kind");
    }
  };
  Compiler{ops_, params}.walk(e);
  stack_.reserve(32);
}

double CompiledExpr::operator()(double t, double x, double u) const {
  std::vector<double>& st = stack_;
  st.clear();
  for (const Op& op : ops_) {
    switch (op.code) {
      case kPushConst: st.push_back(op.imm); break;
      case kPushT: st.push_back(t); break;
      case kPushX: st.push_back(x); break;
      case kPushU: st.push_back(u); break;
      case kAdd: {
        double b = st.back();
        st.pop_back();
        st.back() += b;
        break;
      }
      case kMul: {
        double b = st.back();
        st.pop_back();
        st.back() *= b;
        break;
      }
      case kPowInt: st.back() = powi(st.back(), op.iexp); break;
      case kPowD: st.back() = std::pow(st.back(), op.imm); break;
      case kTan: st.back() = std::tan(st.back()); break;
      case kTanh: st.back() = std::tanh(st.back()); break;
      case kCot: st.back() = 1.0 / std::tan(st.back()); break;
      case kCoth: st.back() = 1.0 / std::tanh(st.back()); break;
      case kSin: st.back() = std::sin(st.back()); break;
      case kCos: st.back() = std::cos(st.back()); break;
      case kExp: st.back() = std::exp(st.back()); break;
      case kLn: st.back() = std::log(st.back()); break;
    }
  }
  return st.back();
}

}  // namespace symred
