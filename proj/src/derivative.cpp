#include "symred/expr.hpp"

namespace symred {

namespace {

struct Atom {
  bool is_slot;
  Var var;
  Slot slot;
};

Expr d(const Expr& e, const Atom& a);

Expr d_builtin(Builtin f, const Expr& z) {
  Expr one = Expr::integer(1);
  switch (f) {
    case Builtin::tan:  return one + Expr::pow(Expr::apply(Builtin::tan, z), Rational(2));
    case Builtin::cot:  return -(one + Expr::pow(Expr::apply(Builtin::cot, z), Rational(2)));
    case Builtin::tanh: return one - Expr::pow(Expr::apply(Builtin::tanh, z), Rational(2));
    case Builtin::coth: return one - Expr::pow(Expr::apply(Builtin::coth, z), Rational(2));
    case Builtin::sin:  return Expr::apply(Builtin::cos, z);
    case Builtin::cos:  return -Expr::apply(Builtin::sin, z);
    case Builtin::exp:  return Expr::apply(Builtin::exp, z);
    case Builtin::ln:   return Expr::integer(1) / z;
  }
  throw std::logic_error("unhandled builtin");
}

Expr d(const Expr& e, const Atom& a) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::constant:
    case NodeKind::parameter:
      return Expr::integer(0);
    case NodeKind::variable:
      return Expr::integer(!a.is_slot && n.var == a.var ? 1 : 0);
    case NodeKind::slot:
      return Expr::integer(a.is_slot && n.slot == a.slot ? 1 : 0);
    case NodeKind::apply: {
      Expr dz = d(n.kids[0], a);
      if (dz.is_zero_literal()) return dz;
      return d_builtin(n.fn, n.kids[0]) * dz;
    }
    case NodeKind::funcsym: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        Expr dz = d(n.kids[i], a);
        if (dz.is_zero_literal()) continue;
        std::vector<int> tags = n.tags;
        ++tags[i];
        terms.push_back(Expr::func(n.name, n.kids, std::move(tags)) * dz);
      }
      return Expr::add(std::move(terms));
    }
    case NodeKind::add: {
      std::vector<Expr> kids;
      kids.reserve(n.kids.size());
      for (const auto& k : n.kids) kids.push_back(d(k, a));
      return Expr::add(std::move(kids));
    }
    case NodeKind::mul: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        Expr dk = d(n.kids[i], a);
        if (dk.is_zero_literal()) continue;
        std::vector<Expr> factors = n.kids;
        factors[i] = dk;
        terms.push_back(Expr::mul(std::move(factors)));
      }
      return Expr::add(std::move(terms));
    }
    case NodeKind::pow: {
      Expr db = d(n.kids[0], a);
      if (db.is_zero_literal()) return db;
      Expr rebuilt = Expr::pow(n.kids[0], n.exponent - Rational(1));
      return Expr::constant(n.exponent) * rebuilt * db;
    }
  }
  throw std::logic_error("unhandled node kind");
}

}  // namespace

Expr differentiate(const Expr& e, Var v) { return d(e, Atom{false, v, Slot::ut}); }
Expr differentiate_slot(const Expr& e, Slot s) { return d(e, Atom{true, Var::t, s}); }

Expr substitute(const Expr& e, const Bindings& b) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::constant:
      return e;
    case NodeKind::parameter: {
      auto it = b.params.find(n.name);
      return it == b.params.end() ? e : it->second;
    }
    case NodeKind::variable: {
      auto it = b.vars.find(n.var);
      return it == b.vars.end() ? e : it->second;
    }
    case NodeKind::slot: {
      auto it = b.slots.find(n.slot);
      return it == b.slots.end() ? e : it->second;
    }
    case NodeKind::apply:
      return Expr::apply(n.fn, substitute(n.kids[0], b));
    case NodeKind::funcsym: {
      auto it = b.funcs.find(n.name);
      if (it == b.funcs.end()) {
        std::vector<Expr> args;
        args.reserve(n.kids.size());
        for (const auto& k : n.kids) args.push_back(substitute(k, b));
        return Expr::func(n.name, std::move(args), n.tags);
      }
      const FuncReplacement& r = it->second;
      if (r.args.size() != n.kids.size())
        throw ArityError("function symbol '" + n.name + "' replaced with wrong arity");
      // differentiate the body per tag, then plug the (substituted) actual
      // arguments in for the declared variables
      Expr body = r.body;
      for (std::size_t i = 0; i < n.tags.size(); ++i)
        for (int k = 0; k < n.tags[i]; ++k) body = differentiate(body, r.args[i]);
      Bindings inner;
      for (std::size_t i = 0; i < r.args.size(); ++i)
        inner.vars[r.args[i]] = substitute(n.kids[i], b);
      return substitute(body, inner);
    }
    case NodeKind::add: {
      std::vector<Expr> kids;
      kids.reserve(n.kids.size());
      for (const auto& k : n.kids) kids.push_back(substitute(k, b));
      return Expr::add(std::move(kids));
    }
    case NodeKind::mul: {
      std::vector<Expr> kids;
      kids.reserve(n.kids.size());
      for (const auto& k : n.kids) kids.push_back(substitute(k, b));
      return Expr::mul(std::move(kids));
    }
    case NodeKind::pow:
      return Expr::pow(substitute(n.kids[0], b), n.exponent);
  }
  throw std::logic_error("unhandled node kind");
}

}  // namespace symred
