#include <algorithm>
#include <map>

#include "symred/expr.hpp"

namespace symred {

namespace {

// A term is coef * prod(base^exp) with atomic bases keyed by printed form.
struct Factor {
  Expr base;
  Rational exp;
};

struct Term {
  Rational coef{1};
  std::map<std::string, Factor> factors;

  void push(Expr base, Rational exp) {
    std::string key = base.str();
    auto it = factors.find(key);
    if (it == factors.end()) {
      factors.emplace(std::move(key), Factor{std::move(base), exp});
    } else {
      it->second.exp = it->second.exp + exp;
      if (it->second.exp.is_zero()) factors.erase(it);
    }
  }
};

using TermList = std::vector<Term>;

TermList flatten(const Expr& e);
Expr rebuild(const TermList& terms);

Expr collect(const Expr& e) { return rebuild(flatten(e)); }

Term term_mul(const Term& a, const Term& b) {
  Term r = a;
  r.coef = a.coef * b.coef;
  for (const auto& [k, f] : b.factors) r.push(f.base, f.exp);
  return r;
}

TermList convolve(const TermList& a, const TermList& b) {
  TermList r;
  r.reserve(a.size() * b.size());
  for (const auto& ta : a)
    for (const auto& tb : b) r.push_back(term_mul(ta, tb));
  return r;
}

TermList atomic(Expr base) {
  Term t;
  t.push(std::move(base), Rational(1));
  return {t};
}

Expr canon_args(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.kind == NodeKind::apply) return Expr::apply(n.fn, collect(n.kids[0]));
  if (n.kind == NodeKind::funcsym) {
    std::vector<Expr> args;
    args.reserve(n.kids.size());
    for (const auto& k : n.kids) args.push_back(collect(k));
    return Expr::func(n.name, std::move(args), n.tags);
  }
  return e;
}

TermList flatten_pow(const Expr& base, const Rational& r) {
  if (r.is_integer() && r.num > 0) {
    TermList f = flatten(base);
    if (f.size() == 1) {
      Term t;
      t.coef = f[0].coef.pow_int(r.num);
      for (const auto& [k, fac] : f[0].factors) t.push(fac.base, fac.exp * r);
      return {t};
    }
    if (r.num <= 16) {
      TermList acc = f;
      for (long long i = 1; i < r.num; ++i) acc = convolve(acc, f);
      return acc;
    }
  }
  Expr cb = collect(base);
  if (cb.is_constant() && r.is_integer()) {
    Term t;
    t.coef = cb.node().value.pow_int(r.num);
    return {t};
  }
  TermList f = flatten(cb);
  if (f.size() == 1 && r.is_integer()) {
    Term t;
    t.coef = f[0].coef.pow_int(r.num);
    for (const auto& [k, fac] : f[0].factors) t.push(fac.base, fac.exp * r);
    return {t};
  }
  Term t;
  t.push(cb, r);
  return {t};
}

TermList flatten(const Expr& e) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::constant: {
      Term t;
      t.coef = n.value;
      return {t};
    }
    case NodeKind::parameter:
    case NodeKind::variable:
    case NodeKind::slot:
      return atomic(e);
    case NodeKind::apply:
    case NodeKind::funcsym:
      return atomic(canon_args(e));
    case NodeKind::add: {
      TermList r;
      for (const auto& k : n.kids) {
        TermList f = flatten(k);
        r.insert(r.end(), f.begin(), f.end());
      }
      return r;
    }
    case NodeKind::mul: {
      TermList r;
      Term one;
      r.push_back(one);
      for (const auto& k : n.kids) r = convolve(r, flatten(k));
      return r;
    }
    case NodeKind::pow:
      return flatten_pow(n.kids[0], n.exponent);
  }
  throw std::logic_error("unhandled node kind");
}

std::string term_key(const Term& t) {
  std::string k;
  for (const auto& [key, f] : t.factors) {
    k += key;
    k += '^';
    k += f.exp.str();
    k += ';';
  }
  return k;
}

Expr rebuild_term(const Term& t) {
  std::vector<Expr> factors;
  factors.push_back(Expr::constant(t.coef));
  for (const auto& [key, f] : t.factors) factors.push_back(Expr::pow(f.base, f.exp));
  return Expr::mul(std::move(factors));
}

Expr rebuild(const TermList& terms) {
  std::map<std::string, Term> acc;
  for (const auto& t : terms) {
    std::string key = term_key(t);
    auto it = acc.find(key);
    if (it == acc.end())
      acc.emplace(std::move(key), t);
    else
      it->second.coef = it->second.coef + t.coef;
  }
  std::vector<Expr> out;
  for (const auto& [key, t] : acc) {
    if (t.coef.is_zero()) continue;
    out.push_back(rebuild_term(t));
  }
  return Expr::add(std::move(out));
}

struct MainAtom {
  bool is_slot;
  Slot slot;

  bool matches(const Expr& base) const {
    const ExprNode& n = base.node();
    if (is_slot) return n.kind == NodeKind::slot && n.slot == slot;
    return n.kind == NodeKind::variable && n.var == Var::u;
  }
  bool occurs_inside(const Expr& base) const {
    return is_slot ? base.contains_slot(slot) : base.contains_var(Var::u);
  }
  const char* label() const { return is_slot ? slot_name(slot) : "u"; }
};

LaurentForm laurent(const Expr& e, const MainAtom& atom) {
  TermList flat = flatten(e);
  std::map<long long, TermList> groups;
  for (auto& t : flat) {
    long long p = 0;
    Term rest;
    rest.coef = t.coef;
    for (const auto& [key, f] : t.factors) {
      if (atom.matches(f.base)) {
        if (!f.exp.is_integer())
          throw NotLaurentInU(std::string("non-integer power of ") + atom.label());
        p = f.exp.num;
      } else {
        if (atom.occurs_inside(f.base))
          throw NotLaurentInU(std::string(atom.label()) +
                              " occurs inside a non-polynomial subexpression: " + f.base.str());
        rest.factors.emplace(key, f);
      }
    }
    groups[p].push_back(std::move(rest));
  }
  LaurentForm lf;
  for (auto& [p, terms] : groups) {
    Expr c = rebuild(terms);
    if (!c.is_zero_literal()) lf.coeffs.emplace(p, std::move(c));
  }
  return lf;
}

}  // namespace

Expr expand_collect(const Expr& e) { return collect(e); }

LaurentForm normalize_u_poly(const Expr& e) { return laurent(e, MainAtom{false, Slot::ut}); }

LaurentForm normalize_slot_poly(const Expr& e, Slot s) { return laurent(e, MainAtom{true, s}); }

Expr LaurentForm::reassemble() const {
  std::vector<Expr> terms;
  for (const auto& [p, c] : coeffs)
    terms.push_back(c * Expr::pow(Expr::variable(Var::u), Rational(p)));
  return Expr::add(std::move(terms));
}

std::string LaurentForm::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [p, c] : coeffs) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(p) + ": " + c.str();
  }
  return s + "}";
}

}  // namespace symred
