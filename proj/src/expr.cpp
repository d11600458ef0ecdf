#include "symred/expr.hpp"

#include <algorithm>
#include <array>

namespace symred {

const char* var_name(Var v) {
  switch (v) {
    case Var::t: return "t";
    case Var::x: return "x";
    case Var::u: return "u";
  }
  return "?";
}

const char* slot_name(Slot s) {
  switch (s) {
    case Slot::ut: return "u_t";
    case Slot::ux: return "u_x";
    case Slot::utt: return "u_tt";
    case Slot::utx: return "u_tx";
    case Slot::uxx: return "u_xx";
    case Slot::utxx: return "u_txx";
    case Slot::uxxx: return "u_xxx";
  }
  return "?";
}

const char* builtin_name(Builtin f) {
  switch (f) {
    case Builtin::tan: return "tan";
    case Builtin::tanh: return "tanh";
    case Builtin::cot: return "cot";
    case Builtin::coth: return "coth";
    case Builtin::sin: return "sin";
    case Builtin::cos: return "cos";
    case Builtin::exp: return "exp";
    case Builtin::ln: return "ln";
  }
  return "?";
}

std::optional<Builtin> builtin_by_name(const std::string& name) {
  static const std::array<Builtin, 8> all = {Builtin::tan, Builtin::tanh, Builtin::cot,
                                             Builtin::coth, Builtin::sin, Builtin::cos,
                                             Builtin::exp, Builtin::ln};
  for (Builtin f : all)
    if (name == builtin_name(f)) return f;
  return std::nullopt;
}

namespace {

std::shared_ptr<const ExprNode> make(ExprNode n) {
  return std::make_shared<const ExprNode>(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(constant(Rational(0))) {}

Expr Expr::constant(Rational r) {
  ExprNode n;
  n.kind = NodeKind::constant;
  n.value = r;
  return Expr(make(std::move(n)));
}

Expr Expr::variable(Var v) {
  ExprNode n;
  n.kind = NodeKind::variable;
  n.var = v;
  return Expr(make(std::move(n)));
}

Expr Expr::parameter(std::string name) {
  ExprNode n;
  n.kind = NodeKind::parameter;
  n.name = std::move(name);
  return Expr(make(std::move(n)));
}

Expr Expr::slot(Slot s) {
  ExprNode n;
  n.kind = NodeKind::slot;
  n.slot = s;
  return Expr(make(std::move(n)));
}

Expr Expr::apply(Builtin f, Expr arg) {
  ExprNode n;
  n.kind = NodeKind::apply;
  n.fn = f;
  n.kids.push_back(std::move(arg));
  return Expr(make(std::move(n)));
}

Expr Expr::func(std::string name, std::vector<Expr> args, std::vector<int> tags) {
  if (tags.empty()) tags.assign(args.size(), 0);
  if (tags.size() != args.size())
    throw std::invalid_argument("function symbol tag/argument count mismatch");
  for (int t : tags)
    if (t < 0) throw std::invalid_argument("negative derivative tag");
  ExprNode n;
  n.kind = NodeKind::funcsym;
  n.name = std::move(name);
  n.kids = std::move(args);
  n.tags = std::move(tags);
  return Expr(make(std::move(n)));
}

Expr Expr::add(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  Rational c(0);
  bool saw_const = false;
  std::size_t const_pos = 0;
  for (auto& k : kids) {
    if (k.kind() == NodeKind::add) {
      for (const auto& g : k.node().kids) {
        if (g.is_constant()) {
          if (!saw_const) {
            saw_const = true;
            const_pos = flat.size();
          }
          c = c + g.node().value;
        } else {
          flat.push_back(g);
        }
      }
    } else if (k.is_constant()) {
      if (!saw_const) {
        saw_const = true;
        const_pos = flat.size();
      }
      c = c + k.node().value;
    } else {
      flat.push_back(k);
    }
  }
  if (saw_const && !c.is_zero())
    flat.insert(flat.begin() + static_cast<long>(std::min(const_pos, flat.size())), constant(c));
  if (flat.empty()) return constant(Rational(0));
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = NodeKind::add;
  n.kids = std::move(flat);
  return Expr(make(std::move(n)));
}

Expr Expr::mul(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  Rational c(1);
  for (auto& k : kids) {
    if (k.kind() == NodeKind::mul) {
      for (const auto& g : k.node().kids) {
        if (g.is_constant())
          c = c * g.node().value;
        else
          flat.push_back(g);
      }
    } else if (k.is_constant()) {
      c = c * k.node().value;
    } else {
      flat.push_back(k);
    }
  }
  if (c.is_zero()) return constant(Rational(0));
  if (!c.is_one()) flat.insert(flat.begin(), constant(c));
  if (flat.empty()) return constant(Rational(1));
  if (flat.size() == 1) return flat[0];
  ExprNode n;
  n.kind = NodeKind::mul;
  n.kids = std::move(flat);
  return Expr(make(std::move(n)));
}

Expr Expr::pow(Expr base, Rational exponent) {
  if (exponent.is_zero()) return constant(Rational(1));
  if (exponent.is_one()) return base;
  if (base.is_constant() && exponent.is_integer())
    return constant(base.node().value.pow_int(exponent.num));
  if (base.kind() == NodeKind::pow && exponent.is_integer())
    return pow(base.node().kids[0], base.node().exponent * exponent);
  if (base.kind() == NodeKind::mul && exponent.is_integer()) {
    // (a*b)^n == a^n*b^n for integer n; keeps division forms canonical
    std::vector<Expr> kids;
    kids.reserve(base.node().kids.size());
    for (const auto& k : base.node().kids) kids.push_back(pow(k, exponent));
    return mul(std::move(kids));
  }
  ExprNode n;
  n.kind = NodeKind::pow;
  n.exponent = exponent;
  n.kids.push_back(std::move(base));
  return Expr(make(std::move(n)));
}

Expr operator-(const Expr& a) { return Expr::mul({Expr::integer(-1), a}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant()) return Expr::mul({Expr::constant(b.node().value.reciprocal()), a});
  return Expr::mul({a, Expr::pow(b, Rational(-1))});
}

bool Expr::same(const Expr& other) const {
  if (node_ == other.node_) return true;
  const ExprNode& a = *node_;
  const ExprNode& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::constant: return a.value == b.value;
    case NodeKind::parameter: return a.name == b.name;
    case NodeKind::variable: return a.var == b.var;
    case NodeKind::slot: return a.slot == b.slot;
    case NodeKind::apply:
      if (a.fn != b.fn) return false;
      break;
    case NodeKind::funcsym:
      if (a.name != b.name || a.tags != b.tags) return false;
      break;
    case NodeKind::pow:
      if (!(a.exponent == b.exponent)) return false;
      break;
    default: break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!a.kids[i].same(b.kids[i])) return false;
  return true;
}

bool Expr::contains_var(Var v) const {
  const ExprNode& n = *node_;
  if (n.kind == NodeKind::variable) return n.var == v;
  for (const auto& k : n.kids)
    if (k.contains_var(v)) return true;
  return false;
}

bool Expr::contains_slot(Slot s) const {
  const ExprNode& n = *node_;
  if (n.kind == NodeKind::slot) return n.slot == s;
  for (const auto& k : n.kids)
    if (k.contains_slot(s)) return true;
  return false;
}

bool Expr::contains_any_slot() const {
  const ExprNode& n = *node_;
  if (n.kind == NodeKind::slot) return true;
  for (const auto& k : n.kids)
    if (k.contains_any_slot()) return true;
  return false;
}

void Expr::collect_params(std::set<std::string>& out) const {
  const ExprNode& n = *node_;
  if (n.kind == NodeKind::parameter) out.insert(n.name);
  for (const auto& k : n.kids) k.collect_params(out);
}

void Expr::collect_funcs(std::set<std::string>& out) const {
  const ExprNode& n = *node_;
  if (n.kind == NodeKind::funcsym) out.insert(n.name);
  for (const auto& k : n.kids) k.collect_funcs(out);
}

// ---------------------------------------------------------------------------
// Printer. Emits the exact surface grammar the parser accepts; negative
// powers render through division so that parse(print(e)) == e structurally.

namespace {

enum Prec { kAdd = 0, kMul = 1, kPow = 2, kAtom = 3 };

std::string print_node(const Expr& e, int parent);

// Splits a term into (negative?, printed magnitude) for sum rendering.
std::pair<bool, std::string> print_signed_term(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.kind == NodeKind::constant && n.value.is_negative())
    return {true, Expr::constant(-n.value).str()};
  if (n.kind == NodeKind::mul && n.kids[0].is_constant() &&
      n.kids[0].node().value.is_negative()) {
    std::vector<Expr> rest(n.kids.begin(), n.kids.end());
    rest[0] = Expr::constant(-rest[0].node().value);
    return {true, print_node(Expr::mul(std::move(rest)), kAdd)};
  }
  return {false, print_node(e, kAdd)};
}

// Children are rendered in stored order ("3/x*(u-1)", not "3*(u-1)/x") so
// that reparsing reproduces the same n-ary node.
std::string print_mul(const Expr& e) {
  const ExprNode& n = e.node();
  std::string out;
  bool have_head = false;
  std::size_t start = 0;
  if (n.kids[0].is_constant()) {
    const Rational& c = n.kids[0].node().value;
    start = 1;
    if (c == Rational(-1)) {
      out = "-";
    } else {
      out = c.str();
      if (c.is_negative()) out = "-" + (-c).str();
      have_head = true;
    }
  }
  for (std::size_t i = start; i < n.kids.size(); ++i) {
    const Expr& k = n.kids[i];
    bool negexp = k.kind() == NodeKind::pow && k.node().exponent.is_negative();
    if (negexp) {
      Expr inv = Expr::pow(k.node().kids[0], -k.node().exponent);
      std::string f = print_node(inv, kPow);
      if (inv.kind() == NodeKind::add || inv.kind() == NodeKind::mul) f = "(" + f + ")";
      if (!have_head) {
        out += "1";
        have_head = true;
      }
      out += "/" + f;
    } else {
      std::string f = print_node(k, kMul);
      if (have_head)
        out += "*" + f;
      else
        out += f;
      have_head = true;
    }
  }
  if (!have_head) out += "1";
  return out;
}

std::string print_node(const Expr& e, int parent) {
  const ExprNode& n = e.node();
  std::string s;
  int prec = kAtom;
  switch (n.kind) {
    case NodeKind::constant:
      if (n.value.is_negative()) {
        s = "-" + (-n.value).str();
        prec = n.value.is_integer() ? kMul : kMul;
      } else {
        s = n.value.str();
        prec = n.value.is_integer() ? kAtom : kMul;  // "3/2" binds like a product
      }
      break;
    case NodeKind::parameter: s = n.name; break;
    case NodeKind::variable: s = var_name(n.var); break;
    case NodeKind::slot: s = slot_name(n.slot); break;
    case NodeKind::apply:
      s = std::string(builtin_name(n.fn)) + "(" + print_node(n.kids[0], kAdd) + ")";
      break;
    case NodeKind::funcsym: {
      s = n.name;
      bool primes = n.kids.size() == 1;
      if (primes) {
        for (int i = 0; i < n.tags[0]; ++i) s += "'";
      } else {
        bool any = false;
        for (int t : n.tags) any = any || t != 0;
        if (any) {
          s += "[";
          for (std::size_t i = 0; i < n.tags.size(); ++i)
            s += (i ? "," : "") + std::to_string(n.tags[i]);
          s += "]";
        }
      }
      s += "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i)
        s += (i ? "," : "") + print_node(n.kids[i], kAdd);
      s += ")";
      break;
    }
    case NodeKind::add: {
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        auto [neg, body] = print_signed_term(n.kids[i]);
        if (i == 0)
          s += neg ? "-" + body : body;
        else
          s += (neg ? "-" : "+") + body;
      }
      prec = kAdd;
      break;
    }
    case NodeKind::mul:
      s = print_mul(e);
      prec = kMul;
      break;
    case NodeKind::pow: {
      const Rational& r = n.exponent;
      if (r.is_negative()) {
        Expr inv = Expr::pow(n.kids[0], -r);
        s = "1/" + print_node(inv, kPow);
        prec = kMul;
      } else {
        std::string base = print_node(n.kids[0], kPow);
        if (n.kids[0].kind() == NodeKind::add || n.kids[0].kind() == NodeKind::mul ||
            n.kids[0].kind() == NodeKind::pow || n.kids[0].is_constant())
          base = "(" + base + ")";
        if (r.is_integer())
          s = base + "^" + std::to_string(r.num);
        else
          s = base + "^(" + r.str() + ")";
        prec = kPow;
      }
      break;
    }
  }
  if (prec < parent) s = "(" + s + ")";
  return s;
}

}  // namespace

std::string Expr::str() const { return print_node(*this, kAdd); }

ParseContext ParseContext::with_params(std::initializer_list<std::string> ps) const {
  ParseContext c = *this;
  for (const auto& p : ps) c.params.insert(p);
  return c;
}

ParseContext ParseContext::with_functions(std::initializer_list<std::string> fs) const {
  ParseContext c = *this;
  for (const auto& f : fs) c.functions.insert(f);
  return c;
}

}  // namespace symred
