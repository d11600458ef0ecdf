#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "symred/rational.hpp"

namespace symred {

enum class Var { t, x, u };

/// Formal jet-space slots (u_t, u_x, ...). These are not parsed variables;
/// they exist so that manifold substitutions in the determining-equation
/// machinery are structural.
enum class Slot { ut, ux, utt, utx, uxx, utxx, uxxx };

enum class Builtin { tan, tanh, cot, coth, sin, cos, exp, ln };

enum class NodeKind { constant, parameter, variable, slot, apply, funcsym, add, mul, pow };

const char* var_name(Var v);
const char* slot_name(Slot s);
const char* builtin_name(Builtin f);
std::optional<Builtin> builtin_by_name(const std::string& name);

class Expr;

struct ExprNode {
  NodeKind kind;
  Rational value;            // constant
  std::string name;          // parameter / funcsym
  Var var = Var::t;          // variable
  Slot slot = Slot::ut;      // slot
  Builtin fn = Builtin::tan; // apply
  Rational exponent;         // pow
  std::vector<Expr> kids;    // add/mul children, apply arg, pow base, funcsym args
  std::vector<int> tags;     // funcsym derivative orders, one per argument
};

/// Immutable symbolic expression; cheap to copy (shared tree).
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(Rational r);
  static Expr integer(long long n) { return constant(Rational(n)); }
  static Expr variable(Var v);
  static Expr parameter(std::string name);
  static Expr slot(Slot s);
  static Expr apply(Builtin f, Expr arg);
  static Expr func(std::string name, std::vector<Expr> args, std::vector<int> tags = {});

  static Expr add(std::vector<Expr> kids);
  static Expr mul(std::vector<Expr> kids);
  static Expr pow(Expr base, Rational exponent);

  const ExprNode& node() const { return *node_; }
  NodeKind kind() const { return node_->kind; }
  bool is_constant() const { return node_->kind == NodeKind::constant; }
  bool is_zero_literal() const { return is_constant() && node_->value.is_zero(); }
  bool is_one_literal() const { return is_constant() && node_->value.is_one(); }

  bool same(const Expr& other) const;  // structural equality

  bool contains_var(Var v) const;
  bool contains_slot(Slot s) const;
  bool contains_any_slot() const;
  void collect_params(std::set<std::string>& out) const;
  void collect_funcs(std::set<std::string>& out) const;

  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

inline Expr operator+(const Expr& a, long long b) { return a + Expr::integer(b); }
inline Expr operator*(long long a, const Expr& b) { return Expr::integer(a) * b; }

// ---------------------------------------------------------------------------
// Parsing / printing

struct SyntaxError : std::runtime_error {
  std::size_t offset;
  SyntaxError(std::string msg, std::size_t off)
      : std::runtime_error(std::move(msg)), offset(off) {}
};

/// Identifier context for the parser: t,x,u are always variables, builtins
/// are fixed, everything else must be declared (or implicitly allowed as a
/// function symbol when `implicit_functions` is set, the CLI convenience).
struct ParseContext {
  std::set<std::string> params;
  std::set<std::string> functions;
  bool implicit_functions = false;

  ParseContext with_params(std::initializer_list<std::string> ps) const;
  ParseContext with_functions(std::initializer_list<std::string> fs) const;
};

Expr parse(std::string_view text, const ParseContext& ctx = {});

// ---------------------------------------------------------------------------
// Calculus

/// Exact partial derivative with respect to t, x or u. Derivatives of the
/// trig/hyperbolic builtins stay in the tan/tanh/cot/coth-closed field
/// (no sec/csc nodes); function symbols gain a derivative tag.
Expr differentiate(const Expr& e, Var v);

/// Partial derivative that treats a jet slot as an independent coordinate.
Expr differentiate_slot(const Expr& e, Slot s);

struct FuncReplacement {
  std::vector<Var> args;  // declared argument variables of the symbol
  Expr body;              // expression in those variables
};

struct Bindings {
  std::map<Var, Expr> vars;
  std::map<std::string, Expr> params;
  std::map<std::string, FuncReplacement> funcs;
  std::map<Slot, Expr> slots;
};

struct ArityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Simultaneous substitution. Derivative-tagged function symbols are
/// resolved by differentiating the replacement body.
Expr substitute(const Expr& e, const Bindings& b);

inline Expr substitute_slot(const Expr& e, Slot s, const Expr& by) {
  Bindings b;
  b.slots[s] = by;
  return substitute(e, b);
}

// ---------------------------------------------------------------------------
// Laurent normalization

struct NotLaurentInU : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite sum of integer powers of u with u-free coefficients.
struct LaurentForm {
  std::map<long long, Expr> coeffs;  // power -> coefficient, zero coefficients omitted

  long long min_power() const { return coeffs.empty() ? 0 : coeffs.begin()->first; }
  long long max_power() const { return coeffs.empty() ? 0 : coeffs.rbegin()->first; }
  Expr reassemble() const;
  std::string str() const;
};

/// Expands e and collects it as a Laurent polynomial in u.
/// Throws NotLaurentInU when u occurs inside a transcendental function,
/// inside a function-symbol argument kept atomic, or with a fractional power.
LaurentForm normalize_u_poly(const Expr& e);

/// Same machinery with a jet slot as the main atom (used to split
/// prolongation residuals in powers of u_x).
LaurentForm normalize_slot_poly(const Expr& e, Slot s);

/// Expand products/integer powers of sums and collect like monomials with
/// exact rational arithmetic. Not a general simplifier: no trig rewriting.
Expr expand_collect(const Expr& e);

// ---------------------------------------------------------------------------
// Numeric evaluation

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalPoint {
  double t = 0, x = 0, u = 0;
  std::map<std::string, double> params;
  std::map<Slot, double> slots;
};

/// Double-precision evaluation; throws EvalError on unbound symbols and on
/// non-finite results (poles, overflow).
double eval_numeric(const Expr& e, const EvalPoint& p);

// ---------------------------------------------------------------------------
// Probabilistic zero testing

struct Interval {
  double lo = 0, hi = 1;
};

struct SampleBox {
  Interval t{0.1, 1.0};
  Interval x{0.5, 3.0};
  Interval u{-2.0, 2.0};
  Interval ux{-2.0, 2.0};  // used when the expression carries the u_x slot
};

struct ZeroTestPolicy {
  int samples = 200;
  int param_draws = 5;
  double tolerance = 1e-9;
  /// A sample point is rejected when any additive term exceeds 1/margin in
  /// magnitude or fails to evaluate (pole proximity).
  double margin = 1e-8;
  std::uint64_t seed = 0;
  SampleBox box;
};

/// Union of closed intervals per parameter name; parameters without an entry
/// draw from the default [-3,-0.1] U [0.1,3].
struct ParamRanges {
  std::map<std::string, std::vector<Interval>> ranges;
};

struct ZeroWitness {
  double t = 0, x = 0, u = 0;
  std::map<std::string, double> params;  // includes "u_x" when sampled
  double value = 0;
  double scale = 0;
};

struct ZeroResult {
  bool zero = true;
  std::optional<ZeroWitness> witness;
  /// Set when the failing value sits at the double-precision cancellation
  /// floor relative to the term magnitudes (tolerance chosen too tight).
  bool tolerance_sensitive = false;
};

struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relative cancellation test: zero iff |e| <= tol*(1+scale) at every sample,
/// where scale is the largest |additive term| at that point. On failure the
/// first failing point is the witness.
ZeroResult is_zero(const Expr& e, const ZeroTestPolicy& policy, const ParamRanges& ranges = {});

// ---------------------------------------------------------------------------
// Compiled evaluator for inner numeric loops (ODE right-hand sides, grids).

class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Parameters are frozen at compile time; function symbols and slots are
  /// not compilable.
  CompiledExpr(const Expr& e, const std::map<std::string, double>& params = {});
  double operator()(double t, double x, double u) const;

 private:
  struct Op {
    int code;
    double imm;
    long long iexp;
  };
  std::vector<Op> ops_;
  mutable std::vector<double> stack_;
};

/// Deterministic 64-bit generator (splitmix64) with a portable uniform draw.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double uniform01();                    // [0,1)
  double uniform(double lo, double hi);  // [lo,hi)
};

}  // namespace symred
