#include <cctype>

#include "symred/expr.hpp"

namespace symred {

namespace {

// Grammar:
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' exponent)?
//   base     := number | ident | ident tags? '(' expr (',' expr)* ')'
//             | '(' expr ')' | '-' factor
//   exponent := unsigned integer | '(' signed rational ')'
//   tags     := '\''+ | '[' int (',' int)* ']'
// t,x,u are variables; declared single identifiers are parameters; applied
// identifiers are builtins or (declared/implicit) function symbols.
class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : text_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool eat(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = e + parse_term();
      else if (eat('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (eat('*'))
        e = e * parse_factor();
      else if (eat('/'))
        e = e / parse_factor();
      else
        return e;
    }
  }

  Expr parse_factor() {
    Expr b = parse_base();
    if (eat('^')) return Expr::pow(b, parse_exponent());
    return b;
  }

  Rational parse_exponent() {
    skip_ws();
    if (eat('(')) {
      bool neg = eat('-');
      long long n = parse_uint("exponent numerator");
      long long d = 1;
      if (eat('/')) d = parse_uint("exponent denominator");
      expect(')', "closing rational exponent");
      return Rational(neg ? -n : n, d);
    }
    return Rational(parse_uint("exponent"));
  }

  long long parse_uint(const char* what) {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail(std::string("expected ") + what);
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v < 0) fail("integer literal overflow");
      ++pos_;
    }
    return v;
  }

  Expr parse_number() {
    long long ip = parse_uint("number");
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      __int128 num = ip;
      __int128 den = 1;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected digits after decimal point");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num = num * 10 + (text_[pos_] - '0');
        den *= 10;
        if (den > __int128(1e18)) fail("decimal literal too long");
        ++pos_;
      }
      return Expr::constant(Rational::from128(num, den));
    }
    return Expr::integer(ip);
  }

  Expr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')', "closing parenthesis");
      return e;
    }
    if (c == '-') {
      ++pos_;
      return -parse_factor();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail("unexpected character");
  }

  Expr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));

    int primes = 0;
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    std::vector<int> tags;
    if (pos_ < text_.size() && text_[pos_] == '[') {
      if (primes) fail("mixed prime and bracket derivative tags");
      ++pos_;
      do {
        tags.push_back(static_cast<int>(parse_uint("derivative order")));
      } while (eat(','));
      expect(']', "closing derivative tag");
    }

    bool applied = peek('(');
    if (!applied) {
      if (primes || !tags.empty()) fail("derivative tag requires function application");
      if (name == "t") return Expr::variable(Var::t);
      if (name == "x") return Expr::variable(Var::x);
      if (name == "u") return Expr::variable(Var::u);
      if (ctx_.params.count(name)) return Expr::parameter(name);
      pos_ = start;
      fail("unknown identifier '" + name + "' (not a declared parameter/function)");
    }

    ++pos_;  // '('
    std::vector<Expr> args;
    args.push_back(parse_expr());
    while (eat(',')) args.push_back(parse_expr());
    expect(')', "closing argument list");

    if (auto fb = builtin_by_name(name)) {
      if (primes || !tags.empty()) fail("derivative tags are not allowed on builtins");
      if (args.size() != 1) fail("builtin '" + name + "' takes one argument");
      return Expr::apply(*fb, std::move(args[0]));
    }
    if (!ctx_.functions.count(name) && !ctx_.implicit_functions) {
      pos_ = start;
      fail("unknown identifier '" + name + "' (not a declared parameter/function)");
    }
    if (primes) {
      if (args.size() != 1) fail("prime tags require a single-argument symbol");
      tags = {primes};
    }
    if (!tags.empty() && tags.size() != args.size())
      fail("derivative tag count does not match argument count");
    return Expr::func(std::move(name), std::move(args), std::move(tags));
  }
};

}  // namespace

Expr parse(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).run(); }

}  // namespace symred
