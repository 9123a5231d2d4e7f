#include "envforge/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <numbers>

namespace envforge {

namespace {

const std::map<std::string, std::size_t> kFunctions = {
    {"sin", 1}, {"cos", 1}, {"tan", 1}, {"sqrt", 1},
    {"exp", 1}, {"log", 1}, {"abs", 1}, {"atan2", 2},
};

Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

Expr raw_const(double v) {
  ExprNode n;
  n.kind = NodeKind::Constant;
  n.constant = v;
  return node(std::move(n));
}

Expr raw_binary(char op, Expr a, Expr b) {
  ExprNode n;
  n.kind = NodeKind::Binary;
  n.op = op;
  n.args = {std::move(a), std::move(b)};
  return node(std::move(n));
}

// ---------------------------------------------------------------------------
// Lexing
// ---------------------------------------------------------------------------

enum class Tok { Num, Ident, Op, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset = 0;
  double value = 0.0;
  char op = 0;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          ++k;
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          j = k;
        }
      }
      std::string text = s.substr(i, j - i);
      Token t{Tok::Num, text, i, std::strtod(text.c_str(), nullptr), 0};
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back(Token{Tok::Ident, s.substr(i, j - i), i, 0.0, 0});
      i = j;
      continue;
    }
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        out.push_back(Token{Tok::Op, std::string(1, c), i, 0.0, c});
        break;
      case '(':
        out.push_back(Token{Tok::LParen, "(", i, 0.0, 0});
        break;
      case ')':
        out.push_back(Token{Tok::RParen, ")", i, 0.0, 0});
        break;
      case ',':
        out.push_back(Token{Tok::Comma, ",", i, 0.0, 0});
        break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
    ++i;
  }
  out.push_back(Token{Tok::End, "", s.size(), 0.0, 0});
  return out;
}

// ---------------------------------------------------------------------------
// Parsing (recursive descent; precedence ^ > unary- > * / > + -)
// ---------------------------------------------------------------------------

struct Parser {
  const std::vector<Token>& toks;
  const std::vector<std::string>& params;
  std::size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  const Token& take() { return toks[pos++]; }

  Expr parse_sum() {
    Expr lhs = parse_term();
    while (peek().kind == Tok::Op && (peek().op == '+' || peek().op == '-')) {
      char op = take().op;
      lhs = raw_binary(op, std::move(lhs), parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::Op && (peek().op == '*' || peek().op == '/')) {
      char op = take().op;
      lhs = raw_binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::Op && peek().op == '-') {
      take();
      Expr child = parse_unary();
      // Fold "-literal" into a negative constant so the canonical printed
      // form reparses to an identical tree.
      if (child->kind == NodeKind::Constant) return raw_const(-child->constant);
      ExprNode n;
      n.kind = NodeKind::Unary;
      n.op = '-';
      n.args = {std::move(child)};
      return node(std::move(n));
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (peek().kind == Tok::Op && peek().op == '^') {
      take();
      return raw_binary('^', std::move(base), parse_unary());  // right-associative
    }
    return base;
  }

  Expr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Num:
        take();
        return raw_const(t.value);
      case Tok::LParen: {
        take();
        Expr e = parse_sum();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::Ident: {
        take();
        if (t.text == "pi") return raw_const(std::numbers::pi);
        auto fn = kFunctions.find(t.text);
        if (fn != kFunctions.end()) {
          if (peek().kind != Tok::LParen)
            throw SyntaxError("expected '(' after function '" + t.text + "'", peek().offset);
          take();
          std::vector<Expr> args;
          args.push_back(parse_sum());
          while (peek().kind == Tok::Comma) {
            take();
            args.push_back(parse_sum());
          }
          std::size_t close = peek().offset;
          expect(Tok::RParen, "expected ')'");
          if (args.size() != fn->second)
            throw ArityError(t.text, fn->second, args.size(), close);
          ExprNode n;
          n.kind = NodeKind::Call;
          n.name = t.text;
          n.args = std::move(args);
          return node(std::move(n));
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
          if (params[i] == t.text) {
            ExprNode n;
            n.kind = NodeKind::Parameter;
            n.param = static_cast<int>(i);
            n.name = t.text;
            return node(std::move(n));
          }
        }
        throw UnknownIdentifier(t.text, t.offset);
      }
      default:
        throw SyntaxError(t.kind == Tok::End ? "unexpected end of input"
                                             : "unexpected token '" + t.text + "'",
                          t.offset);
    }
  }

  void expect(Tok kind, const char* msg) {
    if (peek().kind != kind) throw SyntaxError(msg, peek().offset);
    take();
  }
};

// Effective precedence for parenthesization. Negative constants print with a
// leading '-' and therefore bind like a unary minus.
int eff_prec(const Expr& e) {
  switch (e->kind) {
    case NodeKind::Binary:
      return (e->op == '+' || e->op == '-') ? 1 : (e->op == '^' ? 4 : 2);
    case NodeKind::Unary:
      return 3;
    case NodeKind::Constant:
      return std::signbit(e->constant) ? 3 : 9;
    default:
      return 9;
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expr& e, std::string& out) {
  auto wrapped = [&out](const Expr& c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  switch (e->kind) {
    case NodeKind::Constant:
      out += fmt_double(e->constant);
      return;
    case NodeKind::Parameter:
      out += e->name;
      return;
    case NodeKind::Unary:
      out += '-';
      wrapped(e->args[0], eff_prec(e->args[0]) < 3);
      return;
    case NodeKind::Binary: {
      int p = eff_prec(e);
      const Expr& l = e->args[0];
      const Expr& r = e->args[1];
      if (e->op == '^') {
        // Right-associative: parenthesize an equal-precedence left operand.
        wrapped(l, eff_prec(l) <= p);
        out += '^';
        wrapped(r, eff_prec(r) < 3);  // exponent slot parses a full unary
      } else {
        wrapped(l, eff_prec(l) < p);
        out += e->op;
        // Left-associative: equal precedence on the right needs parens to
        // keep the tree shape ("a-(b-c)", but also "a+(b+c)").
        wrapped(r, eff_prec(r) <= p);
      }
      return;
    }
    case NodeKind::Call: {
      out += e->name;
      out += '(';
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ',';
        print(e->args[i], out);
      }
      out += ')';
      return;
    }
  }
}

// A subtree with no parameter nodes evaluates to the same value everywhere;
// such an exponent is what makes x^k a true power function.
bool is_const_subtree(const Expr& e) {
  if (e->kind == NodeKind::Parameter) return false;
  for (const Expr& a : e->args)
    if (!is_const_subtree(a)) return false;
  return true;
}

bool integral_value(double v, long long& k) {
  if (!(std::abs(v) <= 9.0e15)) return false;
  double r = std::nearbyint(v);
  if (r != v) return false;
  k = static_cast<long long>(r);
  return true;
}

[[noreturn]] void domain_fail(const char* what, const Expr& e) {
  throw DomainError(what, pretty(e));
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

Expr parse(const std::string& source, const std::vector<std::string>& params) {
  std::vector<Token> toks = lex(source);
  Parser p{toks, params};
  Expr e = p.parse_sum();
  if (p.peek().kind != Tok::End)
    throw SyntaxError("unexpected token '" + p.peek().text + "'", p.peek().offset);
  return e;
}

std::string pretty(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case NodeKind::Constant:
      if (std::memcmp(&a->constant, &b->constant, sizeof(double)) != 0) return false;
      break;
    case NodeKind::Parameter:
      if (a->param != b->param || a->name != b->name) return false;
      break;
    case NodeKind::Unary:
    case NodeKind::Binary:
      if (a->op != b->op) return false;
      break;
    case NodeKind::Call:
      if (a->name != b->name) return false;
      break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

double eval(const Expr& e, std::span<const double> point) {
  switch (e->kind) {
    case NodeKind::Constant:
      return e->constant;
    case NodeKind::Parameter:
      return point[static_cast<std::size_t>(e->param)];
    case NodeKind::Unary:
      return -eval(e->args[0], point);
    case NodeKind::Binary: {
      double a = eval(e->args[0], point);
      double b = eval(e->args[1], point);
      switch (e->op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) domain_fail("division by zero", e);
          return a / b;
        case '^': {
          long long k = 0;
          if (is_const_subtree(e->args[1]) && integral_value(b, k)) {
            if (a == 0.0 && k < 0) domain_fail("division by zero", e);
            return std::pow(a, b);
          }
          if (a <= 0.0) domain_fail("fractional power of a non-positive base", e);
          return std::pow(a, b);
        }
      }
      break;
    }
    case NodeKind::Call: {
      double a = eval(e->args[0], point);
      const std::string& f = e->name;
      if (f == "sin") return std::sin(a);
      if (f == "cos") return std::cos(a);
      if (f == "tan") return std::tan(a);
      if (f == "sqrt") {
        if (a < 0.0) domain_fail("sqrt of a negative", e);
        return std::sqrt(a);
      }
      if (f == "exp") return std::exp(a);
      if (f == "log") {
        if (a <= 0.0) domain_fail("log of a non-positive", e);
        return std::log(a);
      }
      if (f == "abs") return std::abs(a);
      if (f == "atan2") {
        double b = eval(e->args[1], point);
        if (a == 0.0 && b == 0.0) domain_fail("atan2 at the origin", e);
        return std::atan2(a, b);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

DualNumber eval_dual(const Expr& e, std::span<const double> point) {
  const int np = static_cast<int>(point.size());
  switch (e->kind) {
    case NodeKind::Constant:
      return DualNumber::constant(e->constant, np);
    case NodeKind::Parameter:
      return DualNumber::variable(point[static_cast<std::size_t>(e->param)], e->param, np);
    case NodeKind::Unary:
      return dual_ops::neg(eval_dual(e->args[0], point));
    case NodeKind::Binary: {
      DualNumber a = eval_dual(e->args[0], point);
      DualNumber b = eval_dual(e->args[1], point);
      switch (e->op) {
        case '+': return dual_ops::add(a, b);
        case '-': return dual_ops::sub(a, b);
        case '*': return dual_ops::mul(a, b);
        case '/':
          if (b.value == 0.0) domain_fail("division by zero", e);
          return dual_ops::div(a, b);
        case '^': {
          long long k = 0;
          if (is_const_subtree(e->args[1]) && integral_value(b.value, k)) {
            if (a.value == 0.0 && k < 0) domain_fail("division by zero", e);
            return dual_ops::powi(a, k);
          }
          if (a.value <= 0.0) domain_fail("fractional power of a non-positive base", e);
          return dual_ops::pow_general(a, b);
        }
      }
      break;
    }
    case NodeKind::Call: {
      DualNumber a = eval_dual(e->args[0], point);
      const std::string& f = e->name;
      if (f == "sin") return dual_ops::sin(a);
      if (f == "cos") return dual_ops::cos(a);
      if (f == "tan") return dual_ops::tan(a);
      if (f == "sqrt") {
        if (a.value < 0.0) domain_fail("sqrt of a negative", e);
        return dual_ops::sqrt(a);
      }
      if (f == "exp") return dual_ops::exp(a);
      if (f == "log") {
        if (a.value <= 0.0) domain_fail("log of a non-positive", e);
        return dual_ops::log(a);
      }
      if (f == "abs") return dual_ops::abs(a);
      if (f == "atan2") {
        DualNumber b = eval_dual(e->args[1], point);
        if (a.value == 0.0 && b.value == 0.0) domain_fail("atan2 at the origin", e);
        return dual_ops::atan2(a, b);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Builders with the algebraic folds used by derive()
// ---------------------------------------------------------------------------

Expr mk_const(double v) { return raw_const(v); }

Expr mk_param(int index, const std::string& name) {
  ExprNode n;
  n.kind = NodeKind::Parameter;
  n.param = index;
  n.name = name;
  return node(std::move(n));
}

Expr mk_neg(Expr a) {
  if (a->kind == NodeKind::Constant) return raw_const(-a->constant);
  if (a->kind == NodeKind::Unary) return a->args[0];
  ExprNode n;
  n.kind = NodeKind::Unary;
  n.op = '-';
  n.args = {std::move(a)};
  return node(std::move(n));
}

namespace {
bool is_const(const Expr& e, double v) {
  return e->kind == NodeKind::Constant && e->constant == v;
}
}  // namespace

Expr mk_binary(char op, Expr a, Expr b) {
  switch (op) {
    case '+':
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
        return raw_const(a->constant + b->constant);
      break;
    case '-':
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return mk_neg(std::move(b));
      if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
        return raw_const(a->constant - b->constant);
      break;
    case '*':
      if (is_const(a, 0.0) || is_const(b, 0.0)) return raw_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (is_const(a, -1.0)) return mk_neg(std::move(b));
      if (is_const(b, -1.0)) return mk_neg(std::move(a));
      if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
        return raw_const(a->constant * b->constant);
      break;
    case '/':
      // 0/x folds to 0: derived trees are only evaluated where the original
      // expression is smooth, so the dropped pole is never reachable.
      if (is_const(a, 0.0) && !is_const(b, 0.0)) return raw_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case '^':
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return raw_const(1.0);
      break;
  }
  return raw_binary(op, std::move(a), std::move(b));
}

Expr mk_call(const std::string& name, std::vector<Expr> args) {
  auto fn = kFunctions.find(name);
  if (fn == kFunctions.end()) throw UnknownIdentifier(name, 0);
  if (args.size() != fn->second) throw ArityError(name, fn->second, args.size(), 0);
  ExprNode n;
  n.kind = NodeKind::Call;
  n.name = name;
  n.args = std::move(args);
  return node(std::move(n));
}

// ---------------------------------------------------------------------------
// Symbolic derivative and substitution
// ---------------------------------------------------------------------------

Expr derive(const Expr& e, int param) {
  switch (e->kind) {
    case NodeKind::Constant:
      return raw_const(0.0);
    case NodeKind::Parameter:
      return raw_const(e->param == param ? 1.0 : 0.0);
    case NodeKind::Unary:
      return mk_neg(derive(e->args[0], param));
    case NodeKind::Binary: {
      const Expr& u = e->args[0];
      const Expr& v = e->args[1];
      Expr du = derive(u, param);
      Expr dv = derive(v, param);
      switch (e->op) {
        case '+': return mk_add(du, dv);
        case '-': return mk_sub(du, dv);
        case '*': return mk_add(mk_mul(du, v), mk_mul(u, dv));
        case '/':
          return mk_div(mk_sub(mk_mul(du, v), mk_mul(u, dv)), mk_mul(v, v));
        case '^': {
          if (is_const_subtree(v)) {
            double c = eval(v, {});
            return mk_mul(mk_const(c), mk_mul(mk_pow(u, mk_const(c - 1.0)), du));
          }
          // d(u^v) = u^v * (dv log u + v du / u); requires u > 0 at eval time.
          return mk_mul(mk_pow(u, v),
                        mk_add(mk_mul(dv, mk_call("log", {u})), mk_div(mk_mul(v, du), u)));
        }
      }
      break;
    }
    case NodeKind::Call: {
      const Expr& u = e->args[0];
      Expr du = derive(u, param);
      const std::string& f = e->name;
      if (f == "sin") return mk_mul(mk_call("cos", {u}), du);
      if (f == "cos") return mk_neg(mk_mul(mk_call("sin", {u}), du));
      if (f == "tan")
        return mk_div(du, mk_pow(mk_call("cos", {u}), mk_const(2.0)));
      if (f == "sqrt")
        return mk_div(du, mk_mul(mk_const(2.0), mk_call("sqrt", {u})));
      if (f == "exp") return mk_mul(mk_call("exp", {u}), du);
      if (f == "log") return mk_div(du, u);
      if (f == "abs") return mk_mul(mk_div(u, mk_call("abs", {u})), du);
      if (f == "atan2") {
        const Expr& x = e->args[1];
        Expr dx = derive(x, param);
        Expr num = mk_sub(mk_mul(x, du), mk_mul(u, dx));
        Expr den = mk_add(mk_mul(x, x), mk_mul(u, u));
        return mk_div(num, den);
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

Expr substitute(const Expr& e, int param, const Expr& replacement,
                const std::vector<std::string>& old_params,
                const std::vector<std::string>& new_params) {
  switch (e->kind) {
    case NodeKind::Constant:
      return e;
    case NodeKind::Parameter: {
      if (e->param == param) return replacement;
      const std::string& name = old_params[static_cast<std::size_t>(e->param)];
      for (std::size_t i = 0; i < new_params.size(); ++i)
        if (new_params[i] == name) return mk_param(static_cast<int>(i), name);
      throw Error("substitute: parameter '" + name + "' missing from the new parameter list");
    }
    default: {
      ExprNode n;
      n.kind = e->kind;
      n.constant = e->constant;
      n.param = e->param;
      n.name = e->name;
      n.op = e->op;
      n.args.reserve(e->args.size());
      for (const Expr& a : e->args)
        n.args.push_back(substitute(a, param, replacement, old_params, new_params));
      return node(std::move(n));
    }
  }
}

}  // namespace envforge
